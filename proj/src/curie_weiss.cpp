#include "ergmlab/curie_weiss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ergmlab/errors.hpp"

namespace ergmlab {

double CwMeasure::mean_s() const {
  double m = 0;
  for (std::size_t k = 0; k < support.size(); ++k) m += probs[k] * support[k];
  return m;
}

double CwMeasure::var_s() const {
  const double mu = mean_s();
  double v = 0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    v += probs[k] * (support[k] - mu) * (support[k] - mu);
  }
  return v;
}

CwMeasure build_cw(int N, double beta) {
  if (N < 1) throw PreconditionError("Curie-Weiss needs N >= 1");
  if (!(beta > 0 && beta < 1)) {
    throw PreconditionError("Curie-Weiss beta must lie in (0,1) (subcritical only)");
  }
  CwMeasure m;
  m.N = N;
  m.beta = beta;
  m.sigma_sq = N / (1 - beta);
  std::vector<double> logw;
  const double n = N;
  for (int k = 0; k <= N; ++k) {
    const int s = 2 * k - N;
    m.support.push_back(s);
    logw.push_back(std::lgamma(n + 1) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1) +
                   beta * s * s / (2 * n));
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double z = 0;
  for (double lw : logw) z += std::exp(lw - top);
  for (double lw : logw) m.probs.push_back(std::exp(lw - top) / z);
  return m;
}

stats::DiscreteLaw cw_w_law(const CwMeasure& m) {
  stats::DiscreteLaw law;
  const double sd = std::sqrt(m.sigma_sq);
  for (std::size_t k = 0; k < m.support.size(); ++k) {
    law.support.push_back(m.support[k] / sd);
    law.probs.push_back(m.probs[k]);
  }
  return law;
}

CwDistances exact_distances(const CwMeasure& m) {
  const auto law = cw_w_law(m);
  return {stats::kolmogorov_to_normal(law), stats::wasserstein_to_normal(law)};
}

double variance_ratio(const CwMeasure& m) { return m.var_s() / m.sigma_sq; }

double cw_exact_delta3(const CwMeasure& m) {
  return m.beta / m.N * std::sqrt(m.var_s() / m.sigma_sq);
}

CwFamily::CwFamily(int N, double beta) : m_(build_cw(N, beta)), sigma_(std::sqrt(m_.sigma_sq)) {
  double acc = 0;
  for (double p : m_.probs) cdf_.push_back(acc += p);
}

namespace {
double magnetization(const State& x) { return std::accumulate(x.begin(), x.end(), 0.0); }
}  // namespace

double CwFamily::f(const State& x) const { return magnetization(x) / sigma_; }

double CwFamily::g(const State& x) const {
  const double s = magnetization(x);
  return m_.beta * s * s / (2.0 * m_.N);
}

void CwFamily::for_each_tilted(std::size_t count, std::uint64_t seed,
                               const std::function<void(std::size_t, const State&)>& visit) const {
  CounterRng rng(seed);
  State x(dimension());
  std::vector<std::size_t> order(dimension());
  for (std::size_t k = 0; k < count; ++k) {
    const double u = rng.uniform() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
    const std::size_t plus = idx;  // support index k has k positive spins
    // Partial Fisher-Yates: the first `plus` slots of a random permutation.
    std::iota(order.begin(), order.end(), 0);
    std::fill(x.begin(), x.end(), -1.0);
    for (std::size_t j = 0; j < plus; ++j) {
      const std::size_t r = j + static_cast<std::size_t>(rng.below(order.size() - j));
      std::swap(order[j], order[r]);
      x[order[j]] = 1.0;
    }
    visit(k, x);
  }
}

void CwFamily::perturbation_diffs(const State& x, const State& xp, PerturbationDiffs& out) const {
  const std::size_t N = x.size();
  out.single_f.assign(N, 0.0);
  out.single_g.assign(N, 0.0);
  out.chain_f.assign(N, 0.0);
  const double s = magnetization(x);
  const double c = m_.beta / (2.0 * m_.N);
  for (std::size_t i = 0; i < N; ++i) {
    const double d = x[i] - xp[i];
    if (d == 0) continue;
    const double t = s - d;
    out.single_f[i] = d / sigma_;
    out.chain_f[i] = d / sigma_;
    out.single_g[i] = c * (s * s - t * t);
  }
}

std::optional<double> CwFamily::delta1_closed(const State&, std::size_t) const {
  return 1 / m_.sigma_sq;
}

std::optional<double> CwFamily::delta2_closed(const State& x, std::size_t i) const {
  return m_.beta * (magnetization(x) - x[i]) / (m_.N * sigma_);
}

std::optional<double> CwFamily::sum_delta1_closed(const State&) const {
  return m_.N / m_.sigma_sq;
}

std::optional<double> CwFamily::sum_delta2_closed(const State& x) const {
  return m_.beta * magnetization(x) * (m_.N - 1) / (m_.N * sigma_);
}

}  // namespace ergmlab

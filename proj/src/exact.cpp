#include "ergmlab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergmlab/errors.hpp"

namespace ergmlab {

ExactMeasure::ExactMeasure(const ErgmSpec& spec, int n) : spec_(spec), n_(n) {
  if (n < 2 || n > kMaxVertices) {
    throw PreconditionError("exact enumeration supports 2 <= n <= 6, got n = " +
                            std::to_string(n));
  }
  const std::size_t slots = pair_count(n);
  const std::size_t count = std::size_t{1} << slots;
  log_weights_.resize(count);
  std::vector<std::vector<std::uint64_t>> homs(spec.size(), std::vector<std::uint64_t>(count));
  const double nn = n;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < count; ++code) {
    const EdgeGraph g = EdgeGraph::from_code(n, code);
    double t = 0;
    for (std::size_t j = 0; j < spec.size(); ++j) {
      homs[j][code] = spec.counter(j).count(g);
      t += spec.betas()[j] * int_pow(nn, 2 - spec.templates()[j].vertices()) *
           static_cast<double>(homs[j][code]);
    }
    log_weights_[code] = t;
    top = std::max(top, t);
  }
  double z = 0;
  for (double lw : log_weights_) z += std::exp(lw - top);
  log_z_ = top + std::log(z);

  probs_.resize(count);
  edge_law_.assign(slots + 1, 0.0);
  hom_moments_.assign(spec.size(), Moments{});
  for (std::size_t code = 0; code < count; ++code) {
    const double pr = std::exp(log_weights_[code] - log_z_);
    probs_[code] = pr;
    const auto e = static_cast<std::size_t>(__builtin_popcountll(code));
    edge_law_[e] += pr;
    edge_moments_.mean += pr * static_cast<double>(e);
    edge_moments_.second += pr * static_cast<double>(e * e);
    for (std::size_t j = 0; j < spec.size(); ++j) {
      const auto h = static_cast<double>(homs[j][code]);
      hom_moments_[j].mean += pr * h;
      hom_moments_[j].second += pr * h * h;
    }
  }
}

double ExactMeasure::expectation(const std::function<double(const EdgeGraph&)>& fn) const {
  double s = 0;
  for (std::size_t code = 0; code < probs_.size(); ++code) {
    s += probs_[code] * fn(EdgeGraph::from_code(n_, code));
  }
  return s;
}

double ExactMeasure::expectation_by_code(const std::function<double(std::size_t)>& fn) const {
  double s = 0;
  for (std::size_t code = 0; code < probs_.size(); ++code) s += probs_[code] * fn(code);
  return s;
}

double ExactMeasure::marginal(EdgeId s) const {
  double m = 0;
  for (std::size_t code = 0; code < probs_.size(); ++code) {
    if ((code >> s.index) & 1U) m += probs_[code];
  }
  return m;
}

double exact_conditional(const ExactMeasure& m, EdgeId s,
                         const std::vector<std::pair<EdgeId, bool>>& condition) {
  std::size_t mask = 0;
  std::size_t want = 0;
  for (const auto& [l, v] : condition) {
    if (l.index >= m.pair_slots()) throw PreconditionError("conditioning edge out of range");
    if (l == s) throw PreconditionError("target edge appears in its own condition");
    const std::size_t bit = std::size_t{1} << l.index;
    if ((mask & bit) && (((want & bit) != 0) != v)) {
      throw PreconditionError("contradictory condition on edge " + std::to_string(l.index));
    }
    mask |= bit;
    if (v) want |= bit;
  }
  double both = 0;
  double total = 0;
  for (std::size_t code = 0; code < m.states(); ++code) {
    if ((code & mask) != want) continue;
    total += m.prob(code);
    if ((code >> s.index) & 1U) both += m.prob(code);
  }
  return both / total;
}

ExactWLaw exact_w_law(const ExactMeasure& m, double sigma_sq) {
  if (!(sigma_sq > 0)) throw PreconditionError("sigma^2 must be positive");
  ExactWLaw w;
  w.mu = m.edge_moments().mean;
  w.sigma_sq = sigma_sq;
  const double sd = std::sqrt(sigma_sq);
  const auto& law = m.edge_count_law();
  for (std::size_t e = 0; e < law.size(); ++e) {
    w.law.support.push_back((static_cast<double>(e) - w.mu) / sd);
    w.law.probs.push_back(law[e]);
  }
  w.kolmogorov = stats::kolmogorov_to_normal(w.law);
  w.wasserstein = stats::wasserstein_to_normal(w.law);
  return w;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t k = std::max(a.size(), b.size());
  double s = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    s += std::abs(x - y);
  }
  return 0.5 * s;
}

}  // namespace ergmlab

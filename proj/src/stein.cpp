#include "ergmlab/stein.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ergmlab/errors.hpp"
#include "ergmlab/stats.hpp"

namespace ergmlab {

void TiltedFamily::draw_baseline(CounterRng& rng, State& x) const {
  x.resize(dimension());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = draw_coordinate(i, rng);
}

void TiltedFamily::generic_perturbation_diffs(const State& x, const State& xp,
                                              PerturbationDiffs& out) const {
  const std::size_t n = x.size();
  out.single_f.assign(n, 0.0);
  out.single_g.assign(n, 0.0);
  out.chain_f.assign(n, 0.0);
  const double fx = f(x);
  const double gx = g(x);
  State y = x;
  for (std::size_t i = 0; i < n; ++i) {
    if (xp[i] == x[i]) continue;
    y[i] = xp[i];
    out.single_f[i] = fx - f(y);
    out.single_g[i] = gx - g(y);
    y[i] = x[i];
  }
  // Walk x^[0] = x' up to x^[N] = x one coordinate at a time.
  State z = xp;
  double prev = f(z);
  for (std::size_t i = 0; i < n; ++i) {
    if (xp[i] == x[i]) continue;
    z[i] = x[i];
    const double cur = f(z);
    out.chain_f[i] = cur - prev;
    prev = cur;
  }
}

void TiltedFamily::perturbation_diffs(const State& x, const State& xp,
                                      PerturbationDiffs& out) const {
  generic_perturbation_diffs(x, xp, out);
}

std::optional<double> TiltedFamily::sum_delta1_closed(const State& x) const {
  double s = 0;
  for (std::size_t i = 0; i < dimension(); ++i) {
    const auto d = delta1_closed(x, i);
    if (!d) return std::nullopt;
    s += *d;
  }
  return s;
}

std::optional<double> TiltedFamily::sum_delta2_closed(const State& x) const {
  double s = 0;
  for (std::size_t i = 0; i < dimension(); ++i) {
    const auto d = delta2_closed(x, i);
    if (!d) return std::nullopt;
    s += *d;
  }
  return s;
}

namespace {

double mc_delta_i(const TiltedFamily& fam, const State& x, std::size_t i, std::size_t inner,
                  CounterRng& rng, bool use_g) {
  if (inner < 1) throw PreconditionError("inner draws must be at least 1");
  PerturbationDiffs d;
  State xp;
  double s = 0;
  for (std::size_t k = 0; k < inner; ++k) {
    fam.draw_baseline(rng, xp);
    fam.perturbation_diffs(x, xp, d);
    s += 0.5 * (use_g ? d.single_g[i] : d.single_f[i]) * d.chain_f[i];
  }
  return s / static_cast<double>(inner);
}

// Delete-one-batch jackknife for sqrt(Var(values) - mean(noise)).
Estimate jackknife_sd(const std::vector<double>& values, const std::vector<double>& noise,
                      std::size_t batches) {
  auto sd_of = [&](std::size_t skip_lo, std::size_t skip_hi) {
    double n = 0;
    double s = 0;
    double ss = 0;
    double noise_sum = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k >= skip_lo && k < skip_hi) continue;
      n += 1;
      s += values[k];
      ss += values[k] * values[k];
      noise_sum += noise[k];
    }
    if (n < 2) return 0.0;
    const double mean = s / n;
    const double var = std::max(0.0, (ss - n * mean * mean) / (n - 1));
    return std::sqrt(std::max(0.0, var - noise_sum / n));
  };
  Estimate e;
  e.value = sd_of(0, 0);
  batches = std::min(batches, values.size());
  if (batches < 2) return e;
  const std::size_t per = values.size() / batches;
  std::vector<double> leave;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t hi = b + 1 == batches ? values.size() : (b + 1) * per;
    leave.push_back(sd_of(b * per, hi));
  }
  const double m = stats::mean(leave);
  double ss = 0;
  for (double v : leave) ss += (v - m) * (v - m);
  e.se = std::sqrt(static_cast<double>(batches - 1) / static_cast<double>(batches) * ss);
  return e;
}

}  // namespace

double delta1_i(const TiltedFamily& fam, const State& x, std::size_t i, std::size_t inner,
                CounterRng& rng, bool allow_closed) {
  if (allow_closed) {
    if (auto c = fam.delta1_closed(x, i)) return *c;
  }
  return mc_delta_i(fam, x, i, inner, rng, false);
}

double delta2_i(const TiltedFamily& fam, const State& x, std::size_t i, std::size_t inner,
                CounterRng& rng, bool allow_closed) {
  if (allow_closed) {
    if (auto c = fam.delta2_closed(x, i)) return *c;
  }
  return mc_delta_i(fam, x, i, inner, rng, true);
}

DeltaSums collect_delta_sums(const TiltedFamily& fam, const SteinOptions& opts) {
  if (opts.outer < 2) throw PreconditionError("need at least two outer draws");
  DeltaSums d;
  d.sum1.reserve(opts.outer);
  d.closed = opts.use_closed_forms;
  const std::uint64_t inner_seed = derive_seed(opts.seed, 0x5157);
  PerturbationDiffs diffs;
  State xp;
  fam.for_each_tilted(opts.outer, opts.seed, [&](std::size_t k, const State& y) {
    d.f.push_back(fam.f(y));
    std::optional<double> c1;
    std::optional<double> c2;
    if (opts.use_closed_forms) {
      c1 = fam.sum_delta1_closed(y);
      c2 = fam.sum_delta2_closed(y);
    }
    double m1 = 0, q1 = 0, m2 = 0, q2 = 0;
    if (!c1 || !c2) {
      if (opts.inner < 2) throw PreconditionError("nested Monte Carlo needs at least two inner draws");
      d.closed = false;
      CounterRng rng(inner_seed, k);
      const auto K = static_cast<double>(opts.inner);
      for (std::size_t j = 0; j < opts.inner; ++j) {
        fam.draw_baseline(rng, xp);
        fam.perturbation_diffs(y, xp, diffs);
        double a = 0;
        double c = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
          a += 0.5 * diffs.single_f[i] * diffs.chain_f[i];
          c += 0.5 * diffs.single_g[i] * diffs.chain_f[i];
        }
        m1 += a;
        q1 += a * a;
        m2 += c;
        q2 += c * c;
      }
      m1 /= K;
      m2 /= K;
      q1 = std::max(0.0, (q1 - K * m1 * m1) / (K - 1)) / K;
      q2 = std::max(0.0, (q2 - K * m2 * m2) / (K - 1)) / K;
    }
    d.sum1.push_back(c1 ? *c1 : m1);
    d.noise1.push_back(c1 ? 0.0 : q1);
    d.sum2.push_back(c2 ? *c2 : m2);
    d.noise2.push_back(c2 ? 0.0 : q2);
  });
  return d;
}

Estimate estimate_b(const DeltaSums& d, std::size_t batches, std::vector<std::string>* warnings) {
  const auto bm = stats::batch_mean(d.sum1, batches);
  Estimate e{bm.mean, bm.se};
  if (warnings && std::abs(e.value) <= 2 * e.se) {
    warnings->push_back("b is within 2 se of 0: the normal-approximation bound degenerates");
  }
  return e;
}

Estimate estimate_delta2(const DeltaSums& d, std::size_t batches) {
  return jackknife_sd(d.sum1, d.noise1, batches);
}

Estimate estimate_delta3(const DeltaSums& d, double b, std::size_t batches) {
  std::vector<double> q(d.sum2.size());
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = d.sum2[k] - (1 - b) * d.f[k];
  return jackknife_sd(q, d.noise2, batches);
}

SteinEstimates estimate_stein(const TiltedFamily& fam, const SteinOptions& opts) {
  const DeltaSums d = collect_delta_sums(fam, opts);
  SteinEstimates s;
  s.outer = opts.outer;
  s.inner = d.closed ? 0 : opts.inner;
  s.closed_forms = d.closed;
  s.b = estimate_b(d, opts.batches, &s.warnings);
  s.delta2 = estimate_delta2(d, opts.batches);
  s.delta3 = estimate_delta3(d, s.b.value, opts.batches);
  return s;
}

Delta1Diagnostics diagnostic_delta1(const TiltedFamily& fam, std::size_t outer, std::size_t inner,
                                    std::uint64_t seed) {
  if (outer < 2 || inner < 1) throw PreconditionError("diagnostic needs outer >= 2, inner >= 1");
  const std::size_t N = fam.dimension();
  const double dstar = fam.d_star();
  std::vector<double> logw(outer);
  std::vector<std::array<double, 4>> terms(outer);
  State x;
  State xp;
  PerturbationDiffs d;
  for (std::size_t k = 0; k < outer; ++k) {
    CounterRng rng(seed, k);
    fam.draw_baseline(rng, x);
    logw[k] = fam.g(x);
    std::array<double, 4> t{0, 0, 0, 0};
    double mean_cross = 0;
    for (std::size_t j = 0; j < inner; ++j) {
      fam.draw_baseline(rng, xp);
      fam.perturbation_diffs(x, xp, d);
      for (std::size_t i = 0; i < N; ++i) {
        const double df = d.single_f[i];
        const double dg = d.single_g[i];
        const double ch = std::abs(d.chain_f[i]);
        const double grow = std::exp(std::abs(dg));
        t[0] += df * df * ch;
        t[1] += grow * dg * dg * (std::abs(dg) + std::abs(df)) * ch;
        t[2] += grow * dstar * std::abs(df) * std::abs(dg);
        mean_cross += dstar * df;
      }
    }
    const auto K = static_cast<double>(inner);
    terms[k] = {t[0] / K, t[1] / K, t[2] / K, std::abs(mean_cross / K)};
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double sw = 0;
  double sw2 = 0;
  std::vector<double> w(outer);
  for (std::size_t k = 0; k < outer; ++k) {
    w[k] = std::exp(logw[k] - top);
    sw += w[k];
    sw2 += w[k] * w[k];
  }
  auto weighted = [&](const std::function<double(const std::array<double, 4>&)>& pick) {
    double m = 0;
    for (std::size_t k = 0; k < outer; ++k) m += w[k] * pick(terms[k]);
    m /= sw;
    double v = 0;
    for (std::size_t k = 0; k < outer; ++k) {
      const double r = pick(terms[k]) - m;
      v += w[k] * w[k] * r * r;
    }
    return Estimate{m, std::sqrt(v) / sw};
  };
  Delta1Diagnostics r;
  r.draws = outer;
  r.cubic_f = weighted([](const auto& t) { return t[0]; });
  r.tilt_remainder = weighted([](const auto& t) { return t[1]; });
  r.dstar_cross = weighted([](const auto& t) { return t[2]; });
  r.dstar_mean = weighted([](const auto& t) { return t[3]; });
  r.delta1 = weighted([](const auto& t) { return t[0] + t[1]; });
  r.delta1_prime = weighted([](const auto& t) { return t[2] + t[3] + t[1]; });
  r.ess = sw * sw / sw2;
  if (r.ess < kMinImportanceEss) {
    r.warnings.push_back("importance weights have effective sample size " +
                         std::to_string(r.ess) + " < 50: diagnostic unreliable");
  }
  return r;
}

// ---------------------------------------------------------------------------

ErgmFamily::ErgmFamily(ErgmSpec spec, int n, TiltedSource source, std::optional<double> mu,
                       SampleOptions glauber)
    : spec_(std::move(spec)), n_(n), source_(source), glauber_(glauber) {
  region_ = solve_fixed_point(spec_);
  p_ = region_.require_p();
  sigma_ = std::sqrt(sigma_n_sq(spec_, region_, n));
  edge_coef_ = tilt_edge_coefficient(spec_, p_);
  if (n <= ExactMeasure::kMaxVertices) exact_ = std::make_shared<const ExactMeasure>(spec_, n);
  if (source_ == TiltedSource::Exact && !exact_) {
    throw PreconditionError("exact draws need n <= 6");
  }
  if (source_ == TiltedSource::Cftp && !spec_.monotone()) {
    throw UnsupportedRegime("coupling from the past needs every non-edge beta >= 0");
  }
  if (mu) {
    mu_ = *mu;
  } else if (exact_) {
    mu_ = exact_->edge_moments().mean;
  } else {
    mu_ = static_cast<double>(pair_count(n)) * p_;
  }
}

EdgeGraph ErgmFamily::to_graph(const State& x) const {
  EdgeGraph g(n_);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] != 0) g.set(EdgeId::from_index(n_, k), true);
  }
  return g;
}

State ErgmFamily::to_state(const EdgeGraph& g) const {
  State x(g.pair_slots());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = g.has(EdgeId::from_index(n_, k)) ? 1 : 0;
  return x;
}

double ErgmFamily::f(const State& x) const {
  double e = 0;
  for (double v : x) e += v;
  return (e - mu_) / sigma_;
}

double ErgmFamily::g(const State& x) const { return centered_tilt_g(spec_, region_, to_graph(x)); }

double ErgmFamily::tilt_slope(const EdgeGraph& g, EdgeId s) const {
  return cond_log_odds(spec_, g, s) - edge_coef_;
}

void ErgmFamily::for_each_tilted(std::size_t count, std::uint64_t seed,
                                 const std::function<void(std::size_t, const State&)>& visit) const {
  switch (source_) {
    case TiltedSource::Exact: {
      const auto& pr = exact_->probs();
      std::vector<double> cdf(pr.size());
      double acc = 0;
      for (std::size_t c = 0; c < pr.size(); ++c) cdf[c] = acc += pr[c];
      CounterRng rng(seed);
      for (std::size_t k = 0; k < count; ++k) {
        const double u = rng.uniform() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto code = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
        visit(k, to_state(EdgeGraph::from_code(n_, code)));
      }
      break;
    }
    case TiltedSource::Cftp:
      for (std::size_t k = 0; k < count; ++k) {
        visit(k, to_state(cftp_sample(spec_, n_, derive_seed(seed, k)).graph));
      }
      break;
    case TiltedSource::Glauber: {
      SampleOptions o = glauber_;
      o.count = count;
      o.seed = seed;
      run_chain(spec_, n_, o, [&](std::size_t k, const EdgeGraph& g) { visit(k, to_state(g)); });
      break;
    }
  }
}

void ErgmFamily::perturbation_diffs(const State& x, const State& xp,
                                    PerturbationDiffs& out) const {
  if (!fast_diffs_) {
    generic_perturbation_diffs(x, xp, out);
    return;
  }
  const std::size_t N = x.size();
  out.single_f.assign(N, 0.0);
  out.single_g.assign(N, 0.0);
  out.chain_f.assign(N, 0.0);
  const EdgeGraph g = to_graph(x);
  for (std::size_t i = 0; i < N; ++i) {
    const double d = x[i] - xp[i];
    if (d == 0) continue;
    out.single_f[i] = d / sigma_;
    out.chain_f[i] = d / sigma_;
    out.single_g[i] = d * tilt_slope(g, EdgeId::from_index(n_, i));
  }
}

std::optional<double> ErgmFamily::delta1_closed(const State& x, std::size_t i) const {
  return ((1 - 2 * p_) * x[i] + p_) / (2 * sigma_ * sigma_);
}

std::optional<double> ErgmFamily::delta2_closed(const State& x, std::size_t i) const {
  const EdgeGraph g = to_graph(x);
  return 0.5 * ((1 - 2 * p_) * x[i] + p_) * tilt_slope(g, EdgeId::from_index(n_, i)) / sigma_;
}

std::optional<double> ErgmFamily::sum_delta2_closed(const State& x) const {
  const EdgeGraph g = to_graph(x);
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += ((1 - 2 * p_) * x[i] + p_) * tilt_slope(g, EdgeId::from_index(n_, i));
  }
  return 0.5 * s / sigma_;
}

double ErgmFamily::asymptotic_b() const {
  return static_cast<double>(pair_count(n_)) * 2 * p_ * (1 - p_) / (2 * sigma_ * sigma_);
}

}  // namespace ergmlab

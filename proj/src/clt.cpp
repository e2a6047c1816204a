#include "ergmlab/clt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ergmlab/curie_weiss.hpp"
#include "ergmlab/errors.hpp"
#include "ergmlab/exact.hpp"
#include "ergmlab/random.hpp"
#include "ergmlab/sampler.hpp"
#include "ergmlab/stats.hpp"

namespace ergmlab::clt {

std::string to_string(Source s) {
  switch (s) {
    case Source::Exact: return "exact";
    case Source::Bernoulli: return "bernoulli";
    case Source::Glauber: return "glauber";
  }
  return "unknown";
}

namespace {

// Mean of the Kolmogorov-Smirnov statistic sqrt(m) D_m in the limit.
constexpr double kKsMean = 0.8687311606361592;

RegionReport require_subcritical(const ErgmSpec& spec) {
  RegionReport r = solve_fixed_point(spec);
  if (!r.subcritical()) {
    throw PreconditionError("spec is not subcritical (region: " + to_string(r.classification) + ")");
  }
  return r;
}

struct Draws {
  std::vector<double> edges;
  std::vector<double> stat;  // hom count, or edge count when no template
  Source source = Source::Glauber;
};

Draws draw(const ErgmSpec& spec, int n, double p, const CltOptions& opts, const HomCounter* counter) {
  if (opts.samples < 2) throw PreconditionError("need at least two samples");
  Draws d;
  d.edges.reserve(opts.samples);
  d.stat.reserve(opts.samples);
  auto keep = [&](const EdgeGraph& g) {
    d.edges.push_back(static_cast<double>(g.edge_count()));
    d.stat.push_back(counter ? static_cast<double>(counter->count(g)) : d.edges.back());
  };
  if (spec.size() == 1) {
    d.source = Source::Bernoulli;
    for (std::size_t k = 0; k < opts.samples; ++k) keep(er_sample(n, p, derive_seed(opts.seed, k)));
    return d;
  }
  d.source = Source::Glauber;
  const std::size_t chains = std::max<std::size_t>(1, opts.chains);
  SampleOptions so;
  so.count = (opts.samples + chains - 1) / chains;
  so.seed = opts.seed;
  so.burn_in_sweeps = opts.burn_in_sweeps;
  so.thin_sweeps = opts.thin_sweeps;
  const auto runs = sample_chains(spec, n, so, chains, std::max<std::size_t>(1, opts.threads));
  for (const auto& r : runs) {
    for (const auto& g : r.graphs) {
      if (d.edges.size() < opts.samples) keep(g);
    }
  }
  return d;
}

// Groups P(code) by the value of a statistic into a sorted law.
stats::DiscreteLaw law_of(const ExactMeasure& m, const std::function<double(const EdgeGraph&)>& fn,
                          double center, double scale) {
  std::map<double, double> acc;
  for (std::size_t c = 0; c < m.states(); ++c) {
    acc[fn(EdgeGraph::from_code(m.n(), c))] += m.prob(c);
  }
  stats::DiscreteLaw law;
  for (const auto& [x, w] : acc) {
    law.support.push_back((x - center) / scale);
    law.probs.push_back(w);
  }
  return law;
}

double bootstrap_dw_se(const std::vector<double>& w, std::size_t reps, std::uint64_t seed) {
  if (reps < 2) return 0;
  CounterRng rng(derive_seed(seed, 0xb007));
  std::vector<double> r(w.size());
  std::vector<double> vals;
  vals.reserve(reps);
  for (std::size_t b = 0; b < reps; ++b) {
    for (auto& x : r) x = w[rng.below(w.size())];
    std::sort(r.begin(), r.end());
    vals.push_back(stats::empirical_wasserstein(r));
  }
  return std::sqrt(stats::variance(vals));
}

void fill_lln(DistanceReport& rep) {
  const double N = static_cast<double>(pair_count(rep.n));
  rep.lln_scaled = std::abs(rep.mu_hat / N - rep.p) * std::sqrt(static_cast<double>(rep.n));
}

DistanceReport run(const ErgmSpec& spec, const Template* pattern, int n, const CltOptions& opts) {
  const RegionReport region = require_subcritical(spec);
  const double p = region.require_p();
  if (n < 2) throw PreconditionError("n must be at least 2");
  DistanceReport rep;
  rep.n = n;
  rep.p = p;
  rep.sigma_sq = sigma_n_sq(spec, region, n);
  const double sigma = std::sqrt(rep.sigma_sq);
  double scale = sigma;
  std::optional<HomCounter> counter;
  if (pattern) {
    if (pattern->edge_count() < 1) throw PreconditionError("template needs at least one edge");
    if (pattern->vertices() > n) throw PreconditionError("template has more vertices than the host");
    const int v = pattern->vertices();
    const int e = pattern->edge_count();
    scale = 2 * int_pow(n, v - 2) * e * int_pow(p, e - 1) * sigma;
    counter.emplace(*pattern);
  }

  if (opts.exact_when_small && n <= ExactMeasure::kMaxVertices) {
    const ExactMeasure m(spec, n);
    rep.source = Source::Exact;
    auto stat = [&](const EdgeGraph& g) {
      return counter ? static_cast<double>(counter->count(g)) : static_cast<double>(g.edge_count());
    };
    const double mean = m.expectation(stat);
    const double second = m.expectation([&](const EdgeGraph& g) { return stat(g) * stat(g); });
    const auto law = law_of(m, stat, mean, scale);
    rep.mu_hat = mean;
    rep.var_hat = second - mean * mean;
    rep.dK = stats::kolmogorov_to_normal(law);
    rep.dW = stats::wasserstein_to_normal(law);
    rep.reference_dK = rep.dK;
    if (counter) {
      const double me = m.edge_moments().mean;
      const double ve = m.edge_moments().variance();
      const double cov =
          m.expectation([&](const EdgeGraph& g) { return stat(g) * static_cast<double>(g.edge_count()); }) -
          mean * me;
      rep.corr_with_edge = cov / std::sqrt(ve * rep.var_hat);
      rep.lln_scaled = std::abs(me / static_cast<double>(pair_count(n)) - p) * std::sqrt(n);
    } else {
      fill_lln(rep);
    }
    return rep;
  }

  const Draws d = draw(spec, n, p, opts, counter ? &*counter : nullptr);
  rep.source = d.source;
  rep.samples = d.stat.size();
  const auto ms = stats::batch_mean(d.stat, std::min<std::size_t>(20, rep.samples));
  rep.mu_hat = ms.mean;
  rep.mu_se = ms.se;
  rep.var_hat = stats::variance(d.stat);
  std::vector<double> w(rep.samples);
  for (std::size_t k = 0; k < rep.samples; ++k) w[k] = (d.stat[k] - rep.mu_hat) / scale;
  if (opts.keep_values) rep.values = w;
  if (counter) {
    rep.corr_with_edge = stats::correlation(d.stat, d.edges);
    rep.lln_scaled = std::abs(stats::mean(d.edges) / static_cast<double>(pair_count(n)) - p) * std::sqrt(n);
  } else {
    fill_lln(rep);
  }
  rep.ess = stats::effective_sample_size(d.edges);
  if (rep.ess < opts.min_ess_fraction * static_cast<double>(rep.samples)) {
    rep.warnings.push_back("effective sample size " + std::to_string(rep.ess) + " is below " +
                           std::to_string(opts.min_ess_fraction) + " of the sample count");
  }
  if (!counter && spec.size() == 1) {
    rep.reference_dK = stats::kolmogorov_to_normal(stats::standardized_binomial(pair_count(n), p));
  }
  std::vector<double> sorted = w;
  std::sort(sorted.begin(), sorted.end());
  rep.dK = stats::empirical_kolmogorov(sorted);
  rep.dK_band = stats::dkw_band(rep.samples);
  rep.dW = stats::empirical_wasserstein(sorted);
  rep.dW_se = bootstrap_dw_se(w, opts.bootstrap, opts.seed);
  return rep;
}

RateReport fit_rates(std::vector<RateRow> rows) {
  RateReport r;
  std::vector<double> lx, ly;
  for (const auto& row : rows) {
    lx.push_back(std::log(row.n));
    ly.push_back(std::log(row.dK));
  }
  const auto f = stats::fit_line(lx, ly);
  r.rows = std::move(rows);
  r.slope = f.slope;
  r.slope_se = f.slope_se;
  r.lo = f.slope - 1.96 * f.slope_se;
  r.hi = f.slope + 1.96 * f.slope_se;
  return r;
}

}  // namespace

DistanceReport edge_clt_experiment(const ErgmSpec& spec, int n, const CltOptions& opts) {
  return run(spec, nullptr, n, opts);
}

DistanceReport subgraph_clt_experiment(const ErgmSpec& spec, const Template& pattern, int n,
                                       const CltOptions& opts) {
  return run(spec, &pattern, n, opts);
}

RateReport rate_scan(const ErgmSpec& spec, const std::vector<int>& ns, const CltOptions& opts) {
  if (ns.size() < 4) throw PreconditionError("rate scan needs at least four sizes");
  const RegionReport region = require_subcritical(spec);
  const double p = region.require_p();
  std::vector<RateRow> rows;
  if (spec.size() == 1) {
    for (int n : ns) {
      rows.push_back({static_cast<double>(n),
                      stats::kolmogorov_to_normal(stats::standardized_binomial(pair_count(n), p)), 0});
    }
    auto r = fit_rates(std::move(rows));
    r.exact = true;
    r.method = "exact-binomial";
    return r;
  }
  bool any_sampled = false;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    CltOptions o = opts;
    o.seed = derive_seed(opts.seed, k);
    o.bootstrap = 0;
    const auto rep = edge_clt_experiment(spec, ns[k], o);
    const double floor = rep.samples ? kKsMean / std::sqrt(static_cast<double>(rep.samples)) : 0;
    any_sampled = any_sampled || rep.samples > 0;
    rows.push_back({static_cast<double>(ns[k]), rep.dK, floor});
  }
  auto r = fit_rates(std::move(rows));
  r.exact = !any_sampled;
  r.method = any_sampled ? "monte-carlo" : "exact-enumeration";
  if (any_sampled) {
    r.notes.push_back(
        "empirical d_K is the population distance plus O(samples^-1/2) noise; the slope is indicative only");
    for (const auto& row : r.rows) {
      if (row.dK < 2 * row.noise_floor) {
        r.notes.push_back("d_K at n=" + std::to_string(static_cast<int>(row.n)) +
                          " is within twice the noise floor");
      }
    }
  }
  return r;
}

RateReport cw_rate_scan(double beta, const std::vector<int>& Ns) {
  if (Ns.size() < 4) throw PreconditionError("rate scan needs at least four sizes");
  std::vector<RateRow> rows;
  for (int N : Ns) rows.push_back({static_cast<double>(N), exact_distances(build_cw(N, beta)).kolmogorov, 0});
  auto r = fit_rates(std::move(rows));
  r.exact = true;
  r.method = "exact-curie-weiss";
  return r;
}

LlnReport lln_check(const ErgmSpec& spec, const std::vector<int>& ns, const CltOptions& opts) {
  const RegionReport region = require_subcritical(spec);
  LlnReport rep;
  rep.p = region.require_p();
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const int n = ns[k];
    CltOptions o = opts;
    o.seed = derive_seed(opts.seed, k);
    const Draws d = draw(spec, n, rep.p, o, nullptr);
    const double N = static_cast<double>(pair_count(n));
    const auto ms = stats::batch_mean(d.edges, std::min<std::size_t>(20, d.edges.size()));
    LlnRow row;
    row.n = n;
    row.density = ms.mean / N;
    row.density_se = ms.se / N;
    row.scaled = std::abs(row.density - rep.p) * std::sqrt(n);
    row.scaled_se = row.density_se * std::sqrt(n);
    rep.rows.push_back(row);
  }
  if (rep.rows.empty()) throw PreconditionError("lln check needs at least one size");
  double top = 0, low = std::numeric_limits<double>::infinity(), noise = 0;
  for (const auto& r : rep.rows) {
    top = std::max(top, r.scaled);
    low = std::min(low, r.scaled);
    noise = std::max(noise, 2 * r.scaled_se);
  }
  const double floor = std::max(low, noise);
  rep.spread = floor > 0 ? top / floor : 0;
  rep.bounded = rep.spread <= 3;
  rep.notes.push_back("residuals below twice their standard error are treated as noise");
  return rep;
}

}  // namespace ergmlab::clt

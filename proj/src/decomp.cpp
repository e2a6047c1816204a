#include "ergmlab/decomp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include "ergmlab/errors.hpp"
#include "ergmlab/sampler.hpp"
#include "ergmlab/stats.hpp"

namespace ergmlab::decomp {

namespace {

std::vector<Partition> build_partitions(std::size_t d) {
  // Restricted growth strings: a[0] = 0, a[k] <= 1 + max(a[0..k-1]).
  std::vector<Partition> out;
  std::vector<std::size_t> a(d, 0);
  auto emit = [&] {
    std::size_t blocks = d == 0 ? 0 : *std::max_element(a.begin(), a.end()) + 1;
    Partition p(blocks);
    for (std::size_t k = 0; k < d; ++k) p[a[k]].push_back(k);
    out.push_back(std::move(p));
  };
  if (d == 0) {
    out.emplace_back();
    return out;
  }
  auto rec = [&](auto&& self, std::size_t k, std::size_t top) -> void {
    if (k == d) {
      emit();
      return;
    }
    for (std::size_t v = 0; v <= top + 1; ++v) {
      a[k] = v;
      self(self, k + 1, std::max(top, v));
    }
  };
  rec(rec, 1, 0);
  return out;
}

std::string describe(const EdgeSet& J) {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < J.size(); ++k) os << (k ? "," : "") << J[k];
  os << '}';
  return os.str();
}

void check_index_set(const EdgeSet& I) {
  if (I.empty() || I.size() > kMaxOrder) {
    throw PreconditionError("Hoeffding terms need 1 to 4 edges, got " + std::to_string(I.size()));
  }
  std::set<std::size_t> uniq(I.begin(), I.end());
  if (uniq.size() != I.size()) throw PreconditionError("repeated edge in " + describe(I));
}

EdgeSet sorted(EdgeSet s) {
  std::sort(s.begin(), s.end());
  return s;
}

// Subsets of I (as sorted edge sets), by bit mask over positions.
EdgeSet subset(const EdgeSet& I, unsigned mask) {
  EdgeSet s;
  for (std::size_t k = 0; k < I.size(); ++k) {
    if ((mask >> k) & 1U) s.push_back(I[k]);
  }
  return sorted(std::move(s));
}

}  // namespace

const std::vector<Partition>& set_partitions(std::size_t d) {
  static const std::vector<std::vector<Partition>> table = [] {
    std::vector<std::vector<Partition>> t;
    for (std::size_t k = 0; k <= kMaxOrder; ++k) t.push_back(build_partitions(k));
    return t;
  }();
  if (d > kMaxOrder) throw PreconditionError("set partitions are tabulated up to size 4");
  return table[d];
}

void MomentContext::set(EdgeSet J, double value, double se) {
  table_[sorted(std::move(J))] = {value, se};
}

bool MomentContext::has(const EdgeSet& J) const { return table_.count(sorted(J)) != 0; }

const MomentContext::Entry& MomentContext::at(const EdgeSet& J) const {
  const auto it = table_.find(sorted(J));
  if (it == table_.end()) {
    throw PreconditionError("moment context lacks E prod (Y_l - p~) for J = " + describe(sorted(J)));
  }
  return it->second;
}

std::vector<EdgeSet> required_moments(const EdgeSet& I) {
  check_index_set(I);
  std::vector<EdgeSet> out;
  const unsigned full = (1U << I.size()) - 1;
  for (unsigned mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) >= 2) out.push_back(subset(I, mask));
  }
  return out;
}

namespace {

std::set<EdgeSet> collect_required(const std::vector<EdgeSet>& sets) {
  std::set<EdgeSet> all;
  for (const auto& I : sets) {
    for (auto& J : required_moments(I)) all.insert(std::move(J));
  }
  return all;
}

}  // namespace

MomentContext exact_moments(const ExactMeasure& m, const std::vector<EdgeSet>& sets) {
  const std::size_t N = m.pair_slots();
  const double pt = m.edge_moments().mean / static_cast<double>(N);
  MomentContext ctx(pt, "exact");
  for (const auto& J : collect_required(sets)) {
    for (std::size_t l : J) {
      if (l >= N) throw PreconditionError("edge index " + std::to_string(l) + " out of range");
    }
    const double v = m.expectation_by_code([&](std::size_t code) {
      double prod = 1;
      for (std::size_t l : J) prod *= static_cast<double>((code >> l) & 1U) - pt;
      return prod;
    });
    ctx.set(J, v, 0);
  }
  return ctx;
}

MomentContext sample_moments(const std::vector<EdgeGraph>& graphs, const std::vector<EdgeSet>& sets) {
  if (graphs.size() < 2) throw PreconditionError("sample moments need at least two graphs");
  const int n = graphs.front().n();
  const std::size_t N = pair_count(n);
  double edges = 0;
  for (const auto& g : graphs) edges += static_cast<double>(g.edge_count());
  const double pt = edges / (static_cast<double>(N) * static_cast<double>(graphs.size()));
  MomentContext ctx(pt, "monte-carlo");
  std::vector<double> vals(graphs.size());
  for (const auto& J : collect_required(sets)) {
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      double prod = 1;
      for (std::size_t l : J) {
        prod *= (graphs[k].has(EdgeId::from_index(n, l)) ? 1.0 : 0.0) - pt;
      }
      vals[k] = prod;
    }
    const auto ms = stats::batch_mean(vals, std::min<std::size_t>(20, graphs.size()));
    ctx.set(J, ms.mean, ms.se);
  }
  return ctx;
}

double g_I_values(const EdgeSet& I, const MomentContext& ctx, const std::vector<double>& y,
                  Multiplicity form) {
  check_index_set(I);
  if (y.size() != I.size()) throw PreconditionError("value vector does not match the index set");
  std::string missing;
  for (const auto& J : required_moments(I)) {
    if (!ctx.has(J)) missing += (missing.empty() ? "" : " ") + describe(J);
  }
  if (!missing.empty()) {
    throw PreconditionError("moment context lacks E prod (Y_l - p~) for J = " + missing);
  }
  const double pt = ctx.p_tilde();
  double total = 0;
  for (const auto& P : set_partitions(I.size())) {
    int singles = 0;
    int large = 0;
    double centered = 1;
    double moments = 1;
    for (const auto& block : P) {
      if (block.size() == 1) {
        ++singles;
        centered *= y[block[0]] - pt;
      } else {
        ++large;
        EdgeSet J;
        for (std::size_t pos : block) J.push_back(I[pos]);
        moments *= ctx.at(J).value;
      }
    }
    double bracket;
    if (singles == 0) {
      bracket = form == Multiplicity::Amended ? static_cast<double>(large) : 1.0;
    } else {
      bracket = centered;
    }
    total += (large % 2 ? -1.0 : 1.0) * bracket * moments;
  }
  return total;
}

double g_I(const HoeffdingTerm& term, const MomentContext& ctx, const EdgeGraph& y, Multiplicity form) {
  std::vector<double> v;
  v.reserve(term.index.size());
  for (std::size_t l : term.index) {
    if (l >= y.pair_slots()) throw PreconditionError("edge index " + std::to_string(l) + " out of range");
    v.push_back(y.has(EdgeId::from_index(y.n(), l)) ? 1.0 : 0.0);
  }
  return g_I_values(term.index, ctx, v, form);
}

ProductExpansion expand_product(const EdgeSet& edges, double p_tilde) {
  check_index_set(edges);
  ProductExpansion e;
  e.edges = edges;
  e.p_tilde = p_tilde;
  const std::size_t m = edges.size();
  e.constant = int_pow(p_tilde, static_cast<int>(m));
  const unsigned full = (1U << m) - 1;
  // Group by size so the list reads like the expansion: linear terms first.
  for (std::size_t l = 1; l <= m; ++l) {
    for (unsigned mask = 1; mask <= full; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != l) continue;
      Monomial t;
      for (std::size_t k = 0; k < m; ++k) {
        if ((mask >> k) & 1U) t.edges.push_back(edges[k]);
      }
      t.coefficient = int_pow(p_tilde, static_cast<int>(m - l));
      e.terms.push_back(std::move(t));
    }
  }
  return e;
}

namespace {

double centered_product(const ProductExpansion& e, const Monomial& t, const std::vector<double>& y) {
  double prod = 1;
  for (std::size_t l : t.edges) {
    const auto pos = static_cast<std::size_t>(std::find(e.edges.begin(), e.edges.end(), l) - e.edges.begin());
    prod *= y[pos] - e.p_tilde;
  }
  return prod;
}

}  // namespace

double ProductExpansion::polynomial(const std::vector<double>& y) const {
  if (y.size() != edges.size()) throw PreconditionError("value vector does not match the factors");
  double s = constant;
  for (const auto& t : terms) s += t.coefficient * centered_product(*this, t, y);
  return s;
}

double ProductExpansion::centered(const std::vector<double>& y, const MomentContext& ctx) const {
  if (y.size() != edges.size()) throw PreconditionError("value vector does not match the factors");
  double s = 0;
  for (const auto& t : terms) {
    const double mean = t.edges.size() == 1 ? 0.0 : ctx.at(t.edges).value;
    s += t.coefficient * (centered_product(*this, t, y) - mean);
  }
  return s;
}

namespace {

// Variance with a delete-one-batch jackknife standard error.
stats::MeanSe jackknife_variance(const std::vector<double>& xs, std::size_t batches) {
  const std::size_t m = xs.size();
  batches = std::max<std::size_t>(2, std::min(batches, m));
  const double full = stats::variance(xs);
  std::vector<double> reps;
  const std::size_t len = m / batches;
  for (std::size_t b = 0; b < batches; ++b) {
    std::vector<double> rest;
    rest.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      if (k / len != b || k >= len * batches) rest.push_back(xs[k]);
    }
    reps.push_back(stats::variance(rest));
  }
  const double rbar = stats::mean(reps);
  double ss = 0;
  for (double r : reps) ss += (r - rbar) * (r - rbar);
  const double g = static_cast<double>(batches);
  return {full, std::sqrt((g - 1) / g * ss)};
}

Slope fit_slope(const std::vector<double>& ln, const std::vector<double>& lv,
                const std::vector<double>& lse) {
  const auto f = stats::fit_line(ln, lv, lse);
  return {f.slope, f.slope_se, f.slope - 1.96 * f.slope_se, f.slope + 1.96 * f.slope_se};
}

}  // namespace

ScanReport residual_variance_scan(const ErgmSpec& spec, const Template& pattern,
                                  const std::vector<int>& ns, const ScanOptions& opts) {
  if (ns.size() < 3) throw PreconditionError("residual scan needs at least three sizes");
  if (pattern.edge_count() < 1) throw PreconditionError("template needs at least one edge");
  if (opts.samples < 2 * opts.batches) throw PreconditionError("too few samples for the batch count");
  const RegionReport region = solve_fixed_point(spec);
  if (!region.subcritical()) {
    throw PreconditionError("residual scan requires a subcritical spec (region: " +
                            to_string(region.classification) + ")");
  }
  const double p = region.require_p();
  const HomCounter counter(pattern);
  const int v = pattern.vertices();
  const int e = pattern.edge_count();

  ScanReport rep{pattern, {}, {}, {}, 0, p, region.dobrushin(), opts.seed, {}};
  std::vector<double> ln, lraw, lraw_se, lres, lres_se;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const int n = ns[k];
    if (n < std::max(2, v)) throw PreconditionError("n too small for the template");
    SampleOptions so;
    so.count = opts.samples;
    so.seed = opts.seed;
    so.stream = static_cast<std::uint64_t>(k);
    so.thin_sweeps = opts.thin_sweeps;
    so.burn_in_sweeps = opts.burn_in_sweeps;
    std::vector<double> hom(opts.samples), edges(opts.samples);
    run_chain(spec, n, so, [&](std::size_t idx, const EdgeGraph& g) {
      hom[idx] = static_cast<double>(counter.count(g));
      edges[idx] = static_cast<double>(g.edge_count());
    });
    ScanRow row;
    row.n = n;
    row.samples = opts.samples;
    row.mu_hat = stats::mean(edges);
    row.sigma_sq = sigma_n_sq(spec, region, n);
    row.coefficient = 2 * int_pow(n, v - 2) * e * int_pow(p, e - 1);
    std::vector<double> res(opts.samples);
    for (std::size_t s = 0; s < opts.samples; ++s) {
      res[s] = hom[s] - row.coefficient * (edges[s] - row.mu_hat);
    }
    const auto raw = jackknife_variance(hom, opts.batches);
    const auto rv = jackknife_variance(res, opts.batches);
    row.raw_var = raw.mean;
    row.raw_var_se = raw.se;
    row.residual_var = rv.mean;
    row.residual_var_se = rv.se;
    row.ratio = rv.mean / raw.mean;
    const double rm = stats::mean(res);
    double third = 0;
    for (double r : res) third += std::pow(std::abs(r - rm), 3);
    row.residual_third_abs = third / static_cast<double>(res.size());
    rep.rows.push_back(row);

    ln.push_back(std::log(n));
    lraw.push_back(std::log(raw.mean));
    lraw_se.push_back(raw.se / raw.mean);
    if (rv.mean > 1e-12 * raw.mean && rv.se > 0) {
      lres.push_back(std::log(rv.mean));
      lres_se.push_back(rv.se / rv.mean);
    }
  }
  rep.raw_slope = fit_slope(ln, lraw, lraw_se);
  if (lres.size() == ln.size()) {
    rep.residual_slope = fit_slope(ln, lres, lres_se);
    rep.slope_gap = rep.raw_slope.value - rep.residual_slope.value;
  } else {
    const double nan = std::nan("");
    rep.residual_slope = {nan, nan, nan, nan};
    rep.slope_gap = nan;
    rep.notes.push_back("residual is constant up to rounding; no residual slope fitted");
  }
  for (const auto& r : rep.rows) {
    if (e > 1 && !(r.residual_var < r.raw_var)) {
      rep.notes.push_back("residual variance not below raw variance at n=" + std::to_string(r.n));
    }
  }
  rep.notes.push_back("third absolute moment is reported without a slope fit");
  return rep;
}

}  // namespace ergmlab::decomp

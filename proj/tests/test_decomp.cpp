#include <algorithm>
#include <bit>
#include <cmath>

#include "doctest.h"
#include "ergmlab/decomp.hpp"
#include "ergmlab/errors.hpp"
#include "ergmlab/random.hpp"
#include "ergmlab/sampler.hpp"

using namespace ergmlab;
using namespace ergmlab::decomp;

namespace {

// Every subset of {0..N-1} of size 1..3, exhaustively.
std::vector<EdgeSet> small_index_sets(std::size_t N, std::size_t max_size) {
  std::vector<EdgeSet> out;
  for (unsigned mask = 1; mask < (1U << N); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > max_size) continue;
    EdgeSet s;
    for (std::size_t k = 0; k < N; ++k) {
      if ((mask >> k) & 1U) s.push_back(k);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> values_of(const EdgeGraph& g, const EdgeSet& I) {
  std::vector<double> v;
  for (std::size_t l : I) v.push_back(g.has(EdgeId::from_index(g.n(), l)) ? 1.0 : 0.0);
  return v;
}

}  // namespace

TEST_CASE("set partitions have Bell-number counts") {
  const std::size_t bell[] = {1, 1, 2, 5, 15};
  for (std::size_t d = 0; d <= 4; ++d) {
    const auto& ps = set_partitions(d);
    CHECK(ps.size() == bell[d]);
    for (const auto& P : ps) {
      std::vector<int> seen(d, 0);
      for (const auto& b : P) {
        CHECK_FALSE(b.empty());
        for (auto k : b) ++seen[k];
      }
      for (int s : seen) CHECK(s == 1);
    }
  }
  CHECK_THROWS_AS(set_partitions(5), PreconditionError);
}

TEST_CASE("low-order Hoeffding terms by hand") {
  MomentContext ctx(0.3, "test");
  CHECK(g_I_values({7}, ctx, {1.0}) == doctest::Approx(0.7));
  CHECK(g_I_values({7}, ctx, {0.0}) == doctest::Approx(-0.3));

  // Independent coordinates: the cross moment vanishes.
  ctx.set({2, 5}, 0.0);
  CHECK(g_I_values({2, 5}, ctx, {1.0, 0.0}) == doctest::Approx(0.7 * -0.3));
  CHECK(g_I_values({5, 2}, ctx, {1.0, 1.0}) == doctest::Approx(0.49));

  ctx.set({2, 5}, 0.04);
  CHECK(g_I_values({2, 5}, ctx, {1.0, 1.0}) == doctest::Approx(0.49 - 0.04));

  MomentContext empty(0.5, "test");
  try {
    (void)g_I_values({1, 4, 3}, empty, {1, 1, 1});
    FAIL("expected a missing-moment error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("{1,3}") != std::string::npos);
  }
  CHECK_THROWS_AS(g_I_values({1, 1}, ctx, {1, 1}), PreconditionError);
  CHECK_THROWS_AS(g_I_values({1, 2, 3, 4, 5}, ctx, {1, 1, 1, 1, 1}), PreconditionError);
}

TEST_CASE("edge-only model gives products of centered indicators") {
  const ExactMeasure m(ErgmSpec::edge_only(0.2), 4);
  const auto ctx = exact_moments(m, {{0, 1, 2}});
  CHECK(ctx.source() == "exact");
  CHECK(std::abs(ctx.at({0, 1}).value) < 1e-14);
  CHECK(std::abs(ctx.at({0, 1, 2}).value) < 1e-14);
  const double pt = ctx.p_tilde();
  CHECK(pt == doctest::Approx(std::exp(0.4) / (1 + std::exp(0.4))).epsilon(1e-12));
  CHECK(g_I_values({0, 1}, ctx, {1, 0}) == doctest::Approx((1 - pt) * -pt));
}

TEST_CASE("Hoeffding terms are centered under the enumerated measure") {
  const ExactMeasure m(ErgmSpec::edge_triangle(-0.2, 0.1), 4);
  const auto sets = small_index_sets(m.pair_slots(), 3);
  const auto ctx = exact_moments(m, sets);
  double worst = 0;
  bool saw_dependence = false;
  for (const auto& I : sets) {
    const double e = m.expectation([&](const EdgeGraph& g) { return g_I({I}, ctx, g); });
    worst = std::max(worst, std::abs(e));
    if (I.size() >= 2 && std::abs(ctx.at(I).value) > 1e-6) saw_dependence = true;
  }
  CHECK(worst < 1e-9);
  CHECK(saw_dependence);

  // E[g_{01} g_{0}] reduces to E[Y~_0^2 Y~_1] because g_{0} is centered.
  const double pt = ctx.p_tilde();
  const double cross = m.expectation([&](const EdgeGraph& g) {
    return g_I({{0, 1}}, ctx, g) * g_I({{0}}, ctx, g);
  });
  const double direct = m.expectation([&](const EdgeGraph& g) {
    const auto v = values_of(g, {0, 1});
    return (v[0] - pt) * (v[0] - pt) * (v[1] - pt);
  });
  CHECK(std::abs(cross - direct) < 1e-12);
}

TEST_CASE("amended multiplicity matters at order four") {
  const ExactMeasure m(ErgmSpec::edge_triangle(-0.2, 0.4), 4);
  const std::vector<EdgeSet> sets = {{0, 1, 2, 3}, {0, 1, 3, 5}};
  const auto ctx = exact_moments(m, sets);
  for (const auto& I : sets) {
    const double amended = m.expectation([&](const EdgeGraph& g) { return g_I({I}, ctx, g); });
    const double original =
        m.expectation([&](const EdgeGraph& g) { return g_I({I}, ctx, g, Multiplicity::Original); });
    CHECK(std::abs(amended) < 1e-9);
    // The original form is off by the sum over pairings of products of pair moments.
    double pairings = 0;
    const auto& a = I;
    pairings += ctx.at({a[0], a[1]}).value * ctx.at({a[2], a[3]}).value;
    pairings += ctx.at({a[0], a[2]}).value * ctx.at({a[1], a[3]}).value;
    pairings += ctx.at({a[0], a[3]}).value * ctx.at({a[1], a[2]}).value;
    CHECK(std::abs(pairings) > 1e-8);
    CHECK(original == doctest::Approx(-pairings).epsilon(1e-9));
  }
}

TEST_CASE("product expansion") {
  const auto e1 = expand_product({4}, 0.3);
  REQUIRE(e1.terms.size() == 1);
  CHECK(e1.terms[0].coefficient == 1);
  CHECK(e1.constant == doctest::Approx(0.3));

  const auto e2 = expand_product({1, 6}, 0.3);
  REQUIRE(e2.terms.size() == 3);
  CHECK(e2.terms[0].coefficient == doctest::Approx(0.3));
  CHECK(e2.terms[1].coefficient == doctest::Approx(0.3));
  CHECK(e2.terms[2].edges == EdgeSet{1, 6});
  CHECK(e2.terms[2].coefficient == 1);

  CHECK_THROWS_AS(expand_product({2, 2}, 0.5), PreconditionError);
  CHECK_THROWS_AS(expand_product({1, 2, 3, 4, 5}, 0.5), PreconditionError);

  // Algebraic identity for arbitrary real substitutions.
  CounterRng rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + rng.below(4);
    EdgeSet edges;
    while (edges.size() < m) {
      const std::size_t l = rng.below(20);
      if (std::find(edges.begin(), edges.end(), l) == edges.end()) edges.push_back(l);
    }
    const double pt = rng.uniform();
    const auto ex = expand_product(edges, pt);
    std::vector<double> y;
    double prod = 1;
    for (std::size_t k = 0; k < m; ++k) {
      y.push_back(4 * rng.uniform() - 2);
      prod *= y.back();
    }
    CHECK(std::abs(ex.polynomial(y) - prod) < 1e-12);
  }

  // Centered identity under the model: prod y - E prod Y on every graph.
  const ExactMeasure m(ErgmSpec::edge_triangle(-0.3, 0.2), 4);
  const std::vector<EdgeSet> sets = {{0, 1, 3}, {2, 4, 5}, {0, 5}, {1, 2, 3, 4}};
  const auto ctx = exact_moments(m, sets);
  for (const auto& I : sets) {
    const auto ex = expand_product(I, ctx.p_tilde());
    const double mean = m.expectation([&](const EdgeGraph& g) {
      double prod = 1;
      for (double v : values_of(g, I)) prod *= v;
      return prod;
    });
    for (std::size_t c = 0; c < m.states(); c += 5) {
      const auto g = EdgeGraph::from_code(4, c);
      const auto v = values_of(g, I);
      double prod = 1;
      for (double x : v) prod *= x;
      CHECK(std::abs(ex.centered(v, ctx) - (prod - mean)) < 1e-12);
    }
  }
}

TEST_CASE("sample moments approach exact moments") {
  const ErgmSpec spec = ErgmSpec::edge_triangle(-0.2, 0.3);
  const ExactMeasure m(spec, 4);
  std::vector<EdgeGraph> graphs;
  for (std::uint64_t s = 0; s < 4000; ++s) graphs.push_back(cftp_sample(spec, 4, s).graph);
  const std::vector<EdgeSet> sets = {{0, 1, 5}};
  const auto mc = sample_moments(graphs, sets);
  const auto ex = exact_moments(m, sets);
  CHECK(mc.source() == "monte-carlo");
  for (const auto& [J, entry] : ex.entries()) {
    const auto& e = mc.at(J);
    CHECK(e.se > 0);
    CHECK(std::abs(e.value - entry.value) < 4 * e.se + 2e-3);
  }
}

TEST_CASE("residual variance scan") {
  ScanOptions o;
  o.samples = 600;
  o.seed = 12;
  const ErgmSpec spec = ErgmSpec::edge_triangle(-0.1, 0.05);
  const auto edge = residual_variance_scan(spec, Template::edge(), {8, 12, 16}, o);
  for (const auto& r : edge.rows) CHECK(r.residual_var < 1e-12 * r.raw_var + 1e-18);
  CHECK(std::isnan(edge.residual_slope.value));

  const auto star = residual_variance_scan(spec, Template::two_star(), {10, 15, 20}, o);
  REQUIRE(star.rows.size() == 3);
  for (const auto& r : star.rows) {
    CHECK(r.residual_var < r.raw_var);
    CHECK(r.residual_third_abs > 0);
  }
  CHECK(star.raw_slope.value > 3);
  CHECK(star.raw_slope.lo <= star.raw_slope.value);
  CHECK(star.slope_gap > 0);

  CHECK_THROWS_AS(residual_variance_scan(spec, Template::two_star(), {10, 20}, o), PreconditionError);
  CHECK_THROWS_AS(residual_variance_scan(ErgmSpec::edge_triangle(-1.2, 1.0), Template::two_star(),
                                         {10, 15, 20}, o),
                  PreconditionError);
}

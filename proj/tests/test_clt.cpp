#include <cmath>

#include "doctest.h"
#include "ergmlab/clt.hpp"
#include "ergmlab/errors.hpp"
#include "ergmlab/exact.hpp"
#include "ergmlab/stats.hpp"

using namespace ergmlab;
using namespace ergmlab::clt;

TEST_CASE("edge-only ERGM is a standardized binomial") {
  CltOptions o;
  o.samples = 4000;
  o.seed = 21;
  const auto r = edge_clt_experiment(ErgmSpec::edge_only(0), 40, o);
  CHECK(r.source == Source::Bernoulli);
  CHECK(r.p == doctest::Approx(0.5));
  CHECK(r.sigma_sq == doctest::Approx(780 * 0.25));
  REQUIRE(r.reference_dK);
  CHECK(*r.reference_dK < 0.02);
  CHECK(std::abs(r.dK - *r.reference_dK) <= r.dK_band);
  CHECK(r.dK_band == doctest::Approx(std::sqrt(std::log(40.0) / 8000)));
  CHECK(r.dK >= 0);
  CHECK(r.dK <= 1);
  CHECK(r.dW_se > 0);
  CHECK(std::abs(r.mu_hat - 390) < 4 * r.mu_se);
  CHECK(r.warnings.empty());
}

TEST_CASE("small-n empirical pipeline converges to the exact distance") {
  const ErgmSpec spec = ErgmSpec::edge_triangle(-0.2, 0.1);
  CltOptions o;
  o.samples = 20000;
  o.seed = 22;
  o.thin_sweeps = 4;
  const auto ex = edge_clt_experiment(spec, 4, o);
  CHECK(ex.source == Source::Exact);
  CHECK(ex.samples == 0);
  const ExactMeasure m(spec, 4);
  CHECK(ex.dK == doctest::Approx(exact_w_law(m, ex.sigma_sq).kolmogorov));
  CHECK(ex.mu_hat == doctest::Approx(m.edge_moments().mean));

  o.exact_when_small = false;
  const auto mc = edge_clt_experiment(spec, 4, o);
  CHECK(mc.source == Source::Glauber);
  CHECK(std::abs(mc.dK - ex.dK) <= mc.dK_band);
  CHECK(std::abs(mc.dW - ex.dW) < 4 * mc.dW_se + 0.01);
  CHECK(std::abs(mc.var_hat / ex.var_hat - 1) < 0.05);

  const auto sub = subgraph_clt_experiment(spec, Template::triangle(), 5, CltOptions{});
  CHECK(sub.source == Source::Exact);
  REQUIRE(sub.corr_with_edge);
  CHECK(*sub.corr_with_edge > 0);
  CHECK(*sub.corr_with_edge < 1);
  CHECK(sub.dK > ex.dK);
}

TEST_CASE("edge template reproduces W exactly") {
  CltOptions o;
  o.samples = 500;
  o.seed = 23;
  o.keep_values = true;
  const ErgmSpec spec = ErgmSpec::edge_triangle(-0.1, 0.05);
  const auto w = edge_clt_experiment(spec, 12, o);
  const auto wh = subgraph_clt_experiment(spec, Template::edge(), 12, o);
  REQUIRE(w.values.size() == wh.values.size());
  for (std::size_t k = 0; k < w.values.size(); ++k) CHECK(std::abs(w.values[k] - wh.values[k]) < 1e-12);
  CHECK(*wh.corr_with_edge == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(wh.dK == w.dK);
}

TEST_CASE("subgraph statistics track the edge count") {
  CltOptions o;
  o.samples = 1500;
  o.seed = 24;
  const ErgmSpec spec = ErgmSpec::edge_triangle(-0.1, 0.05);
  const auto star = subgraph_clt_experiment(spec, Template::two_star(), 60, o);
  CHECK(*star.corr_with_edge > 0.9);
  const auto tri = subgraph_clt_experiment(spec, Template::triangle(), 60, o);
  const auto w = edge_clt_experiment(spec, 60, o);
  CHECK(std::abs(tri.dK - w.dK) < 0.05);
  CHECK_THROWS_AS(subgraph_clt_experiment(spec, Template::clique(5), 4, o), PreconditionError);
}

TEST_CASE("reports are reproducible") {
  CltOptions o;
  o.samples = 300;
  o.seed = 25;
  const ErgmSpec spec = ErgmSpec::edge_triangle(-0.1, 0.05);
  const auto a = edge_clt_experiment(spec, 15, o);
  const auto b = edge_clt_experiment(spec, 15, o);
  CHECK(a.dK == b.dK);
  CHECK(a.dW == b.dW);
  CHECK(a.dW_se == b.dW_se);
  CHECK(a.mu_hat == b.mu_hat);
  o.seed = 26;
  CHECK(edge_clt_experiment(spec, 15, o).mu_hat != a.mu_hat);
}

TEST_CASE("exact rate scans") {
  const auto k1 = rate_scan(ErgmSpec::edge_only(-0.2), {10, 20, 40, 80, 160}, CltOptions{});
  CHECK(k1.exact);
  CHECK(k1.slope > -1.3);
  CHECK(k1.slope < -0.7);
  const auto cw = cw_rate_scan(0.5, {64, 128, 256, 512, 1024});
  CHECK(cw.exact);
  CHECK(cw.slope > -0.6);
  CHECK(cw.slope < -0.4);
  CHECK_THROWS_AS(rate_scan(ErgmSpec::edge_only(0), {10, 20, 40}, CltOptions{}), PreconditionError);
}

TEST_CASE("sampled rate scan reports its noise floor") {
  CltOptions o;
  o.samples = 400;
  o.seed = 27;
  const auto r = rate_scan(ErgmSpec::edge_two_star(-0.2, 0.1), {8, 12, 16, 20}, o);
  CHECK_FALSE(r.exact);
  CHECK(r.method == "monte-carlo");
  for (const auto& row : r.rows) CHECK(row.noise_floor == doctest::Approx(0.8687 / 20).epsilon(1e-3));
  CHECK(r.lo <= r.slope);
  CHECK(r.hi >= r.slope);
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("law of large numbers check") {
  CltOptions o;
  o.samples = 1000;
  o.seed = 28;
  const auto k1 = lln_check(ErgmSpec::edge_only(0.1), {20, 40, 80, 160}, o);
  CHECK(k1.bounded);
  for (const auto& r : k1.rows) CHECK(r.scaled < 4 * r.scaled_se + 1e-12);

  const auto et = lln_check(ErgmSpec::edge_triangle(-0.1, 0.05), {20, 40, 80}, o);
  CHECK(et.bounded);
  CHECK(et.rows.size() == 3);

  try {
    (void)lln_check(ErgmSpec::edge_triangle(-1.2, 1.0), {20, 40}, o);
    FAIL("expected refusal");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("NotSubcritical") != std::string::npos);
  }
}

TEST_CASE("exact Wasserstein distance matches numerical integration") {
  for (double q : {0.2, 0.5}) {
    const auto law = stats::standardized_binomial(30, q);
    // Trapezoid rule on a fine grid of |F - Phi|.
    double integral = 0;
    const double h = 1e-4;
    std::size_t k = 0;
    double acc = 0;
    for (double x = -12; x < 12; x += h) {
      while (k < law.support.size() && law.support[k] <= x) acc += law.probs[k++];
      integral += std::abs(acc - stats::normal_cdf(x)) * h;
    }
    CHECK(stats::wasserstein_to_normal(law) == doctest::Approx(integral).epsilon(1e-3));
  }
}

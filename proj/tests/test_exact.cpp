#include <cmath>

#include "doctest.h"
#include "ergmlab/errors.hpp"
#include "ergmlab/exact.hpp"
#include "ergmlab/sampler.hpp"
#include "oracles.hpp"

using namespace ergmlab;

TEST_CASE("uniform measure at zero parameters") {
  const ExactMeasure m(ErgmSpec::edge_only(0), 3);
  CHECK(m.states() == 8);
  for (std::size_t c = 0; c < 8; ++c) CHECK(m.prob(c) == doctest::Approx(0.125));
  CHECK(m.edge_moments().mean == doctest::Approx(1.5));
  CHECK(m.log_z() == doctest::Approx(std::log(8.0)));
}

TEST_CASE("edge-only law is binomial") {
  for (double b : {-0.6, 0.25}) {
    const ExactMeasure m(ErgmSpec::edge_only(b), 5);
    const double p = std::exp(2 * b) / (1 + std::exp(2 * b));
    const auto bin = stats::standardized_binomial(10, p);
    for (std::size_t k = 0; k <= 10; ++k) CHECK(std::abs(m.edge_count_law()[k] - bin.probs[k]) < 1e-13);
    for (std::size_t s = 0; s < 10; ++s) {
      const EdgeId e = EdgeId::from_index(5, s);
      CHECK(m.marginal(e) == doctest::Approx(p));
      CHECK(exact_conditional(m, e, {{EdgeId::from_index(5, (s + 3) % 10), true},
                                    {EdgeId::from_index(5, (s + 5) % 10), false}}) ==
            doctest::Approx(p));
    }
  }
}

TEST_CASE("normalization and moments match an independent accumulation") {
  const auto spec = ErgmSpec::edge_triangle(0.0, 0.1);
  const ExactMeasure m(spec, 4);
  // Second implementation: brute-force hom counts, reverse order, Kahan sums,
  // and no max shift (weights are small here).
  double z = 0;
  double zc = 0;
  double ez = 0;
  double ec = 0;
  for (std::size_t code = m.states(); code-- > 0;) {
    const EdgeGraph g = EdgeGraph::from_code(4, code);
    const double t = 0.1 / 4 * static_cast<double>(oracle::hom(Template::triangle(), g));
    const double w = std::exp(t);
    double y = w - zc;
    double s = z + y;
    zc = (s - z) - y;
    z = s;
    y = w * static_cast<double>(g.edge_count()) - ec;
    s = ez + y;
    ec = (s - ez) - y;
    ez = s;
  }
  CHECK(std::abs(m.log_z() - std::log(z)) < 1e-12);
  CHECK(std::abs(m.edge_moments().mean - ez / z) < 1e-12);
  double total = 0;
  for (double p : m.probs()) total += p;
  CHECK(std::abs(total - 1) < 1e-12);
  CHECK(std::abs(m.expectation([](const EdgeGraph& g) { return double(g.edge_count()); }) -
                 m.edge_moments().mean) < 1e-12);
  const double tri_mean =
      m.expectation([](const EdgeGraph& g) { return double(hom_count(Template::triangle(), g)); });
  CHECK(std::abs(m.hom_moments(1).mean - tri_mean) < 1e-12);
}

TEST_CASE("marginals and conditionals") {
  const auto spec = ErgmSpec::edge_triangle(-0.2, 0.1);
  const ExactMeasure m(spec, 4);
  const EdgeId s = EdgeId::of(4, 0, 1);
  CHECK(std::abs(m.marginal(s) - exact_conditional(m, s, {})) < 1e-15);
  CHECK_THROWS_AS(exact_conditional(m, s, {{s, true}}), PreconditionError);
  const EdgeId l = EdgeId::of(4, 1, 2);
  CHECK_THROWS_AS(exact_conditional(m, s, {{l, true}, {l, false}}), PreconditionError);

  // Full conditioning gives the heat-bath probability.
  for (std::size_t code = 0; code < m.states(); code += 5) {
    const EdgeGraph g = EdgeGraph::from_code(4, code);
    std::vector<std::pair<EdgeId, bool>> cond;
    for (std::size_t k = 1; k < 6; ++k) cond.emplace_back(EdgeId::from_index(4, k), g.has(EdgeId::from_index(4, k)));
    CHECK(exact_conditional(m, s, cond) == doctest::Approx(logistic(cond_log_odds(spec, g, s))));
  }

  // Dependence on a neighbouring edge fades with the triangle coefficient.
  const EdgeId r = EdgeId::of(4, 0, 2);
  double last = 1;
  for (double b2 : {0.2, 0.1, 0.05}) {
    const ExactMeasure mm(ErgmSpec::edge_triangle(-0.2, b2), 4);
    const double gap = std::abs(exact_conditional(mm, s, {{r, true}}) - mm.marginal(s));
    CHECK(gap > 0);
    CHECK(gap < last);
    last = gap;
  }
}

TEST_CASE("law of the standardized edge count") {
  const auto k1 = ErgmSpec::edge_only(0.1);
  const auto rep = solve_fixed_point(k1);
  const ExactMeasure m(k1, 5);
  const auto w = exact_w_law(m, sigma_n_sq(k1, rep, 5));
  const auto bin = stats::standardized_binomial(10, *rep.p);
  CHECK(w.kolmogorov == doctest::Approx(stats::kolmogorov_to_normal(bin)).epsilon(1e-9));
  CHECK(w.kolmogorov >= 0);
  CHECK(w.kolmogorov <= 1);

  const auto et = ErgmSpec::edge_triangle(-0.2, 0.1);
  const auto rt = solve_fixed_point(et);
  const ExactMeasure m5(et, 5);
  const auto w5 = exact_w_law(m5, sigma_n_sq(et, rt, 5));
  CHECK(w5.kolmogorov == doctest::Approx(0.1302448319).epsilon(1e-8));
  CHECK(w5.wasserstein > 0);
}

TEST_CASE("size limits") {
  CHECK_THROWS_AS(ExactMeasure(ErgmSpec::edge_only(0), 7), PreconditionError);
}

TEST_CASE("total variation") {
  CHECK(total_variation({0.5, 0.5}, {0.5, 0.5}) == 0);
  CHECK(total_variation({1.0}, {0.0, 1.0}) == doctest::Approx(1.0));
}

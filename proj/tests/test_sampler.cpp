#include <cmath>

#include "doctest.h"
#include "ergmlab/exact.hpp"
#include "ergmlab/sampler.hpp"
#include "ergmlab/stats.hpp"

using namespace ergmlab;

namespace {

std::vector<double> edge_law_of(const std::vector<EdgeGraph>& gs, std::size_t slots) {
  std::vector<double> law(slots + 1, 0.0);
  for (const auto& g : gs) law[g.edge_count()] += 1.0 / static_cast<double>(gs.size());
  return law;
}

}  // namespace

TEST_CASE("kernel is stochastic and in detailed balance") {
  for (int n : {3, 4}) {
    const auto spec = ErgmSpec::edge_triangle(-0.2, 0.3);
    const ExactMeasure m(spec, n);
    const auto k = glauber_kernel(spec, n);
    const std::size_t s = m.states();
    double worst = 0;
    for (std::size_t x = 0; x < s; ++x) {
      double row = 0;
      for (std::size_t y = 0; y < s; ++y) {
        row += k[x * s + y];
        worst = std::max(worst, std::abs(m.prob(x) * k[x * s + y] - m.prob(y) * k[y * s + x]));
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("heat-bath probability is the exact conditional") {
  const auto spec = ErgmSpec::edge_triangle(-0.2, 0.3);
  const ExactMeasure m(spec, 4);
  for (std::size_t code = 0; code < m.states(); ++code) {
    const EdgeGraph g = EdgeGraph::from_code(4, code);
    for (std::size_t si = 0; si < 6; ++si) {
      const EdgeId s = EdgeId::from_index(4, si);
      const std::size_t on = code | (std::size_t{1} << si);
      const std::size_t off = code & ~(std::size_t{1} << si);
      const double exact = m.prob(on) / (m.prob(on) + m.prob(off));
      CHECK(std::abs(logistic(cond_log_odds(spec, g, s)) - exact) < 1e-12);
    }
  }
}

TEST_CASE("step draws cover every edge uniformly") {
  const CounterRng rng(3);
  std::vector<int> hits(10, 0);
  double usum = 0;
  for (std::uint64_t t = 0; t < 100000; ++t) {
    const auto d = step_draw(rng, 5, t);
    ++hits[d.edge.index];
    usum += d.u;
  }
  for (int h : hits) CHECK(std::abs(h - 10000) < 500);
  CHECK(std::abs(usum / 100000 - 0.5) < 0.005);
}

TEST_CASE("glauber step matches the chain runner") {
  const auto spec = ErgmSpec::edge_triangle(-0.1, 0.2);
  ChainState st{EdgeGraph(6), 0, 42, 3};
  for (int t = 0; t < 15 * 7; ++t) glauber_step(spec, st);
  SampleOptions o;
  o.burn_in_sweeps = 6;
  o.thin_sweeps = 1;
  o.count = 1;
  o.seed = 42;
  o.stream = 3;
  const auto run = sample(spec, 6, o);
  CHECK(run.graphs.front() == st.graph);
  CHECK(run.meta.total_steps == st.steps);
}

TEST_CASE("edge-only chain has density p") {
  const auto spec = ErgmSpec::edge_only(-0.3);
  const double p = std::exp(-0.6) / (1 + std::exp(-0.6));
  SampleOptions o;
  o.burn_in_sweeps = 5;
  o.thin_sweeps = 1;
  o.count = 10000;
  o.seed = 1;
  const int n = 8;
  double dens = 0;
  run_chain(spec, n, o, [&](std::size_t, const EdgeGraph& g) {
    dens += static_cast<double>(g.edge_count()) / 28.0 / 1e4;
  });
  // One sweep resamples most edges; allow for the remaining correlation.
  CHECK(std::abs(dens - p) < 3 * 1.5 * std::sqrt(p * (1 - p) / (1e4 * 28)));
}

TEST_CASE("fair-coin chain is uniform") {
  SampleOptions o;
  o.burn_in_sweeps = 5;
  o.thin_sweeps = 4;
  o.count = 20000;
  o.seed = 2;
  const auto run = sample(ErgmSpec::edge_only(0), 3, o);
  std::vector<double> freq(8, 0.0);
  for (const auto& g : run.graphs) freq[g.code()] += 1.0 / 20000;
  for (double f : freq) CHECK(std::abs(f - 0.125) < 0.01);
}

TEST_CASE("seed determinism and chain independence of scheduling") {
  const auto spec = ErgmSpec::edge_triangle(-0.2, 0.1);
  SampleOptions o;
  o.burn_in_sweeps = 3;
  o.thin_sweeps = 2;
  o.count = 50;
  o.seed = 9;
  const auto a = sample(spec, 10, o);
  const auto b = sample(spec, 10, o);
  CHECK(a.graphs == b.graphs);
  o.seed = 10;
  CHECK(sample(spec, 10, o).graphs != a.graphs);
  o.seed = 9;
  const auto one = sample_chains(spec, 7, o, 4, 1);
  const auto many = sample_chains(spec, 7, o, 4, 3);
  for (std::size_t c = 0; c < 4; ++c) CHECK(one[c].graphs == many[c].graphs);
  CHECK(one[0].graphs != one[1].graphs);
}

TEST_CASE("chain edge-count law matches enumeration at n = 4") {
  const auto spec = ErgmSpec::edge_triangle(-0.2, 0.1);
  const ExactMeasure m(spec, 4);
  SampleOptions o;
  o.burn_in_sweeps = 10;
  o.thin_sweeps = 1;
  o.count = 50000;
  o.seed = 4;
  CHECK(total_variation(edge_law_of(sample(spec, 4, o).graphs, 6), m.edge_count_law()) < 0.03);
}

TEST_CASE("coupled chains stay ordered") {
  const auto spec = ErgmSpec::edge_triangle(-0.3, 0.4);
  const int n = 8;
  const CounterRng rng(77);
  EdgeGraph lower(n);
  EdgeGraph upper = EdgeGraph::complete(n);
  bool ordered = true;
  for (std::uint64_t t = 0; t < 1000000 && ordered; ++t) {
    const auto d = step_draw(rng, n, t);
    apply_update(spec, lower, d);
    apply_update(spec, upper, d);
    ordered = lower.has(d.edge) <= upper.has(d.edge);
  }
  CHECK(ordered);
  CHECK(lower.subset_of(upper));
}

TEST_CASE("coupling from the past") {
  SUBCASE("edge-only output is product Bernoulli") {
    const double p = std::exp(0.4) / (1 + std::exp(0.4));
    double dens = 0;
    for (std::uint64_t s = 0; s < 4000; ++s) {
      const auto r = cftp_sample(ErgmSpec::edge_only(0.2), 5, s);
      dens += static_cast<double>(r.graph.edge_count()) / 10.0 / 4000;
    }
    CHECK(std::abs(dens - p) < 3 * std::sqrt(p * (1 - p) / 40000));
  }
  SUBCASE("law matches enumeration") {
    const auto spec = ErgmSpec::edge_triangle(-0.2, 0.1);
    const ExactMeasure m(spec, 4);
    std::vector<EdgeGraph> gs;
    for (std::uint64_t s = 0; s < 20000; ++s) gs.push_back(cftp_sample(spec, 4, s).graph);
    CHECK(total_variation(edge_law_of(gs, 6), m.edge_count_law()) < 0.03);
  }
  SUBCASE("errors") {
    const ErgmSpec neg({0.1, -0.2}, {Template::edge(), Template::triangle()}, true);
    CHECK_THROWS_AS(cftp_sample(neg, 4, 1), UnsupportedRegime);
    CftpOptions o;
    o.max_sweeps = 1;
    try {
      (void)cftp_sample(ErgmSpec::edge_only(0), 12, 5, o);
      FAIL("expected a timeout");
    } catch (const CftpTimeout& e) {
      CHECK(e.horizon_sweeps == 1);
      CHECK(e.disagreeing_edges > 0);
    }
  }
  SUBCASE("deterministic in the seed") {
    const auto spec = ErgmSpec::edge_triangle(-0.1, 0.2);
    CHECK(cftp_sample(spec, 6, 31).graph == cftp_sample(spec, 6, 31).graph);
  }
}

TEST_CASE("Erdos-Renyi sampler") {
  CHECK(er_sample(9, 0, 1).edge_count() == 0);
  CHECK(er_sample(9, 1, 1).edge_count() == 36);
  double mean = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) mean += static_cast<double>(er_sample(50, 0.3, s).edge_count()) / 1e4;
  CHECK(std::abs(mean - 1225 * 0.3) < 3 * std::sqrt(1225 * 0.21 / 1e4));
  CHECK_THROWS_AS(er_sample(5, 1.5, 1), PreconditionError);
}

TEST_CASE("default burn-in") {
  CHECK(default_burn_in_sweeps(10) == 100);
  CHECK(default_burn_in_sweeps(400) >= 100);
}

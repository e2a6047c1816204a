#include <stdexcept>

#include "doctest.h"
#include "ergmlab/errors.hpp"
#include "ergmlab/graph.hpp"
#include "ergmlab/identities.hpp"
#include "ergmlab/io.hpp"
#include "ergmlab/random.hpp"
#include "oracles.hpp"

using namespace ergmlab;

namespace {

EdgeGraph path3() {
  EdgeGraph g(3);
  g.set(EdgeId::of(3, 0, 1), true);
  g.set(EdgeId::of(3, 1, 2), true);
  return g;
}

}  // namespace

TEST_CASE("edge index round-trips in lexicographic order") {
  for (int n : {2, 3, 7, 65, 130}) {
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++k) {
        const EdgeId e = EdgeId::of(n, i, j);
        CHECK(e.index == k);
        CHECK(EdgeId::of(n, j, i) == e);
        CHECK(EdgeId::from_index(n, k) == e);
      }
    }
    CHECK(k == pair_count(n));
  }
}

TEST_CASE("edge count is the popcount of the indicator bits") {
  CounterRng rng(5);
  for (int t = 0; t < 20; ++t) {
    const EdgeGraph g = oracle::random_graph(70, 0.3, rng);
    std::size_t by_pairs = 0;
    for (int i = 0; i < 70; ++i)
      for (int j = i + 1; j < 70; ++j) by_pairs += g.adjacent(i, j) ? 1 : 0;
    CHECK(g.edge_count() == by_pairs);
  }
  CHECK(EdgeGraph::complete(6).edge_count() == 15);
}

TEST_CASE("hom counts on small hosts") {
  CounterRng rng(1);
  const EdgeGraph g = oracle::random_graph(9, 0.4, rng);
  CHECK(hom_count(Template::edge(), g) == 2 * g.edge_count());
  CHECK(hom_count(Template::triangle(), EdgeGraph::complete(3)) == 6);
  CHECK(hom_count(Template::two_star(), path3()) == 2);
  CHECK_THROWS_AS(hom_count(Template::clique(4), EdgeGraph::complete(3)), PreconditionError);
}

TEST_CASE("rooted counts on small hosts") {
  CounterRng rng(2);
  const EdgeGraph g = oracle::random_graph(8, 0.5, rng);
  for (std::size_t k = 0; k < g.pair_slots(); k += 3)
    CHECK(rooted_hom_count(Template::edge(), g, EdgeId::from_index(8, k)) == 2);
  CHECK(rooted_hom_count(Template::triangle(), EdgeGraph::complete(3), EdgeId::of(3, 0, 1)) == 6);
  CHECK(rooted_hom_count(Template::two_star(), EdgeGraph(3), EdgeId::of(3, 0, 1)) == 0);
}

TEST_CASE("pair-rooted counts") {
  CounterRng rng(3);
  const EdgeGraph g = oracle::random_graph(6, 0.5, rng);
  CHECK(rooted_pair_hom_count(Template::edge(), g, EdgeId::of(6, 0, 1), EdgeId::of(6, 2, 3)) == 0);
  CHECK(rooted_pair_hom_count(Template::two_star(), g, EdgeId::of(6, 0, 1), EdgeId::of(6, 0, 2)) ==
        2);
  CHECK(rooted_pair_hom_count(Template::triangle(), EdgeGraph::complete(4), EdgeId::of(4, 0, 1),
                              EdgeId::of(4, 2, 3)) == 0);
  CHECK_THROWS_AS(
      rooted_pair_hom_count(Template::edge(), g, EdgeId::of(6, 0, 1), EdgeId::of(6, 0, 1)),
      PreconditionError);
}

TEST_CASE("counts agree with brute-force enumeration") {
  CounterRng rng(4);
  for (int t = 0; t < 150; ++t) {
    const Template h = oracle::random_template(rng, 5);
    const int n = h.vertices() + static_cast<int>(rng.below(3));
    const EdgeGraph g = oracle::random_graph(n, 0.2 + 0.6 * rng.uniform(), rng);
    REQUIRE(hom_count(h, g) == oracle::hom(h, g));
    const EdgeId s = EdgeId::from_index(n, rng.below(g.pair_slots()));
    REQUIRE(rooted_hom_count(h, g, s) == oracle::rooted(h, g, s));
    if (g.pair_slots() >= 2) {
      EdgeId r = EdgeId::from_index(n, rng.below(g.pair_slots()));
      if (r == s) r = EdgeId::from_index(n, (s.index + 1) % g.pair_slots());
      REQUIRE(rooted_pair_hom_count(h, g, s, r) == oracle::rooted_pair(h, g, s, r));
    }
  }
}

TEST_CASE("toggle, edge-weighted and deletion-sum identities") {
  CounterRng rng(6);
  for (int t = 0; t < 60; ++t) {
    const Template h = oracle::random_template(rng, 5);
    const int n = 7;
    const EdgeGraph g = oracle::random_graph(n, 0.5, rng);
    std::uint64_t weighted = 0;
    std::uint64_t unweighted = 0;
    for (std::size_t k = 0; k < g.pair_slots(); ++k) {
      const EdgeId s = EdgeId::from_index(n, k);
      const std::uint64_t r = rooted_hom_count(h, g, s);
      REQUIRE(hom_count(h, g.with(s, true)) - hom_count(h, g.with(s, false)) == r);
      if (g.has(s)) weighted += r;
      unweighted += r;
    }
    CHECK(weighted == static_cast<std::uint64_t>(h.edge_count()) * hom_count(h, g));
    std::uint64_t deleted = 0;
    for (std::size_t e = 0; e < static_cast<std::size_t>(h.edge_count()); ++e)
      deleted += hom_count(delete_edge(h, e), g);
    CHECK(unweighted == deleted);
  }
}

TEST_CASE("isolated vertex multiplies by the remaining host vertices") {
  CounterRng rng(7);
  for (int t = 0; t < 30; ++t) {
    const Template h = oracle::random_template(rng, 4);
    const EdgeGraph g = oracle::random_graph(8, 0.6, rng);
    CHECK(hom_count(h.with_isolated_vertex(), g) ==
          static_cast<std::uint64_t>(8 - h.vertices()) * hom_count(h, g));
  }
}

TEST_CASE("complete host admits every injective map") {
  const std::uint64_t fact[] = {1, 1, 2, 6, 24, 120, 720};
  CounterRng rng(8);
  for (int t = 0; t < 20; ++t) {
    const Template h = oracle::random_template(rng, 6);
    CHECK(hom_count(h, EdgeGraph::complete(h.vertices())) == fact[h.vertices()]);
  }
}

TEST_CASE("delete_edge and automorphisms") {
  const Template p = delete_edge(Template::triangle(), 1);
  CHECK(p.vertices() == 3);
  CHECK(p.edge_count() == 2);
  CHECK(aut_count(p) == 2);
  const Template bare = delete_edge(Template::edge(), 0);
  CHECK(bare.vertices() == 2);
  CHECK(bare.edge_count() == 0);
  const Template leaf = delete_edge(Template::two_star(), 1);
  CHECK(leaf.edge_count() == 1);
  CHECK(leaf.has_isolated_vertices());
  CHECK_THROWS(delete_edge(Template::edge(), 1));
  CHECK(aut_count(Template::edge()) == 2);
  CHECK(aut_count(Template::triangle()) == 6);
  CHECK(aut_count(Template::two_star()) == 2);
  CHECK(aut_count(Template::cycle(4)) == 8);
  CHECK(aut_count(Template::clique(5)) == 120);
}

TEST_CASE("template validation") {
  CHECK_THROWS(Template(3, {{0, 0}}));
  CHECK_THROWS(Template(3, {{0, 1}, {1, 0}}));
  CHECK_THROWS(Template(3, {{0, 3}}));
  CHECK_THROWS(Template(9, {{0, 1}}));
  CHECK(Template(3, {{2, 0}}).edges().front() == std::pair{0, 2});
}

TEST_CASE("template text") {
  const Template t = io::parse_template("v 3\n1 2\n2 3\n");
  CHECK(t == Template::path(3));
  CHECK(io::parse_template(io::format_template(Template::cycle(5))) == Template::cycle(5));
  CHECK_THROWS_AS(io::parse_template("v 3\n1 4\n"), ConfigError);
  CHECK_THROWS_AS(io::parse_template("3\n1 2\n"), ConfigError);
  CHECK_THROWS_AS(io::parse_template("v 3\n1 x\n"), ConfigError);
  CHECK(io::resolve_template("tri") == Template::triangle());
  CHECK(io::resolve_template("2star") == Template::two_star());
  CHECK(io::resolve_template("cycle4") == Template::cycle(4));
}

TEST_CASE("graph hex round-trip") {
  CounterRng rng(9);
  for (int n : {1, 2, 3, 5, 12, 40}) {
    const EdgeGraph g = oracle::random_graph(n, 0.5, rng);
    CHECK(io::parse_graph(io::format_graph(g)) == g);
  }
  EdgeGraph g(3);
  g.set(EdgeId::of(3, 0, 1), true);
  CHECK(io::format_graph(g) == "n 3\n1\n");
  CHECK_THROWS_AS(io::parse_graph("n 3\n8\n"), ConfigError);
  CHECK_THROWS_AS(io::parse_graph("n 3\n11\n"), ConfigError);
  CHECK_THROWS_AS(io::parse_graph("n 3\nz\n"), ConfigError);
}

TEST_CASE("spec json") {
  const auto sf = io::parse_spec_json(
      R"({"n": 5, "betas": [-0.2, 0.1], "templates": [{"v": 2, "edges": [[1,2]]},)"
      R"( {"v": 3, "edges": [[1,2],[2,3],[1,3]]}]})");
  CHECK(sf.n == 5);
  CHECK(sf.spec.templates()[1] == Template::triangle());
  const auto again = io::parse_spec_json(io::format_spec_json(sf.spec, sf.n));
  CHECK(again.spec.betas() == sf.spec.betas());
  CHECK_THROWS_AS(io::parse_spec_json("{"), ConfigError);
  CHECK_THROWS_AS(io::parse_spec_json(R"({"betas": [1], "templates": []})"), ConfigError);
  CHECK_THROWS_AS(io::parse_spec_json(R"({"betas": [0.1, -1],
      "templates": [{"v":2,"edges":[[1,2]]},{"v":3,"edges":[[1,2],[2,3]]}]})"),
                  ConfigError);
}

TEST_CASE("identity suite") {
  IdentityOptions o;
  o.n = 9;
  o.trials = 40;
  o.seed = 9;
  const auto r = run_identity_suite(o);
  CHECK(r.ok());
  CHECK(r.toggle_checks == 40 * 36);
  CHECK(r.weighted_checks == 40);
  o.max_template_vertices = 10;
  CHECK_THROWS_AS(run_identity_suite(o), PreconditionError);
}

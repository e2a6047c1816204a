#include "ergmlab/identities.hpp"

#include <sstream>

#include "ergmlab/errors.hpp"
#include "ergmlab/graph.hpp"
#include "ergmlab/random.hpp"

namespace ergmlab {

namespace {

constexpr std::size_t kKeptViolations = 10;

Template random_template(CounterRng& rng, int max_v, int max_e) {
  for (;;) {
    const int v = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_v - 1)));
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < v; ++a) {
      for (int b = a + 1; b < v; ++b) {
        if (rng.uniform() < 0.5 && static_cast<int>(edges.size()) < max_e) edges.emplace_back(a, b);
      }
    }
    if (!edges.empty()) return Template(v, std::move(edges));
  }
}

std::string describe(const char* what, std::size_t trial, const Template& h, const std::string& extra) {
  std::ostringstream os;
  os << what << " failed in trial " << trial << " (template v=" << h.vertices() << ", e=" << h.edge_count()
     << ")" << extra;
  return os.str();
}

}  // namespace

IdentityReport run_identity_suite(const IdentityOptions& opts) {
  if (opts.n < 2 || opts.n > kMaxHostVertices) throw PreconditionError("host size out of range");
  if (opts.max_template_vertices < 2 || opts.max_template_vertices > std::min(kMaxTemplateVertices, opts.n)) {
    throw PreconditionError("template vertex cap must lie in [2, min(8, n)]");
  }
  if (opts.max_template_edges < 1 || opts.max_template_edges > kMaxTemplateEdges) {
    throw PreconditionError("template edge cap must lie in [1, 12]");
  }
  IdentityReport rep;
  rep.trials = opts.trials;
  CounterRng rng(opts.seed);
  auto fail = [&](std::string msg) {
    ++rep.violation_count;
    if (rep.violations.size() < kKeptViolations) rep.violations.push_back(std::move(msg));
  };
  std::uint64_t factorial[kMaxTemplateVertices + 1] = {1};
  for (int k = 1; k <= kMaxTemplateVertices; ++k) factorial[k] = factorial[k - 1] * static_cast<std::uint64_t>(k);

  for (std::size_t t = 0; t < opts.trials; ++t) {
    const Template h = random_template(rng, opts.max_template_vertices, opts.max_template_edges);
    const HomCounter counter(h);
    EdgeGraph g(opts.n);
    for (std::size_t k = 0; k < g.pair_slots(); ++k) {
      if (rng.uniform() < opts.density) g.set(EdgeId::from_index(opts.n, k), true);
    }
    const std::uint64_t hom = counter.count(g);
    std::uint64_t weighted = 0;
    std::uint64_t unweighted = 0;
    for (std::size_t k = 0; k < g.pair_slots(); ++k) {
      const EdgeId s = EdgeId::from_index(opts.n, k);
      const std::uint64_t r = counter.rooted(g, s);
      const std::uint64_t with = g.has(s) ? hom : counter.count(g.with(s, true));
      const std::uint64_t without = g.has(s) ? counter.count(g.with(s, false)) : hom;
      ++rep.toggle_checks;
      if (with - without != r) fail(describe("toggle identity", t, h, " at pair " + std::to_string(k)));
      if (g.has(s)) weighted += r;
      unweighted += r;
    }
    ++rep.weighted_checks;
    if (weighted != static_cast<std::uint64_t>(h.edge_count()) * hom) fail(describe("edge-weighted identity", t, h, ""));
    std::uint64_t deleted = 0;
    for (std::size_t e = 0; e < static_cast<std::size_t>(h.edge_count()); ++e) {
      deleted += hom_count(delete_edge(h, e), g);
    }
    ++rep.deletion_checks;
    if (unweighted != deleted) fail(describe("deletion-sum identity", t, h, ""));
    if (h.vertices() < opts.n) {
      ++rep.isolated_checks;
      if (hom_count(h.with_isolated_vertex(), g) != static_cast<std::uint64_t>(opts.n - h.vertices()) * hom) {
        fail(describe("isolated-vertex factor", t, h, ""));
      }
    }
    ++rep.complete_checks;
    if (counter.count(EdgeGraph::complete(h.vertices())) != factorial[h.vertices()]) {
      fail(describe("complete-host count", t, h, ""));
    }
  }
  return rep;
}

}  // namespace ergmlab

#include "ergmlab/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <string>

#include "ergmlab/errors.hpp"

namespace ergmlab {

EdgeId EdgeId::of(int n, int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= n || b >= n) {
    throw PreconditionError("invalid vertex pair (" + std::to_string(a) + "," +
                            std::to_string(b) + ") for n=" + std::to_string(n));
  }
  if (a > b) std::swap(a, b);
  const auto i = static_cast<std::size_t>(a);
  const auto nn = static_cast<std::size_t>(n);
  return EdgeId{a, b, i * nn - i * (i + 1) / 2 + static_cast<std::size_t>(b - a - 1)};
}

EdgeId EdgeId::from_index(int n, std::size_t index) {
  if (index >= pair_count(n)) {
    throw PreconditionError("edge index " + std::to_string(index) + " out of range for n=" +
                            std::to_string(n));
  }
  std::size_t rest = index;
  int i = 0;
  while (rest >= static_cast<std::size_t>(n - 1 - i)) {
    rest -= static_cast<std::size_t>(n - 1 - i);
    ++i;
  }
  return EdgeId{i, i + 1 + static_cast<int>(rest), index};
}

EdgeGraph::EdgeGraph(int n)
    : n_(n),
      words_(n > 0 ? (static_cast<std::size_t>(n) + 63) / 64 : 0),
      bits_((pair_count(n) + 63) / 64, 0),
      rows_(static_cast<std::size_t>(std::max(n, 0)) * words_, 0) {
  if (n < 0) throw PreconditionError("vertex count must be non-negative");
}

EdgeGraph EdgeGraph::complete(int n) {
  EdgeGraph g(n);
  for (std::size_t k = 0; k < g.pair_slots(); ++k) g.set(EdgeId::from_index(n, k), true);
  return g;
}

EdgeGraph EdgeGraph::from_code(int n, std::uint64_t code) {
  if (pair_count(n) > 64) throw PreconditionError("from_code needs n(n-1)/2 <= 64");
  EdgeGraph g(n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      if ((code >> k) & 1U) g.set(EdgeId{i, j, k}, true);
    }
  }
  return g;
}

std::size_t EdgeGraph::edge_count() const noexcept {
  std::size_t total = 0;
  for (auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

void EdgeGraph::set(EdgeId s, bool present) noexcept {
  const std::uint64_t mask = std::uint64_t{1} << (s.index & 63);
  auto& word = bits_[s.index >> 6];
  if (static_cast<bool>(word & mask) == present) return;
  word ^= mask;
  rows_[static_cast<std::size_t>(s.i) * words_ + (s.j >> 6)] ^= std::uint64_t{1} << (s.j & 63);
  rows_[static_cast<std::size_t>(s.j) * words_ + (s.i >> 6)] ^= std::uint64_t{1} << (s.i & 63);
}

int EdgeGraph::degree(int v) const noexcept {
  int d = 0;
  for (auto w : row(v)) d += std::popcount(w);
  return d;
}

bool EdgeGraph::subset_of(const EdgeGraph& other) const noexcept {
  if (n_ != other.n_) return false;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k] & ~other.bits_[k]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Template::Template(int vertices, std::vector<std::pair<int, int>> edges)
    : v_(vertices), edges_(std::move(edges)) {
  if (v_ < 1 || v_ > kMaxTemplateVertices) {
    throw PreconditionError("template vertex count must be in [1, " +
                            std::to_string(kMaxTemplateVertices) + "]");
  }
  if (static_cast<int>(edges_.size()) > kMaxTemplateEdges) {
    throw PreconditionError("template has more than " + std::to_string(kMaxTemplateEdges) +
                            " edges");
  }
  for (auto& [a, b] : edges_) {
    if (a < 0 || b < 0 || a >= v_ || b >= v_) {
      throw PreconditionError("template edge endpoint out of range");
    }
    if (a == b) throw PreconditionError("template has a self-loop");
    if (a > b) std::swap(a, b);
  }
  auto sorted = edges_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionError("template has a duplicate edge");
  }
}

Template Template::path(int vertices) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u + 1 < vertices; ++u) e.emplace_back(u, u + 1);
  return Template(vertices, std::move(e));
}

Template Template::cycle(int vertices) {
  if (vertices < 3) throw PreconditionError("cycle needs at least 3 vertices");
  auto e = path(vertices).edges();
  e.emplace_back(0, vertices - 1);
  return Template(vertices, std::move(e));
}

Template Template::star(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int u = 1; u <= leaves; ++u) e.emplace_back(0, u);
  return Template(leaves + 1, std::move(e));
}

Template Template::clique(int vertices) {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < vertices; ++a)
    for (int b = a + 1; b < vertices; ++b) e.emplace_back(a, b);
  return Template(vertices, std::move(e));
}

bool Template::adjacent(int a, int b) const noexcept {
  if (a > b) std::swap(a, b);
  return std::find(edges_.begin(), edges_.end(), std::pair{a, b}) != edges_.end();
}

int Template::degree(int u) const noexcept {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [u](const auto& e) {
    return e.first == u || e.second == u;
  }));
}

bool Template::has_isolated_vertices() const noexcept {
  for (int u = 0; u < v_; ++u)
    if (degree(u) == 0) return true;
  return false;
}

Template Template::with_isolated_vertex() const { return Template(v_ + 1, edges_); }

// ---------------------------------------------------------------------------

namespace {

// Most-constrained-first ordering of the non-isolated vertices that are not
// preset: repeatedly take the vertex with the most already-placed neighbours,
// breaking ties by degree.
HomCounter::Plan make_plan(const Template& h, int preset_a, int preset_b) {
  HomCounter::Plan plan;
  plan.preset_a = preset_a;
  plan.preset_b = preset_b;
  const int v = h.vertices();
  std::vector<bool> placed(static_cast<std::size_t>(v), false);
  if (preset_a >= 0) placed[static_cast<std::size_t>(preset_a)] = true;
  if (preset_b >= 0) placed[static_cast<std::size_t>(preset_b)] = true;
  std::vector<int> remaining;
  for (int u = 0; u < v; ++u) {
    if (placed[static_cast<std::size_t>(u)]) continue;
    if (h.degree(u) == 0) {
      ++plan.isolated;
    } else {
      remaining.push_back(u);
    }
  }
  while (!remaining.empty()) {
    auto best = remaining.begin();
    int best_links = -1;
    int best_degree = -1;
    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      int links = 0;
      for (int w = 0; w < v; ++w)
        if (placed[static_cast<std::size_t>(w)] && h.adjacent(*it, w)) ++links;
      const int deg = h.degree(*it);
      if (links > best_links || (links == best_links && deg > best_degree)) {
        best = it;
        best_links = links;
        best_degree = deg;
      }
    }
    const int u = *best;
    remaining.erase(best);
    std::vector<int> back;
    for (int w = 0; w < v; ++w)
      if (placed[static_cast<std::size_t>(w)] && h.adjacent(u, w)) back.push_back(w);
    plan.order.push_back(u);
    plan.back.push_back(std::move(back));
    placed[static_cast<std::size_t>(u)] = true;
  }
  return plan;
}

// Ordered placements of `isolated` vertices among the `free_vertices` unused
// host vertices.
std::uint64_t falling(std::uint64_t free_vertices, int isolated) {
  std::uint64_t r = 1;
  for (int t = 0; t < isolated; ++t) {
    if (free_vertices < static_cast<std::uint64_t>(t) + 1) return 0;
    r *= free_vertices - static_cast<std::uint64_t>(t);
  }
  return r;
}

constexpr std::size_t kMaxHostWords = kMaxHostVertices / 64;

class Search {
 public:
  Search(const HomCounter::Plan& plan, const EdgeGraph& g)
      : plan_(plan), g_(g), words_(g.row_words()) {
    used_.fill(0);
    image_.fill(-1);
  }

  void preset(int h_vertex, int host_vertex) {
    image_[static_cast<std::size_t>(h_vertex)] = host_vertex;
    used_[static_cast<std::size_t>(host_vertex) >> 6] |= std::uint64_t{1} << (host_vertex & 63);
  }

  std::uint64_t run() {
    const std::uint64_t placed_count =
        plan_.order.size() + (plan_.preset_a >= 0 ? 1U : 0U) + (plan_.preset_b >= 0 ? 1U : 0U);
    const auto n = static_cast<std::uint64_t>(g_.n());
    const std::uint64_t iso = falling(n - std::min(n, placed_count), plan_.isolated);
    if (iso == 0) return 0;
    if (plan_.order.empty()) return iso;
    return iso * descend(0);
  }

 private:
  std::uint64_t descend(std::size_t depth) {
    std::uint64_t* cand = cand_.data() + depth * words_;
    const auto& back = plan_.back[depth];
    const int n = g_.n();
    if (back.empty()) {
      for (std::size_t w = 0; w < words_; ++w) cand[w] = ~std::uint64_t{0};
      if (n & 63) cand[words_ - 1] = (std::uint64_t{1} << (n & 63)) - 1;
    } else {
      auto first = g_.row(image_[static_cast<std::size_t>(back[0])]);
      std::copy(first.begin(), first.end(), cand);
      for (std::size_t k = 1; k < back.size(); ++k) {
        auto r = g_.row(image_[static_cast<std::size_t>(back[k])]);
        for (std::size_t w = 0; w < words_; ++w) cand[w] &= r[w];
      }
    }
    for (std::size_t w = 0; w < words_; ++w) cand[w] &= ~used_[w];

    if (depth + 1 == plan_.order.size()) {
      std::uint64_t c = 0;
      for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::uint64_t>(std::popcount(cand[w]));
      return c;
    }
    const int u = plan_.order[depth];
    std::uint64_t total = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bitsw = cand[w];
      while (bitsw) {
        const int bit = std::countr_zero(bitsw);
        bitsw &= bitsw - 1;
        const int x = static_cast<int>(w * 64) + bit;
        image_[static_cast<std::size_t>(u)] = x;
        used_[w] |= std::uint64_t{1} << bit;
        total += descend(depth + 1);
        used_[w] &= ~(std::uint64_t{1} << bit);
      }
    }
    image_[static_cast<std::size_t>(u)] = -1;
    return total;
  }

  const HomCounter::Plan& plan_;
  const EdgeGraph& g_;
  std::size_t words_;
  std::array<std::uint64_t, kMaxTemplateVertices * kMaxHostWords> cand_;
  std::array<std::uint64_t, kMaxHostWords> used_;
  std::array<int, kMaxTemplateVertices> image_;
};

void check_fits(const Template& h, const EdgeGraph& g) {
  if (g.n() > kMaxHostVertices) {
    throw PreconditionError("homomorphism counting supports hosts up to " +
                            std::to_string(kMaxHostVertices) + " vertices");
  }
  if (h.vertices() > g.n()) {
    throw PreconditionError("template larger than host (v=" + std::to_string(h.vertices()) +
                            ", n=" + std::to_string(g.n()) + ")");
  }
}

}  // namespace

HomCounter::HomCounter(Template pattern)
    : pattern_(std::move(pattern)), plain_(make_plan(pattern_, -1, -1)) {
  for (const auto& [a, b] : pattern_.edges()) rooted_.push_back(make_plan(pattern_, a, b));
}

std::uint64_t HomCounter::count(const EdgeGraph& host) const {
  check_fits(pattern_, host);
  Search search(plain_, host);
  return search.run();
}

std::uint64_t HomCounter::rooted(const EdgeGraph& host, EdgeId s) const {
  check_fits(pattern_, host);
  std::uint64_t total = 0;
  for (const auto& plan : rooted_) {
    for (int flip = 0; flip < 2; ++flip) {
      Search search(plan, host);
      search.preset(plan.preset_a, flip ? s.j : s.i);
      search.preset(plan.preset_b, flip ? s.i : s.j);
      total += search.run();
    }
  }
  return total;
}

std::uint64_t hom_count(const Template& pattern, const EdgeGraph& host) {
  return HomCounter(pattern).count(host);
}

std::uint64_t rooted_hom_count(const Template& pattern, const EdgeGraph& host, EdgeId s) {
  return HomCounter(pattern).rooted(host, s);
}

std::uint64_t rooted_pair_hom_count(const Template& pattern, const EdgeGraph& host, EdgeId l,
                                    EdgeId r) {
  if (l == r) throw PreconditionError("rooted pair count needs two distinct edges");
  const HomCounter counter(pattern);
  // Maps covering l with r present minus maps covering l with r absent.
  return counter.rooted(host.with(r, true), l) - counter.rooted(host.with(r, false), l);
}

Template delete_edge(const Template& pattern, std::size_t edge_index) {
  if (edge_index >= pattern.edges().size()) {
    throw PreconditionError("edge index " + std::to_string(edge_index) + " out of range");
  }
  auto edges = pattern.edges();
  edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(edge_index));
  return Template(pattern.vertices(), std::move(edges));
}

std::uint64_t aut_count(const Template& pattern) {
  std::vector<int> perm(static_cast<std::size_t>(pattern.vertices()));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (const auto& [a, b] : pattern.edges()) {
      if (!pattern.adjacent(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)])) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace ergmlab

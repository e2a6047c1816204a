#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ergmlab {

inline constexpr int kMaxTemplateVertices = 8;
inline constexpr int kMaxTemplateEdges = 12;
inline constexpr int kMaxHostVertices = 512;

/// Number of vertex pairs of an n-vertex simple graph, n(n-1)/2.
constexpr std::size_t pair_count(int n) noexcept {
  return n < 2 ? 0 : static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

/// An unordered vertex pair {i, j} of an n-vertex host, stored with i < j
/// (0-based) together with its position in the canonical lexicographic
/// order (0,1), (0,2), ..., (0,n-1), (1,2), ...
struct EdgeId {
  int i = 0;
  int j = 1;
  std::size_t index = 0;

  static EdgeId of(int n, int a, int b);
  static EdgeId from_index(int n, std::size_t index);

  friend bool operator==(const EdgeId&, const EdgeId&) = default;
};

/// Simple graph on n labeled vertices, stored as the edge-indicator bit vector
/// over canonical pair order. Adjacency rows are kept alongside as bitsets so
/// neighbourhood intersections are word operations.
class EdgeGraph {
 public:
  explicit EdgeGraph(int n = 0);

  static EdgeGraph complete(int n);
  /// Graph whose indicator vector is the low pair_count(n) bits of `code`
  /// (bit k = canonical pair k). Requires pair_count(n) <= 64.
  static EdgeGraph from_code(int n, std::uint64_t code);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] std::size_t pair_slots() const noexcept { return pair_count(n_); }
  [[nodiscard]] std::size_t edge_count() const noexcept;

  [[nodiscard]] bool has(EdgeId s) const noexcept {
    return (bits_[s.index >> 6] >> (s.index & 63)) & 1U;
  }
  [[nodiscard]] bool adjacent(int a, int b) const noexcept {
    return (rows_[static_cast<std::size_t>(a) * words_ + (b >> 6)] >> (b & 63)) & 1U;
  }
  void set(EdgeId s, bool present) noexcept;
  [[nodiscard]] EdgeGraph with(EdgeId s, bool present) const {
    EdgeGraph g = *this;
    g.set(s, present);
    return g;
  }

  /// Low 64 indicator bits; meaningful only when pair_count(n) <= 64.
  [[nodiscard]] std::uint64_t code() const noexcept { return bits_.empty() ? 0 : bits_[0]; }

  [[nodiscard]] std::span<const std::uint64_t> bits() const noexcept { return bits_; }
  [[nodiscard]] std::span<const std::uint64_t> row(int v) const noexcept {
    return {rows_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  [[nodiscard]] std::size_t row_words() const noexcept { return words_; }
  [[nodiscard]] int degree(int v) const noexcept;

  /// Edgewise x <= y.
  [[nodiscard]] bool subset_of(const EdgeGraph& other) const noexcept;

  friend bool operator==(const EdgeGraph& a, const EdgeGraph& b) noexcept {
    return a.n_ == b.n_ && a.bits_ == b.bits_;
  }

 private:
  int n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> rows_;
};

/// Small labeled pattern graph H with vertices 0..v-1. Isolated vertices are
/// permitted here; model templates reject them separately.
class Template {
 public:
  Template(int vertices, std::vector<std::pair<int, int>> edges);

  static Template edge() { return Template(2, {{0, 1}}); }
  static Template two_star() { return Template(3, {{0, 1}, {0, 2}}); }
  static Template triangle() { return Template(3, {{0, 1}, {1, 2}, {0, 2}}); }
  static Template path(int vertices);
  static Template cycle(int vertices);
  static Template star(int leaves);
  static Template clique(int vertices);

  [[nodiscard]] int vertices() const noexcept { return v_; }
  [[nodiscard]] int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  [[nodiscard]] const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  [[nodiscard]] bool adjacent(int a, int b) const noexcept;
  [[nodiscard]] int degree(int u) const noexcept;
  [[nodiscard]] bool has_isolated_vertices() const noexcept;
  [[nodiscard]] Template with_isolated_vertex() const;

  friend bool operator==(const Template&, const Template&) = default;

 private:
  int v_;
  std::vector<std::pair<int, int>> edges_;
};

/// Compiled search plans for one template: a plain plan for |Hom(H,G)| and one
/// rooted plan per H-edge for |Hom(H,G,s)|. Reusable across hosts; const
/// member functions are safe to call concurrently.
class HomCounter {
 public:
  explicit HomCounter(Template pattern);

  [[nodiscard]] const Template& pattern() const noexcept { return pattern_; }

  /// Number of injective vertex maps sending every H-edge onto a G-edge.
  [[nodiscard]] std::uint64_t count(const EdgeGraph& host) const;

  /// Number of injective maps in which some H-edge lands on s and every other
  /// H-edge lands on a G-edge. Independent of whether s itself is present.
  [[nodiscard]] std::uint64_t rooted(const EdgeGraph& host, EdgeId s) const;

  struct Plan {
    std::vector<int> order;            // non-isolated vertices still to place
    std::vector<std::vector<int>> back;  // placed neighbours of order[d]
    int preset_a = -1;
    int preset_b = -1;
    int isolated = 0;
  };

 private:
  Template pattern_;
  Plan plain_;
  std::vector<Plan> rooted_;  // one per H-edge, endpoints preset
};

std::uint64_t hom_count(const Template& pattern, const EdgeGraph& host);
std::uint64_t rooted_hom_count(const Template& pattern, const EdgeGraph& host, EdgeId s);
/// Mixed second difference in the indicators of l and r: maps covering both
/// l and r with two distinct H-edges, all other H-edges present.
std::uint64_t rooted_pair_hom_count(const Template& pattern, const EdgeGraph& host, EdgeId l,
                                    EdgeId r);
/// Removes one edge, keeping every vertex.
Template delete_edge(const Template& pattern, std::size_t edge_index);
/// |Aut(H)| by exhaustive permutation check.
std::uint64_t aut_count(const Template& pattern);

}  // namespace ergmlab

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ergmlab {

struct IdentityOptions {
  int n = 12;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  int max_template_vertices = 5;
  int max_template_edges = 6;
  double density = 0.5;
};

struct IdentityReport {
  std::size_t trials = 0;
  std::uint64_t toggle_checks = 0;
  std::uint64_t weighted_checks = 0;
  std::uint64_t deletion_checks = 0;
  std::uint64_t isolated_checks = 0;
  std::uint64_t complete_checks = 0;
  std::uint64_t violation_count = 0;
  /// First few violations, described.
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const noexcept { return violation_count == 0; }
};

/// Exact counting identities on random graphs and random small templates:
///   hom(G + s) - hom(G - s) = rooted(G, s) for every pair s,
///   sum_s y_s rooted(G, s) = e |Hom(H, G)|,
///   sum_s rooted(G, s) = sum over H-edges of |Hom(H minus that edge, G)|,
///   |Hom(H + isolated vertex, G)| = (n - v) |Hom(H, G)| and |Hom(H, K_v)| = v!.
IdentityReport run_identity_suite(const IdentityOptions& opts);

}  // namespace ergmlab

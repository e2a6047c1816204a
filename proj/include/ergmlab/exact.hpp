#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ergmlab/graph.hpp"
#include "ergmlab/model.hpp"
#include "ergmlab/stats.hpp"

namespace ergmlab {

struct Moments {
  double mean = 0;
  double second = 0;  // E X^2
  [[nodiscard]] double variance() const { return second - mean * mean; }
};

/// The ERGM on n <= 6 vertices by full enumeration of all 2^N graphs. Graph
/// codes are the indicator vectors read as integers (bit k = canonical pair k).
class ExactMeasure {
 public:
  static constexpr int kMaxVertices = 6;

  ExactMeasure(const ErgmSpec& spec, int n);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] std::size_t pair_slots() const noexcept { return pair_count(n_); }
  [[nodiscard]] std::size_t states() const noexcept { return log_weights_.size(); }
  [[nodiscard]] const ErgmSpec& spec() const noexcept { return spec_; }

  [[nodiscard]] double log_weight(std::size_t code) const { return log_weights_[code]; }
  [[nodiscard]] double log_z() const noexcept { return log_z_; }
  [[nodiscard]] double prob(std::size_t code) const { return probs_[code]; }
  [[nodiscard]] const std::vector<double>& probs() const noexcept { return probs_; }

  /// Sum over all graphs of P(y) * fn(y).
  [[nodiscard]] double expectation(const std::function<double(const EdgeGraph&)>& fn) const;
  [[nodiscard]] double expectation_by_code(const std::function<double(std::size_t)>& fn) const;

  /// P(edge count = m), m = 0..N.
  [[nodiscard]] const std::vector<double>& edge_count_law() const noexcept { return edge_law_; }
  [[nodiscard]] const Moments& edge_moments() const noexcept { return edge_moments_; }
  /// Moments of |Hom(H_j, G)| for each model template.
  [[nodiscard]] const Moments& hom_moments(std::size_t j) const { return hom_moments_[j]; }

  [[nodiscard]] double marginal(EdgeId s) const;

 private:
  ErgmSpec spec_;
  int n_;
  std::vector<double> log_weights_;
  std::vector<double> probs_;
  double log_z_ = 0;
  std::vector<double> edge_law_;
  Moments edge_moments_;
  std::vector<Moments> hom_moments_;
};

/// P(Y_s = 1 | Y_l = v for each (l, v) in `condition`). Throws if s appears in
/// the condition or the condition lists one edge with both values.
double exact_conditional(const ExactMeasure& m, EdgeId s,
                         const std::vector<std::pair<EdgeId, bool>>& condition);

struct ExactWLaw {
  stats::DiscreteLaw law;
  double mu = 0;
  double sigma_sq = 0;
  double kolmogorov = 0;
  double wasserstein = 0;
};

/// Law of W = (edge count - mu_n) / sigma_n with the exact mean mu_n.
ExactWLaw exact_w_law(const ExactMeasure& m, double sigma_sq);

/// Total variation distance between two laws on {0..K}.
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ergmlab

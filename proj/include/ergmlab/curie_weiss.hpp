#pragma once

#include <cstdint>
#include <vector>

#include "ergmlab/stats.hpp"
#include "ergmlab/stein.hpp"

namespace ergmlab {

/// Exact law of the magnetization s = sum x_i for Rademacher spins tilted by
/// exp(beta s^2 / (2N)), 0 < beta < 1.
struct CwMeasure {
  int N = 0;
  double beta = 0;
  std::vector<int> support;   // -N, -N+2, ..., N
  std::vector<double> probs;
  double sigma_sq = 0;        // N / (1 - beta)

  [[nodiscard]] double mean_s() const;
  [[nodiscard]] double var_s() const;
};

CwMeasure build_cw(int N, double beta);

struct CwDistances {
  double kolmogorov = 0;
  double wasserstein = 0;
};

/// Law of W = s / sigma_N.
stats::DiscreteLaw cw_w_law(const CwMeasure& m);
CwDistances exact_distances(const CwMeasure& m);
/// Var(s) / sigma_N^2.
double variance_ratio(const CwMeasure& m);

/// sd of sum_i Delta_{2,i}(Y) - beta f(Y) = -beta s / (N sigma_N), exactly.
double cw_exact_delta3(const CwMeasure& m);

class CwFamily : public TiltedFamily {
 public:
  CwFamily(int N, double beta);

  [[nodiscard]] std::string name() const override { return "curie-weiss"; }
  [[nodiscard]] std::size_t dimension() const override { return static_cast<std::size_t>(m_.N); }
  double draw_coordinate(std::size_t, CounterRng& rng) const override {
    return rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  [[nodiscard]] double f(const State& x) const override;
  [[nodiscard]] double g(const State& x) const override;
  /// Inverse-CDF draw of s, then a uniformly random arrangement of the
  /// (N + s)/2 positive spins.
  void for_each_tilted(std::size_t count, std::uint64_t seed,
                       const std::function<void(std::size_t, const State&)>& visit) const override;
  [[nodiscard]] double d_star() const override { return 2 / sigma_; }
  void perturbation_diffs(const State& x, const State& xp, PerturbationDiffs& out) const override;
  [[nodiscard]] std::optional<double> delta1_closed(const State& x, std::size_t i) const override;
  [[nodiscard]] std::optional<double> delta2_closed(const State& x, std::size_t i) const override;
  [[nodiscard]] std::optional<double> sum_delta1_closed(const State& x) const override;
  [[nodiscard]] std::optional<double> sum_delta2_closed(const State& x) const override;

  [[nodiscard]] const CwMeasure& measure() const noexcept { return m_; }

 private:
  CwMeasure m_;
  std::vector<double> cdf_;
  double sigma_ = 0;
};

}  // namespace ergmlab

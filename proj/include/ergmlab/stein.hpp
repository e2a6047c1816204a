#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ergmlab/exact.hpp"
#include "ergmlab/model.hpp"
#include "ergmlab/random.hpp"
#include "ergmlab/sampler.hpp"

namespace ergmlab {

using State = std::vector<double>;

/// Differences under the one-coordinate and sequential replacements:
///   single_f[i] = f(x) - f(x^(i)),  single_g[i] = g(x) - g(x^(i)),
///   chain_f[i]  = f(x^[i]) - f(x^[i-1]),
/// where x^(i) takes coordinate i from x' and x^[i] = (x_1..x_i, x'_{i+1}..x'_N).
struct PerturbationDiffs {
  std::vector<double> single_f;
  std::vector<double> single_g;
  std::vector<double> chain_f;
};

/// Law of Y with density proportional to exp(g) against independent baseline
/// coordinates X, together with the statistic f (centered under Y).
class TiltedFamily {
 public:
  virtual ~TiltedFamily() = default;

  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual std::size_t dimension() const = 0;
  /// One draw of baseline coordinate i (used both for X_i and X'_i).
  virtual double draw_coordinate(std::size_t i, CounterRng& rng) const = 0;
  [[nodiscard]] virtual double f(const State& x) const = 0;
  [[nodiscard]] virtual double g(const State& x) const = 0;
  /// Streams `count` draws of Y.
  virtual void for_each_tilted(std::size_t count, std::uint64_t seed,
                               const std::function<void(std::size_t, const State&)>& visit) const = 0;
  /// Uniform bound D* on |f(x^[i]) - f(x^[i-1])|.
  [[nodiscard]] virtual double d_star() const = 0;

  /// Defaults to evaluating f and g on every replaced vector.
  virtual void perturbation_diffs(const State& x, const State& xp, PerturbationDiffs& out) const;
  void generic_perturbation_diffs(const State& x, const State& xp, PerturbationDiffs& out) const;

  [[nodiscard]] virtual std::optional<double> delta1_closed(const State&, std::size_t) const {
    return std::nullopt;
  }
  [[nodiscard]] virtual std::optional<double> delta2_closed(const State&, std::size_t) const {
    return std::nullopt;
  }
  /// Sums over i; default adds up the per-coordinate closed forms.
  [[nodiscard]] virtual std::optional<double> sum_delta1_closed(const State& x) const;
  [[nodiscard]] virtual std::optional<double> sum_delta2_closed(const State& x) const;

  void draw_baseline(CounterRng& rng, State& x) const;
};

/// Monte-Carlo value of Delta_{1,i}(x) from `inner` draws of X', or the
/// family's closed form when it has one and `allow_closed` is set.
double delta1_i(const TiltedFamily& fam, const State& x, std::size_t i, std::size_t inner,
                CounterRng& rng, bool allow_closed = true);
double delta2_i(const TiltedFamily& fam, const State& x, std::size_t i, std::size_t inner,
                CounterRng& rng, bool allow_closed = true);

struct Estimate {
  double value = 0;
  double se = 0;
};

struct SteinOptions {
  std::size_t outer = 20000;
  std::size_t inner = 32;
  std::size_t batches = 20;
  std::uint64_t seed = 0;
  bool use_closed_forms = true;
};

/// Per-draw sums over i, with the inner-sampling variance of each sum when it
/// was estimated by Monte Carlo (zero for closed forms).
struct DeltaSums {
  std::vector<double> sum1;
  std::vector<double> sum2;
  std::vector<double> f;
  std::vector<double> noise1;
  std::vector<double> noise2;
  bool closed = false;
};

DeltaSums collect_delta_sums(const TiltedFamily& fam, const SteinOptions& opts);

struct SteinEstimates {
  Estimate b;
  Estimate delta2;
  Estimate delta3;
  std::size_t outer = 0;
  std::size_t inner = 0;
  bool closed_forms = false;
  std::vector<std::string> warnings;
};

/// b = E sum_i Delta_{1,i}(Y), with a warning when it is within 2 se of 0.
Estimate estimate_b(const DeltaSums& d, std::size_t batches, std::vector<std::string>* warnings);
/// sd of sum_i Delta_{1,i}(Y); squared inner noise is subtracted before the root.
Estimate estimate_delta2(const DeltaSums& d, std::size_t batches);
/// sd of sum_i Delta_{2,i}(Y) - (1 - b) f(Y).
Estimate estimate_delta3(const DeltaSums& d, double b, std::size_t batches);

SteinEstimates estimate_stein(const TiltedFamily& fam, const SteinOptions& opts);

/// Magnitudes of the delta_1 and delta_1' terms, estimated from baseline
/// draws reweighted by h = e^g. Not certified bounds.
struct Delta1Diagnostics {
  Estimate cubic_f;        // sum E h (df)^2 |chain|
  Estimate tilt_remainder; // sum E h e^{|dg|} dg^2 (|dg| + |df|) |chain|
  Estimate dstar_cross;    // sum E h e^{|dg|} D* |df| |dg|
  Estimate dstar_mean;     // E h |sum_i E[D* df | X]|
  Estimate delta1;         // cubic_f + tilt_remainder
  Estimate delta1_prime;   // dstar_cross + dstar_mean + tilt_remainder
  double ess = 0;
  std::size_t draws = 0;
  std::vector<std::string> warnings;
};

inline constexpr double kMinImportanceEss = 50;

Delta1Diagnostics diagnostic_delta1(const TiltedFamily& fam, std::size_t outer, std::size_t inner,
                                    std::uint64_t seed);

/// How ErgmFamily produces draws of Y.
enum class TiltedSource { Exact, Cftp, Glauber };

/// ERGM in its tilted form: X iid Bernoulli(p), g the centered tilt and
/// f = (edge count - mu) / sigma_n.
class ErgmFamily : public TiltedFamily {
 public:
  /// `mu` defaults to the exact mean when the enumeration is available and to
  /// N p otherwise; `glauber` configures the chain when source is Glauber.
  ErgmFamily(ErgmSpec spec, int n, TiltedSource source, std::optional<double> mu = std::nullopt,
             SampleOptions glauber = {});

  /// When false, perturbation differences go through full re-evaluation of f
  /// and g instead of the rooted-count shortcut.
  void set_fast_diffs(bool on) { fast_diffs_ = on; }

  [[nodiscard]] std::string name() const override { return "ergm"; }
  [[nodiscard]] std::size_t dimension() const override { return pair_count(n_); }
  double draw_coordinate(std::size_t, CounterRng& rng) const override {
    return rng.uniform() < p_ ? 1.0 : 0.0;
  }
  [[nodiscard]] double f(const State& x) const override;
  [[nodiscard]] double g(const State& x) const override;
  void for_each_tilted(std::size_t count, std::uint64_t seed,
                       const std::function<void(std::size_t, const State&)>& visit) const override;
  [[nodiscard]] double d_star() const override { return 1 / sigma_; }
  void perturbation_diffs(const State& x, const State& xp, PerturbationDiffs& out) const override;
  [[nodiscard]] std::optional<double> delta1_closed(const State& x, std::size_t i) const override;
  [[nodiscard]] std::optional<double> delta2_closed(const State& x, std::size_t i) const override;
  [[nodiscard]] std::optional<double> sum_delta2_closed(const State& x) const override;

  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] const ErgmSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const RegionReport& region() const noexcept { return region_; }
  [[nodiscard]] const ExactMeasure* exact() const noexcept { return exact_.get(); }

  /// b as N 2p(1-p) / (2 sigma_n^2), its large-n form.
  [[nodiscard]] double asymptotic_b() const;

  [[nodiscard]] EdgeGraph to_graph(const State& x) const;
  [[nodiscard]] State to_state(const EdgeGraph& g) const;

 private:
  [[nodiscard]] double tilt_slope(const EdgeGraph& g, EdgeId s) const;

  ErgmSpec spec_;
  int n_;
  TiltedSource source_;
  RegionReport region_;
  double p_ = 0;
  double sigma_ = 0;
  double mu_ = 0;
  double edge_coef_ = 0;
  SampleOptions glauber_;
  std::shared_ptr<const ExactMeasure> exact_;
  bool fast_diffs_ = true;
};

}  // namespace ergmlab

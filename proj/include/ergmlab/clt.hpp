#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergmlab/graph.hpp"
#include "ergmlab/model.hpp"

namespace ergmlab::clt {

/// How the draws behind a report were produced.
enum class Source { Exact, Bernoulli, Glauber };
std::string to_string(Source s);

struct DistanceReport {
  int n = 0;
  std::size_t samples = 0;  // 0 for exact reports
  Source source = Source::Glauber;
  double p = 0;
  double mu_hat = 0;
  double mu_se = 0;
  double var_hat = 0;
  double sigma_sq = 0;
  double dK = 0;
  double dK_band = 0;
  double dW = 0;
  double dW_se = 0;
  /// |mu_hat / N - p| sqrt(n).
  double lln_scaled = 0;
  double ess = 0;
  /// Exact distance of the law being sampled, when it is known in closed form.
  std::optional<double> reference_dK;
  /// corr(W_H, W) over the same draws (subgraph experiments only).
  std::optional<double> corr_with_edge;
  std::vector<std::string> warnings;
  /// Standardized values in draw order, kept when requested.
  std::vector<double> values;
};

struct CltOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::uint64_t burn_in_sweeps = 0;  // 0 selects the sampler default
  std::uint64_t thin_sweeps = 1;
  std::size_t chains = 1;
  std::size_t threads = 1;
  std::size_t bootstrap = 200;
  /// Use enumeration for n <= 6 instead of sampling.
  bool exact_when_small = true;
  bool keep_values = false;
  /// ESS below this fraction of the sample count triggers a warning.
  double min_ess_fraction = 0.1;
};

/// W = (E(G) - mu_hat) / sigma_n with the closed-form sigma_n.
DistanceReport edge_clt_experiment(const ErgmSpec& spec, int n, const CltOptions& opts);

/// W_H = (|Hom(H,G)| - mean) / (2 n^{v-2} e p^{e-1} sigma_n).
DistanceReport subgraph_clt_experiment(const ErgmSpec& spec, const Template& pattern, int n,
                                       const CltOptions& opts);

struct RateRow {
  double n = 0;
  double dK = 0;
  /// Expected empirical d_K at this sample count under an exact fit; zero for exact rows.
  double noise_floor = 0;
};

struct RateReport {
  std::vector<RateRow> rows;
  double slope = 0;
  double slope_se = 0;
  double lo = 0;
  double hi = 0;
  bool exact = false;
  std::string method;
  std::vector<std::string> notes;
};

/// Log-log fit of d_K against n. Edge-only specs use the exact standardized
/// binomial; other specs sample via edge_clt_experiment. Needs four sizes.
RateReport rate_scan(const ErgmSpec& spec, const std::vector<int>& ns, const CltOptions& opts);

/// Exact Curie-Weiss d_K(W_N, Z) against N.
RateReport cw_rate_scan(double beta, const std::vector<int>& Ns);

struct LlnRow {
  int n = 0;
  double density = 0;
  double density_se = 0;
  double scaled = 0;     // |density - p| sqrt(n)
  double scaled_se = 0;  // density_se sqrt(n)
};

struct LlnReport {
  double p = 0;
  std::vector<LlnRow> rows;
  /// Largest scaled residual over the floor max(min scaled, 2 max scaled_se).
  double spread = 0;
  bool bounded = false;
  std::vector<std::string> notes;
};

/// Scaled density residuals; the verdict is bounded when spread <= 3.
LlnReport lln_check(const ErgmSpec& spec, const std::vector<int>& ns, const CltOptions& opts);

}  // namespace ergmlab::clt

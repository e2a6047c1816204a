#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ergmlab/exact.hpp"
#include "ergmlab/graph.hpp"
#include "ergmlab/model.hpp"

namespace ergmlab::decomp {

inline constexpr std::size_t kMaxOrder = 4;

/// Blocks hold positions 0..d-1 into the index set.
using Block = std::vector<std::size_t>;
using Partition = std::vector<Block>;

/// All set partitions of {0..d-1}, d <= 4 (1, 2, 5, 15 of them).
const std::vector<Partition>& set_partitions(std::size_t d);

/// Edge indices in canonical pair order, sorted ascending.
using EdgeSet = std::vector<std::size_t>;

/// p~ = E Y_l together with joint centered moments E prod_{l in J} (Y_l - p~).
class MomentContext {
 public:
  struct Entry {
    double value = 0;
    double se = 0;
  };

  MomentContext(double p_tilde, std::string source) : p_tilde_(p_tilde), source_(std::move(source)) {}

  [[nodiscard]] double p_tilde() const noexcept { return p_tilde_; }
  [[nodiscard]] const std::string& source() const noexcept { return source_; }

  void set(EdgeSet J, double value, double se = 0);
  [[nodiscard]] bool has(const EdgeSet& J) const;
  /// Throws PreconditionError naming J when absent.
  [[nodiscard]] const Entry& at(const EdgeSet& J) const;
  [[nodiscard]] const std::map<EdgeSet, Entry>& entries() const noexcept { return table_; }

 private:
  double p_tilde_;
  std::string source_;
  std::map<EdgeSet, Entry> table_;
};

/// Every J subset of I with |J| >= 2.
std::vector<EdgeSet> required_moments(const EdgeSet& I);

/// Moments for every J subset of each I in `sets`, by enumeration.
MomentContext exact_moments(const ExactMeasure& m, const std::vector<EdgeSet>& sets);

/// Sample moments with standard errors; p~ is the pooled edge density.
MomentContext sample_moments(const std::vector<EdgeGraph>& graphs,
                             const std::vector<EdgeSet>& sets);

enum class Multiplicity {
  Amended,   // M(P) 1{N(P)=0}
  Original,  // 1{N(P)=0}
};

/// Distinct edges of the host, at most four.
struct HoeffdingTerm {
  EdgeSet index;
};

/// Signed partition sum over all set partitions P of I:
///   (-1)^{M(P)} {c(P) 1{N(P)=0} + prod_{singletons}(y_l - p~) 1{N(P)>0}}
///   * prod_{|J|>1} E prod_{l in J}(Y_l - p~),
/// where N(P) counts singleton blocks, M(P) counts larger blocks and c(P) is
/// M(P) or 1 depending on `form`.
double g_I(const HoeffdingTerm& term, const MomentContext& ctx, const EdgeGraph& y,
           Multiplicity form = Multiplicity::Amended);

/// Same as g_I on a raw indicator vector indexed like the edges in I.
double g_I_values(const EdgeSet& I, const MomentContext& ctx, const std::vector<double>& y,
                  Multiplicity form = Multiplicity::Amended);

/// One term p~^{m-|S|} prod_{l in S} Y~_l of the expansion.
struct Monomial {
  EdgeSet edges;
  double coefficient = 0;
};

/// Y_{s_1}...Y_{s_m} - E[...] = sum_S p~^{m-|S|} (prod_S Y~ - E prod_S Y~) over
/// non-empty S.
struct ProductExpansion {
  EdgeSet edges;
  double p_tilde = 0;
  std::vector<Monomial> terms;
  /// p~^m, the S = empty term that centering removes.
  double constant = 0;

  /// sum_S coefficient * prod_S (y_l - p~) + constant, equal to prod y_l for
  /// any real y (values aligned with `edges`).
  [[nodiscard]] double polynomial(const std::vector<double>& y) const;
  /// The centered expansion, with E prod_S Y~ taken from ctx (zero for |S| = 1).
  [[nodiscard]] double centered(const std::vector<double>& y, const MomentContext& ctx) const;
};

/// Throws PreconditionError on repeated edges or more than four factors.
ProductExpansion expand_product(const EdgeSet& edges, double p_tilde);

struct ScanRow {
  int n = 0;
  std::size_t samples = 0;
  double mu_hat = 0;
  double sigma_sq = 0;
  double coefficient = 0;  // 2 n^{v-2} e p^{e-1}
  double raw_var = 0;
  double raw_var_se = 0;
  double residual_var = 0;
  double residual_var_se = 0;
  double residual_third_abs = 0;  // E|R - E R|^3, reported only
  double ratio = 0;               // residual_var / raw_var
};

struct Slope {
  double value = 0;
  double se = 0;
  double lo = 0;  // 95% interval
  double hi = 0;
};

struct ScanReport {
  Template pattern;
  std::vector<ScanRow> rows;
  Slope raw_slope;
  Slope residual_slope;
  double slope_gap = 0;  // raw - residual
  double p = 0;
  bool dobrushin = false;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

struct ScanOptions {
  std::size_t samples = 5000;
  std::uint64_t seed = 0;
  std::uint64_t thin_sweeps = 1;
  std::uint64_t burn_in_sweeps = 0;  // 0 selects the sampler default
  std::size_t batches = 20;
};

/// Residual R = |Hom(H,G)| - 2 n^{v-2} e p^{e-1} (E(G) - mu_hat) from Glauber
/// samples at each n, with variances fitted on a log-log scale. Requires a
/// subcritical spec and at least three sizes.
ScanReport residual_variance_scan(const ErgmSpec& spec, const Template& pattern,
                                  const std::vector<int>& ns, const ScanOptions& opts);

}  // namespace ergmlab::decomp

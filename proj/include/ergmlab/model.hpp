#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergmlab/graph.hpp"

namespace ergmlab {

/// Parameter vector with its templates. Template 0 is always the single edge.
class ErgmSpec {
 public:
  /// Throws PreconditionError if template 0 is not an edge, a template has
  /// isolated vertices, the lengths differ, or some beta_j (j >= 1) is not
  /// positive while `allow_nonpositive` is false.
  ErgmSpec(std::vector<double> betas, std::vector<Template> templates,
           bool allow_nonpositive = false);

  /// Edge-only model (Erdos-Renyi with p = e^{2b}/(1+e^{2b})).
  static ErgmSpec edge_only(double beta1);
  static ErgmSpec edge_triangle(double beta1, double beta2);
  static ErgmSpec edge_two_star(double beta1, double beta2);

  [[nodiscard]] std::size_t size() const noexcept { return betas_.size(); }
  [[nodiscard]] const std::vector<double>& betas() const noexcept { return betas_; }
  [[nodiscard]] const std::vector<Template>& templates() const noexcept { return templates_; }
  [[nodiscard]] const HomCounter& counter(std::size_t j) const { return counters_[j]; }
  [[nodiscard]] int max_template_vertices() const noexcept;
  /// All non-edge coefficients are >= 0, so Glauber updates are monotone.
  [[nodiscard]] bool monotone() const noexcept;
  [[nodiscard]] bool allows_nonpositive() const noexcept { return allow_nonpositive_; }

 private:
  std::vector<double> betas_;
  std::vector<Template> templates_;
  std::vector<HomCounter> counters_;
  bool allow_nonpositive_;
};

/// Phi(a) = sum_j beta_j e_j a^{e_j - 1}.
double big_phi(const ErgmSpec& spec, double a);
double big_phi_prime(const ErgmSpec& spec, double a);
/// phi(a) = e^{2 Phi(a)} / (e^{2 Phi(a)} + 1).
double phi(const ErgmSpec& spec, double a);
double phi_prime(const ErgmSpec& spec, double a);

enum class Region { Subcritical, SubcriticalAndDobrushin, NotSubcritical, Indeterminate };

std::string to_string(Region r);

struct FixedPoint {
  double a = 0;
  double phi_prime = 0;
  /// |2 Phi(a) - log(a / (1 - a))|.
  double identity_residual = 0;
};

struct RegionReport {
  std::vector<FixedPoint> roots;
  std::optional<double> p;  // set when classification is subcritical
  Region classification = Region::Indeterminate;
  double dobrushin_value = 0;  // Phi'(1) (absolute coefficients)
  double tol = 0;
  std::vector<std::string> notes;

  [[nodiscard]] bool subcritical() const noexcept {
    return classification == Region::Subcritical ||
           classification == Region::SubcriticalAndDobrushin;
  }
  [[nodiscard]] bool dobrushin() const noexcept {
    return classification == Region::SubcriticalAndDobrushin;
  }
  /// Selected root; throws PreconditionError unless subcritical.
  [[nodiscard]] double require_p() const;
};

inline constexpr int kRootGridPoints = 10000;
inline constexpr double kRootMergeDistance = 1e-8;
inline constexpr double kSubcriticalMargin = 1e-9;
/// Roots with |phi' - 1| below this are numerically tangent: bisection on a
/// double-root splits it into a close pair, so such roots make the report
/// Indeterminate.
inline constexpr double kDegenerateSlope = 1e-6;

/// Locates every root of phi(a) = a in (0,1) by a sign-change scan on a
/// uniform grid refined by bisection, then classifies the parameter region.
RegionReport solve_fixed_point(const ErgmSpec& spec, double tol = 1e-12);

/// Closed-form asymptotic variance N p(1-p) / (1 - sum_{j>=1} beta_j e_j(e_j-1) 2 p^{e_j-1}(1-p)).
double sigma_n_sq(const ErgmSpec& spec, const RegionReport& report, int n);

/// Sum_j beta_j n^{2-v_j} |Hom(H_j, G)|, the unnormalized log-probability.
double log_weight(const ErgmSpec& spec, const EdgeGraph& g);

/// Sum_j beta_j n^{2-v_j} |Hom(H_j, G, s)| = log_weight(G + s) - log_weight(G - s).
double cond_log_odds(const ErgmSpec& spec, const EdgeGraph& g, EdgeId s);

/// Centered tilt g(y) = sum_j [beta_j n^{2-v_j} |Hom(H_j,G)| - 2 beta_j e_j p^{e_j-1} E(G)].
double centered_tilt_g(const ErgmSpec& spec, const RegionReport& report, const EdgeGraph& g);

/// The edge-count coefficient removed by the centered tilt, 2 sum_j beta_j e_j p^{e_j-1}.
double tilt_edge_coefficient(const ErgmSpec& spec, double p);

/// n^{k} for small integer k (possibly negative).
double int_pow(double base, int exponent);

}  // namespace ergmlab

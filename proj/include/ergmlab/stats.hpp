#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ergmlab::stats {

double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

/// Finite law on the real line; support sorted ascending, probabilities sum to one.
struct DiscreteLaw {
  std::vector<double> support;
  std::vector<double> probs;
};

/// sup_x |F(x) - Phi(x)|, evaluated exactly at every jump (both one-sided limits).
double kolmogorov_to_normal(const DiscreteLaw& law);
/// Integral of |F(x) - Phi(x)| over the line, computed piecewise in closed form.
double wasserstein_to_normal(const DiscreteLaw& law);

/// Law of (K - N p) / sqrt(N p (1 - p)) for K ~ Binomial(N, p).
DiscreteLaw standardized_binomial(std::size_t trials, double p);

/// Empirical-CDF Kolmogorov distance to N(0,1); ties are grouped.
double empirical_kolmogorov(std::span<const double> sorted);
/// L1 distance between empirical quantiles and normal quantiles at (i - 1/2)/m.
double empirical_wasserstein(std::span<const double> sorted);
/// DKW half-width sqrt(log(2/alpha) / (2 m)).
double dkw_band(std::size_t samples, double alpha = 0.05);

struct MeanSe {
  double mean = 0;
  double se = 0;
};

double mean(std::span<const double> xs);
/// Unbiased sample variance.
double variance(std::span<const double> xs);
/// Mean with a batch-means standard error (contiguous batches).
MeanSe batch_mean(std::span<const double> xs, std::size_t batches = 20);
/// Effective sample size via Geyer's initial positive sequence.
double effective_sample_size(std::span<const double> xs);
double correlation(std::span<const double> a, std::span<const double> b);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
};

/// Least squares y = a + b x. With `y_se` given, weights are 1/se^2 and the
/// slope error is propagated from them; otherwise it comes from residuals.
LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> y_se = {});

}  // namespace ergmlab::stats

#include "ergmlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "ergmlab/errors.hpp"

namespace ergmlab::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }

double normal_quantile(double p) {
  if (!(p > 0 && p < 1)) throw PreconditionError("normal quantile needs p in (0,1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2 * p);
}

double kolmogorov_to_normal(const DiscreteLaw& law) {
  double below = 0;
  double worst = 0;
  for (std::size_t k = 0; k < law.support.size(); ++k) {
    const double cdf = normal_cdf(law.support[k]);
    const double above = below + law.probs[k];
    worst = std::max({worst, std::abs(below - cdf), std::abs(std::min(above, 1.0) - cdf)});
    below = above;
  }
  return worst;
}

namespace {

// Antiderivative of Phi.
double phi_integral(double x) { return x * normal_cdf(x) + normal_pdf(x); }

// Integral of |c - Phi(x)| over [a, b].
double gap_area(double c, double a, double b) {
  const double fa = normal_cdf(a);
  const double fb = normal_cdf(b);
  const double area_phi = phi_integral(b) - phi_integral(a);
  if (c <= fa) return area_phi - c * (b - a);
  if (c >= fb) return c * (b - a) - area_phi;
  const double x = normal_quantile(c);
  return c * (x - a) - (phi_integral(x) - phi_integral(a)) + (phi_integral(b) - phi_integral(x)) -
         c * (b - x);
}

}  // namespace

double wasserstein_to_normal(const DiscreteLaw& law) {
  if (law.support.empty()) throw PreconditionError("empty law");
  const double first = law.support.front();
  const double last = law.support.back();
  // Left tail: F = 0, area is the integral of Phi; right tail symmetric.
  double total = phi_integral(first) + (normal_pdf(last) - last * normal_cdf(-last));
  double cum = 0;
  for (std::size_t k = 0; k + 1 < law.support.size(); ++k) {
    cum += law.probs[k];
    total += gap_area(std::min(cum, 1.0), law.support[k], law.support[k + 1]);
  }
  return total;
}

DiscreteLaw standardized_binomial(std::size_t trials, double p) {
  if (!(p > 0 && p < 1)) throw PreconditionError("standardized binomial needs p in (0,1)");
  const double n = static_cast<double>(trials);
  const double mu = n * p;
  const double sd = std::sqrt(n * p * (1 - p));
  DiscreteLaw law;
  law.support.reserve(trials + 1);
  law.probs.reserve(trials + 1);
  for (std::size_t k = 0; k <= trials; ++k) {
    const double kk = static_cast<double>(k);
    const double logp = std::lgamma(n + 1) - std::lgamma(kk + 1) - std::lgamma(n - kk + 1) +
                        kk * std::log(p) + (n - kk) * std::log1p(-p);
    law.support.push_back((kk - mu) / sd);
    law.probs.push_back(std::exp(logp));
  }
  return law;
}

double empirical_kolmogorov(std::span<const double> sorted) {
  const auto m = static_cast<double>(sorted.size());
  double worst = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double cdf = normal_cdf(sorted[i]);
    worst = std::max({worst, std::abs(static_cast<double>(i) / m - cdf),
                      std::abs(static_cast<double>(j) / m - cdf)});
    i = j;
  }
  return worst;
}

double empirical_wasserstein(std::span<const double> sorted) {
  const auto m = static_cast<double>(sorted.size());
  double total = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    total += std::abs(sorted[i] - normal_quantile((static_cast<double>(i) + 0.5) / m));
  }
  return total / m;
}

double dkw_band(std::size_t samples, double alpha) {
  return std::sqrt(std::log(2 / alpha) / (2 * static_cast<double>(samples)));
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0;
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0;
  const double mu = mean(xs);
  double s = 0;
  for (double x : xs) s += (x - mu) * (x - mu);
  return s / static_cast<double>(xs.size() - 1);
}

MeanSe batch_mean(std::span<const double> xs, std::size_t batches) {
  MeanSe r;
  r.mean = mean(xs);
  batches = std::min(batches, xs.size());
  if (batches < 2) return r;
  const std::size_t per = xs.size() / batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < batches; ++b) {
    means.push_back(mean(xs.subspan(b * per, per)));
  }
  r.se = std::sqrt(variance(means) / static_cast<double>(batches));
  return r;
}

double effective_sample_size(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 4) return static_cast<double>(n);
  const double mu = mean(xs);
  auto autocov = [&](std::size_t lag) {
    double s = 0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (xs[t] - mu) * (xs[t + lag] - mu);
    return s / static_cast<double>(n);
  };
  const double g0 = autocov(0);
  if (g0 <= 0) return static_cast<double>(n);
  double sum_pairs = 0;
  for (std::size_t m = 0; 2 * m + 1 < n / 2; ++m) {
    const double pair = autocov(2 * m) + autocov(2 * m + 1);
    if (pair <= 0) break;
    sum_pairs += pair;
  }
  const double tau = std::max((-g0 + 2 * sum_pairs) / g0, 1.0 / static_cast<double>(n));
  return std::min(static_cast<double>(n) / tau, static_cast<double>(n));
}

double correlation(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0;
  double saa = 0;
  double sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> y_se) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw PreconditionError("line fit needs >= 2 matched points");
  const bool weighted = !y_se.empty();
  double sw = 0;
  double sx = 0;
  double sy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double w = weighted ? 1 / (y_se[k] * y_se[k]) : 1.0;
    sw += w;
    sx += w * x[k];
    sy += w * y[k];
  }
  const double xm = sx / sw;
  const double ym = sy / sw;
  double sxx = 0;
  double sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double w = weighted ? 1 / (y_se[k] * y_se[k]) : 1.0;
    sxx += w * (x[k] - xm) * (x[k] - xm);
    sxy += w * (x[k] - xm) * (y[k] - ym);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  if (weighted) {
    fit.slope_se = std::sqrt(1 / sxx);
  } else if (m > 2) {
    double rss = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double r = y[k] - fit.intercept - fit.slope * x[k];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  }
  return fit;
}

}  // namespace ergmlab::stats

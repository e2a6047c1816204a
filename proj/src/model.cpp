#include "ergmlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ergmlab/errors.hpp"

namespace ergmlab {

ErgmSpec::ErgmSpec(std::vector<double> betas, std::vector<Template> templates,
                   bool allow_nonpositive)
    : betas_(std::move(betas)), templates_(std::move(templates)),
      allow_nonpositive_(allow_nonpositive) {
  if (betas_.empty() || betas_.size() != templates_.size()) {
    throw PreconditionError("spec needs one beta per template and at least the edge term");
  }
  const auto& first = templates_.front();
  if (first.vertices() != 2 || first.edge_count() != 1) {
    throw PreconditionError("the first template must be the single edge");
  }
  for (std::size_t j = 0; j < templates_.size(); ++j) {
    if (templates_[j].has_isolated_vertices()) {
      throw PreconditionError("model template " + std::to_string(j + 1) +
                              " has isolated vertices");
    }
    if (j > 0 && templates_[j].edge_count() < 2) {
      throw PreconditionError("templates after the first need at least two edges");
    }
    if (!std::isfinite(betas_[j])) throw PreconditionError("non-finite beta");
    if (j > 0 && betas_[j] <= 0 && !allow_nonpositive_) {
      throw PreconditionError("beta_" + std::to_string(j + 1) +
                              " must be positive (set allow_nonpositive to override)");
    }
  }
  counters_.reserve(templates_.size());
  for (const auto& t : templates_) counters_.emplace_back(t);
}

ErgmSpec ErgmSpec::edge_only(double beta1) { return ErgmSpec({beta1}, {Template::edge()}); }

ErgmSpec ErgmSpec::edge_triangle(double beta1, double beta2) {
  return ErgmSpec({beta1, beta2}, {Template::edge(), Template::triangle()});
}

ErgmSpec ErgmSpec::edge_two_star(double beta1, double beta2) {
  return ErgmSpec({beta1, beta2}, {Template::edge(), Template::two_star()});
}

int ErgmSpec::max_template_vertices() const noexcept {
  int v = 0;
  for (const auto& t : templates_) v = std::max(v, t.vertices());
  return v;
}

bool ErgmSpec::monotone() const noexcept {
  return std::all_of(betas_.begin() + 1, betas_.end(), [](double b) { return b >= 0; });
}

double int_pow(double base, int exponent) {
  double r = 1;
  const bool invert = exponent < 0;
  for (int k = std::abs(exponent); k > 0; --k) r *= base;
  return invert ? 1 / r : r;
}

double big_phi(const ErgmSpec& spec, double a) {
  double s = 0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const int e = spec.templates()[j].edge_count();
    s += spec.betas()[j] * e * int_pow(a, e - 1);
  }
  return s;
}

double big_phi_prime(const ErgmSpec& spec, double a) {
  double s = 0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const int e = spec.templates()[j].edge_count();
    if (e >= 2) s += spec.betas()[j] * e * (e - 1) * int_pow(a, e - 2);
  }
  return s;
}

namespace {
double logistic(double u) {
  return u >= 0 ? 1 / (1 + std::exp(-u)) : std::exp(u) / (1 + std::exp(u));
}
}  // namespace

double phi(const ErgmSpec& spec, double a) { return logistic(2 * big_phi(spec, a)); }

double phi_prime(const ErgmSpec& spec, double a) {
  const double q = phi(spec, a);
  return 2 * big_phi_prime(spec, a) * q * (1 - q);
}

std::string to_string(Region r) {
  switch (r) {
    case Region::Subcritical: return "Subcritical";
    case Region::SubcriticalAndDobrushin: return "SubcriticalAndDobrushin";
    case Region::NotSubcritical: return "NotSubcritical";
    case Region::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

double RegionReport::require_p() const {
  if (!subcritical() || !p) {
    throw PreconditionError("parameters are not in the subcritical region (classification " +
                            to_string(classification) + ")");
  }
  return *p;
}

namespace {

double bisect(const ErgmSpec& spec, double lo, double hi) {
  auto F = [&](double a) { return phi(spec, a) - a; };
  double flo = F(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = F(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimisation of |F| on [lo, hi]; returns the smallest |F|
// seen and whether F changed sign relative to `sign` anywhere on the way.
std::pair<double, bool> min_abs_gap(const ErgmSpec& spec, double lo, double hi, bool positive) {
  auto F = [&](double a) { return phi(spec, a) - a; };
  const double ratio = 0.5 * (std::sqrt(5.0) - 1);
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = F(c);
  double fd = F(d);
  double best = std::min(std::abs(fc), std::abs(fd));
  bool crossed = (fc > 0) != positive || (fd > 0) != positive;
  for (int it = 0; it < 100 && !crossed; ++it) {
    if (std::abs(fc) < std::abs(fd)) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = F(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = F(d);
    }
    best = std::min({best, std::abs(fc), std::abs(fd)});
    crossed = (fc > 0) != positive || (fd > 0) != positive;
  }
  return {best, crossed};
}

}  // namespace

RegionReport solve_fixed_point(const ErgmSpec& spec, double tol) {
  if (!(tol > 0)) throw PreconditionError("tolerance must be positive");
  RegionReport report;
  report.tol = tol;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const int e = spec.templates()[j].edge_count();
    report.dobrushin_value += std::abs(spec.betas()[j]) * e * (e - 1);
  }

  auto F = [&](double a) { return phi(spec, a) - a; };
  const int M = kRootGridPoints;
  std::vector<double> grid(static_cast<std::size_t>(M) + 1);
  std::vector<double> values(grid.size());
  for (int k = 0; k <= M; ++k) {
    grid[static_cast<std::size_t>(k)] = static_cast<double>(k) / M;
    values[static_cast<std::size_t>(k)] = F(grid[static_cast<std::size_t>(k)]);
  }

  std::vector<double> raw_roots;
  bool tangency = false;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double f0 = values[k];
    const double f1 = values[k + 1];
    if (f0 == 0 && k > 0) {
      raw_roots.push_back(grid[k]);
    } else if (f0 != 0 && f1 != 0 && (f0 > 0) != (f1 > 0)) {
      raw_roots.push_back(bisect(spec, grid[k], grid[k + 1]));
    }
  }
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double f = values[k];
    const bool same_sign =
        (values[k - 1] > 0) == (f > 0) && (values[k + 1] > 0) == (f > 0) && f != 0;
    if (!same_sign) continue;
    if (std::abs(f) > std::abs(values[k - 1]) || std::abs(f) > std::abs(values[k + 1])) continue;
    auto [gap, crossed] = min_abs_gap(spec, grid[k - 1], grid[k + 1], f > 0);
    if (gap < tol || crossed) {
      tangency = true;
      report.notes.push_back("near-tangency of phi(a) and a around a=" +
                             std::to_string(grid[k]));
    }
  }

  std::sort(raw_roots.begin(), raw_roots.end());
  std::vector<double> merged;
  for (double r : raw_roots) {
    if (!merged.empty() && r - merged.back() < kRootMergeDistance) continue;
    merged.push_back(r);
  }

  bool identity_ok = true;
  for (double a : merged) {
    FixedPoint fp;
    fp.a = a;
    fp.phi_prime = phi_prime(spec, a);
    fp.identity_residual = std::abs(2 * big_phi(spec, a) - std::log(a / (1 - a)));
    if (!(fp.identity_residual < 10 * tol)) {
      identity_ok = false;
      report.notes.push_back("fixed-point identity residual " +
                             std::to_string(fp.identity_residual) + " at a=" + std::to_string(a));
    }
    if (std::abs(fp.phi_prime - 1) < kDegenerateSlope) {
      tangency = true;
      report.notes.push_back("root at a=" + std::to_string(a) + " has phi' within " +
                             std::to_string(kDegenerateSlope) + " of 1");
    }
    report.roots.push_back(fp);
  }

  if (tangency || !identity_ok || report.roots.empty()) {
    report.classification = Region::Indeterminate;
  } else if (report.roots.size() > 1) {
    report.classification = Region::NotSubcritical;
  } else {
    const auto& root = report.roots.front();
    if (root.phi_prime < 1 - kSubcriticalMargin) {
      report.p = root.a;
      report.classification = report.dobrushin_value < 2 ? Region::SubcriticalAndDobrushin
                                                          : Region::Subcritical;
    } else if (root.phi_prime <= 1 + kSubcriticalMargin) {
      report.classification = Region::Indeterminate;
      report.notes.push_back("unique root sits on the boundary phi'(p) = 1");
    } else {
      report.classification = Region::NotSubcritical;
    }
  }
  return report;
}

double sigma_n_sq(const ErgmSpec& spec, const RegionReport& report, int n) {
  const double p = report.require_p();
  double s = 0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const int e = spec.templates()[j].edge_count();
    s += spec.betas()[j] * e * (e - 1) * 2 * int_pow(p, e - 1) * (1 - p);
  }
  const double denom = 1 - s;
  const double other = 1 - phi_prime(spec, p);
  if (std::abs(denom - other) > 1e-10 * std::max(std::abs(denom), std::abs(other))) {
    throw std::logic_error("variance denominator disagrees with 1 - phi'(p)");
  }
  return static_cast<double>(pair_count(n)) * p * (1 - p) / denom;
}

double log_weight(const ErgmSpec& spec, const EdgeGraph& g) {
  const double n = g.n();
  double t = 0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    t += spec.betas()[j] * int_pow(n, 2 - spec.templates()[j].vertices()) *
         static_cast<double>(spec.counter(j).count(g));
  }
  return t;
}

double cond_log_odds(const ErgmSpec& spec, const EdgeGraph& g, EdgeId s) {
  const double n = g.n();
  double t = 0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    t += spec.betas()[j] * int_pow(n, 2 - spec.templates()[j].vertices()) *
         static_cast<double>(spec.counter(j).rooted(g, s));
  }
  return t;
}

double tilt_edge_coefficient(const ErgmSpec& spec, double p) {
  double c = 0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const int e = spec.templates()[j].edge_count();
    c += 2 * spec.betas()[j] * e * int_pow(p, e - 1);
  }
  return c;
}

double centered_tilt_g(const ErgmSpec& spec, const RegionReport& report, const EdgeGraph& g) {
  const double p = report.require_p();
  const double n = g.n();
  const auto edges = static_cast<double>(g.edge_count());
  double total = 0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const int e = spec.templates()[j].edge_count();
    const double beta = spec.betas()[j];
    total += beta * int_pow(n, 2 - spec.templates()[j].vertices()) *
                 static_cast<double>(spec.counter(j).count(g)) -
             2 * beta * e * int_pow(p, e - 1) * edges;
  }
  return total;
}

}  // namespace ergmlab

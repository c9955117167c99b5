#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

namespace monofn {

enum class Family { normal, gamma, uniform };

std::string_view family_name(Family family);
Family parse_family(std::string_view name);

struct GammaParams {
  double shape;
  double rate;

  double scale() const { return 1.0 / rate; }
};

// A fully specified law for the unobserved input Z. Immutable once built.
//
//   normal(mean, sd)     support (-inf, inf)
//   gamma(shape, rate)   support (0, inf), density rate^shape x^(shape-1) e^(-rate x) / Gamma(shape)
//   uniform(lo, hi)      support (lo, hi)
class KnownDistribution {
 public:
  static KnownDistribution normal(double mean, double sd);
  static KnownDistribution gamma(double shape, double rate);
  static KnownDistribution gamma(GammaParams params) { return gamma(params.shape, params.rate); }
  static KnownDistribution uniform(double lo, double hi);

  Family family() const { return family_; }
  std::span<const double, 2> params() const { return params_; }

  // Open support (a, b); infinite ends are +-infinity.
  double lower() const;
  double upper() const;
  bool inside_support(double x) const { return x > lower() && x < upper(); }

  double mean() const;
  double stddev() const;

  std::string describe() const;

 private:
  KnownDistribution(Family family, double p0, double p1) : family_(family), params_{p0, p1} {}

  Family family_;
  std::array<double, 2> params_;
};

// F_Z(x). 0 at or below the lower support end, 1 at or above the upper.
double cdf(const KnownDistribution& dist, double x);

// Survival 1 - F_Z(x), computed without cancellation in the upper tail.
double survival(const KnownDistribution& dist, double x);

// f_Z(x); zero outside the open support.
double pdf(const KnownDistribution& dist, double x);

// f_Z'(x). Throws DomainError outside the open support.
double pdf_derivative(const KnownDistribution& dist, double x);

// inf{x | F_Z(x) >= p} for p in (0, 1).
double quantile(const KnownDistribution& dist, double p);

// Maximum-likelihood gamma fit: method-of-moments start, Newton iteration
// on the profile likelihood in the shape, rate = shape / mean.
GammaParams fit_gamma_mle(std::span<const double> data);

// Gradient of the per-observation gamma log-likelihood in (shape, rate).
std::array<double, 2> gamma_loglik_gradient(std::span<const double> data, GammaParams params);

// MLE of the given family's parameters.
KnownDistribution fit_family(Family family, std::span<const double> data);

}  // namespace monofn

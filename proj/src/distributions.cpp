#include "monofn/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "monofn/errors.hpp"
#include "monofn/special.hpp"

namespace monofn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double x, const char* op) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(op) + ": argument must be finite");
  }
}

double gamma_log_pdf(double shape, double rate, double x) {
  return shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape);
}

// Family-specific starting point for the inversion.
double initial_quantile_guess(const KnownDistribution& dist, double p) {
  const auto prm = dist.params();
  switch (dist.family()) {
    case Family::normal:
      return prm[0] + prm[1] * special::normal_quantile(p);
    case Family::gamma: {
      const double shape = prm[0];
      const double rate = prm[1];
      const double z = special::normal_quantile(p);
      const double t = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * std::sqrt(shape));
      double x = shape * t * t * t / rate;
      if (!(x > 0.0) || shape < 1.0) {
        // Small-x expansion P(a, x) ~ x^a / Gamma(a + 1).
        const double small = std::exp((std::log(p) + std::lgamma(shape + 1.0)) / shape) / rate;
        if (!(x > 0.0) || small < x) x = small;
      }
      return x;
    }
    case Family::uniform:
      return prm[0] + p * (prm[1] - prm[0]);
  }
  return 0.0;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::normal:
      return "normal";
    case Family::gamma:
      return "gamma";
    case Family::uniform:
      return "uniform";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "normal") return Family::normal;
  if (name == "gamma") return Family::gamma;
  if (name == "uniform") return Family::uniform;
  throw ConfigError("unknown distribution family '" + std::string(name) +
                    "' (expected normal, gamma, uniform)");
}

KnownDistribution KnownDistribution::normal(double mean, double sd) {
  if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd)) {
    throw DomainError("normal: requires finite mean and sd > 0");
  }
  return {Family::normal, mean, sd};
}

KnownDistribution KnownDistribution::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw DomainError("gamma: requires shape > 0 and rate > 0");
  }
  return {Family::gamma, shape, rate};
}

KnownDistribution KnownDistribution::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("uniform: requires finite lo < hi");
  }
  return {Family::uniform, lo, hi};
}

double KnownDistribution::lower() const {
  switch (family_) {
    case Family::normal:
      return -kInf;
    case Family::gamma:
      return 0.0;
    case Family::uniform:
      return params_[0];
  }
  return -kInf;
}

double KnownDistribution::upper() const {
  return family_ == Family::uniform ? params_[1] : kInf;
}

double KnownDistribution::mean() const {
  switch (family_) {
    case Family::normal:
      return params_[0];
    case Family::gamma:
      return params_[0] / params_[1];
    case Family::uniform:
      return 0.5 * (params_[0] + params_[1]);
  }
  return 0.0;
}

double KnownDistribution::stddev() const {
  switch (family_) {
    case Family::normal:
      return params_[1];
    case Family::gamma:
      return std::sqrt(params_[0]) / params_[1];
    case Family::uniform:
      return (params_[1] - params_[0]) / std::sqrt(12.0);
  }
  return 0.0;
}

std::string KnownDistribution::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << family_name(family_) << ':' << params_[0] << ',';
  if (family_ == Family::gamma) os << "rate=";
  os << params_[1];
  return os.str();
}

double cdf(const KnownDistribution& dist, double x) {
  require_finite(x, "cdf");
  const auto prm = dist.params();
  switch (dist.family()) {
    case Family::normal:
      return special::normal_cdf((x - prm[0]) / prm[1]);
    case Family::gamma:
      return x <= 0.0 ? 0.0 : special::gamma_p(prm[0], prm[1] * x);
    case Family::uniform:
      if (x <= prm[0]) return 0.0;
      if (x >= prm[1]) return 1.0;
      return (x - prm[0]) / (prm[1] - prm[0]);
  }
  return 0.0;
}

double survival(const KnownDistribution& dist, double x) {
  require_finite(x, "survival");
  const auto prm = dist.params();
  switch (dist.family()) {
    case Family::normal:
      return special::normal_cdf(-(x - prm[0]) / prm[1]);
    case Family::gamma:
      return x <= 0.0 ? 1.0 : special::gamma_q(prm[0], prm[1] * x);
    case Family::uniform:
      return 1.0 - cdf(dist, x);
  }
  return 0.0;
}

double pdf(const KnownDistribution& dist, double x) {
  const auto prm = dist.params();
  if (dist.family() == Family::uniform) {
    return (x >= prm[0] && x <= prm[1]) ? 1.0 / (prm[1] - prm[0]) : 0.0;
  }
  if (!dist.inside_support(x)) return 0.0;
  switch (dist.family()) {
    case Family::normal:
      return special::normal_pdf((x - prm[0]) / prm[1]) / prm[1];
    case Family::gamma:
      return std::exp(gamma_log_pdf(prm[0], prm[1], x));
    case Family::uniform:
      break;
  }
  return 0.0;
}

double pdf_derivative(const KnownDistribution& dist, double x) {
  if (!dist.inside_support(x)) {
    throw DomainError("pdf_derivative: x outside the open support");
  }
  const auto prm = dist.params();
  switch (dist.family()) {
    case Family::normal: {
      const double z = (x - prm[0]) / prm[1];
      return -z / prm[1] * pdf(dist, x);
    }
    case Family::gamma:
      return pdf(dist, x) * ((prm[0] - 1.0) / x - prm[1]);
    case Family::uniform:
      return 0.0;
  }
  return 0.0;
}

double quantile(const KnownDistribution& dist, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: p must lie in (0, 1)");
  }
  if (dist.family() == Family::uniform) {
    const auto prm = dist.params();
    return prm[0] + p * (prm[1] - prm[0]);
  }

  // Safeguarded Newton inside a bracket of mean +- 12 sd, clipped to the
  // support and widened if an extreme p falls outside it.
  const double scale = dist.stddev();
  double lo = std::max(dist.lower(), dist.mean() - 12.0 * scale);
  double hi = dist.mean() + 12.0 * scale;
  const bool upper_tail = p > 0.5;
  // Signed residual F(x) - p, from the tail that keeps precision.
  auto residual = [&](double x) {
    return upper_tail ? (1.0 - p) - survival(dist, x) : cdf(dist, x) - p;
  };
  while (residual(hi) < 0.0) {
    lo = hi;
    hi += 12.0 * scale;
  }
  while (lo > dist.lower() && residual(lo) >= 0.0) {
    hi = lo;
    lo = std::max(dist.lower(), lo - 12.0 * scale);
  }

  double x = std::clamp(initial_quantile_guess(dist, p), lo, hi);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = residual(x);
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density = pdf(dist, x);
    double next = density > 0.0 ? x - f / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), scale * 1e-3) ||
        hi - lo <= std::numeric_limits<double>::epsilon() * std::abs(x)) {
      return x;
    }
  }
  throw ConvergenceError("quantile: inversion did not converge", x);
}

std::array<double, 2> gamma_loglik_gradient(std::span<const double> data, GammaParams params) {
  const double n = static_cast<double>(data.size());
  double sum = 0.0;
  double sum_log = 0.0;
  for (double v : data) {
    sum += v;
    sum_log += std::log(v);
  }
  return {std::log(params.rate) - special::digamma(params.shape) + sum_log / n,
          params.shape / params.rate - sum / n};
}

GammaParams fit_gamma_mle(std::span<const double> data) {
  if (data.size() < 2) {
    throw DomainError("fit_gamma_mle: need at least two observations");
  }
  const double n = static_cast<double>(data.size());
  double sum = 0.0;
  double sum_log = 0.0;
  for (double v : data) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("fit_gamma_mle: all observations must be positive and finite");
    }
    sum += v;
    sum_log += std::log(v);
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : data) ss += (v - mean) * (v - mean);
  const double variance = ss / n;
  // log(mean) - mean(log x) is >= 0 with equality iff the data are constant.
  const double s = std::log(mean) - sum_log / n;
  if (!(variance > 1e-14 * mean * mean) || !(s > 0.0)) {
    throw ConvergenceError("fit_gamma_mle: data has (near) zero spread; shape diverges",
                           variance > 0.0 ? mean * mean / variance : std::numeric_limits<double>::infinity());
  }

  double shape = mean * mean / variance;
  for (int iter = 0; iter < 200; ++iter) {
    // Solve log(shape) - digamma(shape) = s.
    const double f = std::log(shape) - special::digamma(shape) - s;
    const double df = 1.0 / shape - special::trigamma(shape);
    double next = shape - f / df;
    if (!(next > 0.0)) next = 0.5 * shape;
    const double step = std::abs(next - shape);
    shape = next;
    if (step <= 1e-12 * shape) {
      return {shape, shape / mean};
    }
  }
  throw ConvergenceError("fit_gamma_mle: Newton iteration did not converge in 200 steps", shape);
}

KnownDistribution fit_family(Family family, std::span<const double> data) {
  if (data.size() < 2) {
    throw DomainError("fit_family: need at least two observations");
  }
  switch (family) {
    case Family::gamma:
      return KnownDistribution::gamma(fit_gamma_mle(data));
    case Family::normal: {
      const double n = static_cast<double>(data.size());
      const double mean = std::accumulate(data.begin(), data.end(), 0.0) / n;
      double ss = 0.0;
      for (double v : data) ss += (v - mean) * (v - mean);
      if (!(ss > 0.0)) {
        throw ConvergenceError("fit_family: normal fit of constant data", 0.0);
      }
      return KnownDistribution::normal(mean, std::sqrt(ss / n));
    }
    case Family::uniform: {
      const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
      if (!(*lo < *hi)) {
        throw ConvergenceError("fit_family: uniform fit of constant data", *lo);
      }
      return KnownDistribution::uniform(*lo, *hi);
    }
  }
  throw ConfigError("fit_family: unsupported family");
}

}  // namespace monofn

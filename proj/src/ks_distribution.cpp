#include "monofn/ks_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "monofn/errors.hpp"

namespace monofn {

namespace {

constexpr double kTermTol = 1e-14;
constexpr double kSwitch = 1.0;

double theta_cdf(double c) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double m = 2.0 * k - 1.0;
    const double term = std::exp(-m * m * pi2 / (8.0 * c * c));
    sum += term;
    if (term < kTermTol) break;
  }
  return std::sqrt(2.0 * std::numbers::pi) / c * sum;
}

double theta_cdf_derivative(double c) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double m = 2.0 * k - 1.0;
    const double e = std::exp(-m * m * pi2 / (8.0 * c * c));
    const double term = e * (m * m * pi2 / (4.0 * c * c * c * c) - 1.0 / (c * c));
    sum += term;
    if (e < kTermTol) break;
  }
  return std::sqrt(2.0 * std::numbers::pi) * sum;
}

}  // namespace

double ks_sup_tail(double c) {
  if (!(c > 0.0)) {
    throw DomainError("ks_sup_tail: c must be positive");
  }
  if (c < kSwitch) {
    return std::clamp(1.0 - theta_cdf(c), 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * c * c);
    sum += (k % 2 == 1) ? term : -term;
    if (term < kTermTol) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_sup_tail_derivative(double c) {
  if (!(c > 0.0)) {
    throw DomainError("ks_sup_tail_derivative: c must be positive");
  }
  if (c < kSwitch) return -theta_cdf_derivative(c);
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double e = std::exp(-2.0 * k * k * c * c);
    const double term = -4.0 * k * k * c * e;
    sum += (k % 2 == 1) ? term : -term;
    if (e < kTermTol) break;
  }
  return 2.0 * sum;
}

double ks_sup_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("ks_sup_quantile: p must lie in (0, 1)");
  }
  const double target = 1.0 - p;
  double lo = 1e-6;
  double hi = 10.0;
  // tail is strictly decreasing: tail(lo) ~ 1 > target > tail(hi) ~ 0.
  for (int iter = 0; iter < 60 && hi - lo > 1e-9; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (ks_sup_tail(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double c = 0.5 * (lo + hi);
  for (int iter = 0; iter < 20; ++iter) {
    const double slope = ks_sup_tail_derivative(c);
    if (slope == 0.0) break;
    const double next = c - (ks_sup_tail(c) - target) / slope;
    if (!(next > lo && next < hi)) break;
    const double step = std::abs(next - c);
    c = next;
    if (step < 1e-15 * c) break;
  }
  return c;
}

}  // namespace monofn

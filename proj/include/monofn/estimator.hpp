#pragma once

#include <span>
#include <vector>

#include "monofn/distributions.hpp"
#include "monofn/empirical.hpp"

namespace monofn {

// Throws DomainError naming x unless it lies strictly inside the support.
void require_inside_support(const KnownDistribution& dist, double x, const char* op);

// Plug-in estimate g_hat(x) = sample quantile of Y at level F_Z(x).
double estimate_at(const Sample& y, const KnownDistribution& z, double x);
std::vector<double> estimate(const Sample& y, const KnownDistribution& z, std::span<const double> xs);

// Pointwise interval (Y quantile at c1, Y quantile at c2) with
//   c1,2 = F_Z(x) -+ zeta(1 - alpha/2) sqrt(F_Z(x)(1 - F_Z(x)) / n).
// c1 is raised to 1/n and c2 lowered to 1 when they leave the unit interval.
struct PointwiseInterval {
  double lo = 0.0;
  double hi = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  bool clamped_lo = false;
  bool clamped_hi = false;
};

PointwiseInterval pointwise_ci(const Sample& y, const KnownDistribution& z, double x, double alpha);

struct EstimateResult {
  std::vector<double> xs;
  std::vector<double> ghat;
  std::vector<double> ci_lo;
  std::vector<double> ci_hi;
  std::vector<bool> clamped;
  double level = 0.0;
  std::size_t n = 0;
};

EstimateResult estimate_with_ci(const Sample& y, const KnownDistribution& z, std::span<const double> xs,
                                double alpha);

// Equispaced x = quantile(z, u) for u on [u_lo, u_hi]; used for default grids.
std::vector<double> probability_grid(const KnownDistribution& z, double u_lo, double u_hi, std::size_t points);
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

}  // namespace monofn

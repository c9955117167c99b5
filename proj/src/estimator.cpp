#include "monofn/estimator.hpp"

#include <cmath>
#include <sstream>

#include "monofn/errors.hpp"
#include "monofn/special.hpp"

namespace monofn {

void require_inside_support(const KnownDistribution& dist, double x, const char* op) {
  if (!std::isfinite(x) || !dist.inside_support(x)) {
    std::ostringstream os;
    os.precision(17);
    os << op << ": x = " << x << " is not strictly inside the support (" << dist.lower() << ", "
       << dist.upper() << ")";
    throw DomainError(os.str());
  }
}

double estimate_at(const Sample& y, const KnownDistribution& z, double x) {
  require_inside_support(z, x, "estimate");
  return sample_quantile(y, cdf(z, x));
}

std::vector<double> estimate(const Sample& y, const KnownDistribution& z, std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(estimate_at(y, z, x));
  return out;
}

PointwiseInterval pointwise_ci(const Sample& y, const KnownDistribution& z, double x, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw DomainError("pointwise_ci: alpha must lie in (0, 1/2)");
  }
  require_inside_support(z, x, "pointwise_ci");
  const double n = static_cast<double>(y.size());
  const double u = cdf(z, x);
  const double spread = std::sqrt(u * (1.0 - u)) / std::sqrt(n);

  PointwiseInterval out;
  out.c1 = u + special::normal_quantile(alpha / 2.0) * spread;
  out.c2 = u + special::normal_quantile(1.0 - alpha / 2.0) * spread;
  double c1 = out.c1;
  double c2 = out.c2;
  if (c1 < 1.0 / n) {
    c1 = 1.0 / n;
    out.clamped_lo = true;
  }
  if (c2 > 1.0) {
    c2 = 1.0;
    out.clamped_hi = true;
  }
  if (!(c2 > 0.0)) {
    c2 = 1.0 / n;
    out.clamped_hi = true;
  }
  out.lo = sample_quantile(y, c1);
  out.hi = sample_quantile(y, c2);
  return out;
}

EstimateResult estimate_with_ci(const Sample& y, const KnownDistribution& z, std::span<const double> xs,
                                double alpha) {
  EstimateResult r;
  r.level = 1.0 - alpha;
  r.n = y.size();
  r.xs.assign(xs.begin(), xs.end());
  for (double x : xs) {
    const auto ci = pointwise_ci(y, z, x, alpha);
    r.ghat.push_back(estimate_at(y, z, x));
    r.ci_lo.push_back(ci.lo);
    r.ci_hi.push_back(ci.hi);
    r.clamped.push_back(ci.clamped_lo || ci.clamped_hi);
  }
  return r;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw DomainError("grid: need at least one point");
  if (points == 1) return {lo};
  std::vector<double> xs(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) xs[i] = lo + step * static_cast<double>(i);
  xs.back() = hi;
  return xs;
}

std::vector<double> probability_grid(const KnownDistribution& z, double u_lo, double u_hi, std::size_t points) {
  auto us = linear_grid(u_lo, u_hi, points);
  for (double& u : us) u = quantile(z, u);
  return us;
}

}  // namespace monofn

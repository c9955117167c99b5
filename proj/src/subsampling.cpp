#include "monofn/subsampling.hpp"

#include <algorithm>
#include <cmath>

#include "monofn/errors.hpp"
#include "monofn/estimator.hpp"

namespace monofn {

SubsampleDistribution::SubsampleDistribution(std::vector<double> scaled_deviations)
    : sorted_(std::move(scaled_deviations)) {
  if (sorted_.empty()) {
    throw DomainError("SubsampleDistribution: no windows");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double SubsampleDistribution::operator()(double eta) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), eta);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double SubsampleDistribution::quantile(double level) const { return sorted_quantile(sorted_, level); }

std::size_t default_block_length(std::size_t n) {
  const double b = std::ceil(std::pow(static_cast<double>(n), 0.8) - 1e-9);
  return static_cast<std::size_t>(b);
}

SubsampleDistribution subsample_distribution(const Sample& y, const KnownDistribution& z, double x, std::size_t b) {
  const std::size_t n = y.size();
  if (b < 2 || b >= n) {
    throw DomainError("subsample_distribution: block length must satisfy 2 <= b < n");
  }
  require_inside_support(z, x, "subsample_distribution");
  const double u = cdf(z, x);
  const double full = sample_quantile(y, u);
  auto windows = block_quantiles(y.values(), b, u);
  const double root_b = std::sqrt(static_cast<double>(b));
  for (double& w : windows) w = root_b * std::abs(w - full);
  return SubsampleDistribution(std::move(windows));
}

SubsampleResult subsample_ci(const Sample& y, const KnownDistribution& z, double x, double alpha,
                             std::optional<std::size_t> b) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("subsample_ci: alpha must lie in (0, 1)");
  }
  SubsampleResult r;
  r.n = y.size();
  r.b = b ? *b : default_block_length(r.n);
  r.x = x;
  r.level = 1.0 - alpha;
  const auto dist = subsample_distribution(y, z, x, r.b);
  r.windows = dist.windows();
  r.ghat = estimate_at(y, z, x);
  r.d_quantile = dist.quantile(1.0 - alpha);
  const double half = r.d_quantile / std::sqrt(static_cast<double>(r.n));
  r.ci_lo = r.ghat - half;
  r.ci_hi = r.ghat + half;
  return r;
}

}  // namespace monofn

#include "monofn/density_band.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "monofn/errors.hpp"
#include "monofn/estimator.hpp"
#include "monofn/ks_distribution.hpp"

namespace monofn {

double KernelSpec::resolve_bandwidth(std::size_t n) const {
  const double h = bandwidth ? *bandwidth : std::pow(static_cast<double>(n), exponent);
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw DomainError("kde: bandwidth must be positive");
  }
  return h;
}

double KernelSpec::support_lo() const { return -std::numbers::pi; }
double KernelSpec::support_hi() const { return std::numbers::pi; }

double kernel_value(Kernel kernel, double u) {
  switch (kernel) {
    case Kernel::raised_cosine:
      if (u < -std::numbers::pi || u > std::numbers::pi) return 0.0;
      return (1.0 + std::cos(u)) / (2.0 * std::numbers::pi);
  }
  return 0.0;
}

double kde(const Sample& y, const KernelSpec& spec, double at) {
  const double h = spec.resolve_bandwidth(y.size());
  const auto sorted = y.sorted();
  // Only observations with (at - Y_i) / h inside the kernel support contribute.
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), at - spec.support_hi() * h);
  const auto last = std::upper_bound(first, sorted.end(), at - spec.support_lo() * h);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) sum += kernel_value(spec.kernel, (at - *it) / h);
  return sum / (static_cast<double>(sorted.size()) * h);
}

double spacing_density(const Sample& y, double p) {
  const double n = static_cast<double>(y.size());
  const double w = 0.5 / std::sqrt(n);
  const double p_lo = std::max(p - w, 1.0 / n);
  const double p_hi = std::min(p + w, 1.0);
  const double spread = sample_quantile(y, p_hi) - sample_quantile(y, p_lo);
  if (!(spread > 0.0)) return std::numeric_limits<double>::infinity();
  return (p_hi - p_lo) / spread;
}

std::size_t BandResult::flagged_count() const {
  return static_cast<std::size_t>(std::count_if(flags.begin(), flags.end(), [](unsigned f) { return f != 0; }));
}

BandResult confidence_band(const Sample& y, const KnownDistribution& z, double c, double d,
                           const std::vector<double>& xs, double alpha, const KernelSpec& spec) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("confidence_band: alpha must lie in (0, 1)");
  }
  if (!(c < d) || !std::isfinite(c) || !std::isfinite(d) || !z.inside_support(c) || !z.inside_support(d)) {
    throw DomainError("confidence_band: interval [c, d] must satisfy a < c < d < b");
  }
  BandResult r;
  r.n = y.size();
  r.level = 1.0 - alpha;
  r.critical = ks_sup_quantile(1.0 - alpha);
  r.bandwidth = spec.resolve_bandwidth(r.n);
  r.density_floor = 1.0 / (static_cast<double>(r.n) * r.bandwidth);
  const double root_n = std::sqrt(static_cast<double>(r.n));

  for (double x : xs) {
    if (x < c || x > d) {
      throw DomainError("confidence_band: evaluation point outside [c, d]");
    }
    const double u = cdf(z, x);
    const double g = sample_quantile(y, u);
    const double f = kde(y, spec, g);
    const double f_sp = spacing_density(y, u);
    const double half = f > 0.0 ? r.critical / (root_n * f) : std::numeric_limits<double>::infinity();
    unsigned flag = 0;
    if (f < r.density_floor) flag |= static_cast<unsigned>(BandFlag::low_density);
    if (!(f_sp <= 2.0 * f && f <= 2.0 * f_sp)) flag |= static_cast<unsigned>(BandFlag::unresolved_density);
    r.xs.push_back(x);
    r.ghat.push_back(g);
    r.fhat_at_ghat.push_back(f);
    r.spacing_density.push_back(f_sp);
    r.band_lo.push_back(g - half);
    r.band_hi.push_back(g + half);
    r.flags.push_back(flag);
  }
  return r;
}

BandResult confidence_band(const Sample& y, const KnownDistribution& z, double c, double d, double alpha,
                           std::size_t points, const KernelSpec& spec) {
  return confidence_band(y, z, c, d, linear_grid(c, d, points), alpha, spec);
}

}  // namespace monofn

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "monofn/distributions.hpp"
#include "monofn/empirical.hpp"

namespace monofn {

enum class Kernel {
  // (1 + cos u) / (2 pi) on [-pi, pi].
  raised_cosine,
};

struct KernelSpec {
  Kernel kernel = Kernel::raised_cosine;
  // Explicit bandwidth; when unset h = n^exponent.
  std::optional<double> bandwidth;
  double exponent = -1.0 / 6.0;

  double resolve_bandwidth(std::size_t n) const;
  // Support [d1, d2] of the kernel.
  double support_lo() const;
  double support_hi() const;
};

double kernel_value(Kernel kernel, double u);

// f_n(y) = 1/(n h) sum phi((y - Y_i) / h).
double kde(const Sample& y, const KernelSpec& spec, double at);

enum class BandFlag : unsigned {
  none = 0,
  // f_n(g_hat(x)) below the floor 1/(n h).
  low_density = 1,
  // The kernel estimate disagrees by more than a factor two with the
  // quantile-spacing estimate of the same density, i.e. the bandwidth does
  // not resolve the density of Y at g_hat(x).
  unresolved_density = 2,
};

struct BandResult {
  std::vector<double> xs;
  std::vector<double> ghat;
  std::vector<double> band_lo;
  std::vector<double> band_hi;
  std::vector<double> fhat_at_ghat;
  std::vector<double> spacing_density;
  std::vector<unsigned> flags;
  double critical = 0.0;
  double level = 0.0;
  double bandwidth = 0.0;
  double density_floor = 0.0;
  std::size_t n = 0;

  std::size_t flagged_count() const;
  double half_width(std::size_t i) const { return band_hi[i] - ghat[i]; }
};

// Simultaneous band g_hat(x) +- critical / (sqrt(n) f_n(g_hat(x))) on the
// given points, all inside [c, d] with lower() < c < d < upper().
BandResult confidence_band(const Sample& y, const KnownDistribution& z, double c, double d,
                           const std::vector<double>& xs, double alpha, const KernelSpec& spec = {});

// Same on an equispaced grid of `points` values over [c, d].
BandResult confidence_band(const Sample& y, const KnownDistribution& z, double c, double d, double alpha,
                           std::size_t points = 401, const KernelSpec& spec = {});

// Quantile-spacing density estimate 2w / (Y quantile(p + w) - Y quantile(p - w)),
// w = n^(-1/3) / 2, used to cross-check the kernel estimate.
double spacing_density(const Sample& y, double p);

}  // namespace monofn

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "monofn/distributions.hpp"
#include "monofn/empirical.hpp"

namespace monofn {

// Step function S(eta) = #{i : root_b |g_hat_{b,i}(x) - g_hat(x)| <= eta} / (n - b + 1)
// over the n - b + 1 overlapping windows of length b.
class SubsampleDistribution {
 public:
  explicit SubsampleDistribution(std::vector<double> scaled_deviations);

  double operator()(double eta) const;
  // inf{eta | S(eta) >= level}.
  double quantile(double level) const;

  std::size_t windows() const { return sorted_.size(); }
  const std::vector<double>& sorted_deviations() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

// ceil(n^(4/5)).
std::size_t default_block_length(std::size_t n);

SubsampleDistribution subsample_distribution(const Sample& y, const KnownDistribution& z, double x, std::size_t b);

struct SubsampleResult {
  double x = 0.0;
  double ghat = 0.0;
  // d(1 - alpha) in root_b-scaled units; the interval divides it by root_n.
  double d_quantile = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t b = 0;
  std::size_t n = 0;
  std::size_t windows = 0;
  double level = 0.0;
};

SubsampleResult subsample_ci(const Sample& y, const KnownDistribution& z, double x, double alpha,
                             std::optional<std::size_t> b = std::nullopt);

}  // namespace monofn

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monofn {

// Observed data in arrival order together with a sorted view.
class Sample {
 public:
  // Throws DomainError on an empty input or any non-finite value.
  explicit Sample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<const double> sorted() const { return sorted_; }
  // order()[k] is the index in values() of the k-th smallest entry (0-based).
  std::span<const std::size_t> order() const { return order_; }

  // k-th order statistic, 1-based.
  double order_statistic(std::size_t k) const;

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  std::vector<std::size_t> order_;
};

// F_n(x) = #{i : X_i <= x} / n.
double ecdf(const Sample& sample, double x);

// Smallest k in [1, n] with k / n >= p, evaluated in the same double
// arithmetic ecdf() uses, so ecdf(sample_quantile(p)) >= p holds exactly.
std::size_t quantile_rank(std::size_t n, double p);

// inf{x | F_n(x) >= p}: the order statistic of rank quantile_rank(n, p).
// No interpolation. p must lie in (0, 1].
double sample_quantile(const Sample& sample, double p);
double sorted_quantile(std::span<const double> sorted, double p);

// Sample quantile at level p of every window values[i, i + b), i = 0..n-b,
// via an order-statistic sliding window in O(n log b).
std::vector<double> block_quantiles(std::span<const double> values, std::size_t b, double p);
inline std::vector<double> block_quantiles(const Sample& sample, std::size_t b, double p) {
  return block_quantiles(sample.values(), b, p);
}

}  // namespace monofn

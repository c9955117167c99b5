#include "monofn/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "monofn/errors.hpp"

namespace monofn {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw DomainError("Sample: at least one observation is required");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("Sample: non-finite value at index " + std::to_string(i));
    }
  }
  order_.resize(values_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [this](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
  sorted_.reserve(values_.size());
  for (std::size_t idx : order_) sorted_.push_back(values_[idx]);
}

double Sample::order_statistic(std::size_t k) const {
  if (k < 1 || k > sorted_.size()) {
    throw DomainError("order_statistic: rank out of range");
  }
  return sorted_[k - 1];
}

double ecdf(const Sample& sample, double x) {
  const auto sorted = sample.sorted();
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

std::size_t quantile_rank(std::size_t n, double p) {
  if (n == 0) {
    throw DomainError("quantile_rank: empty sample");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("sample quantile: p must lie in (0, 1]");
  }
  const double dn = static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::clamp(std::ceil(dn * p), 1.0, dn));
  // ceil(n p) can be off by one when n p is within rounding of an integer.
  while (k > 1 && static_cast<double>(k - 1) / dn >= p) --k;
  while (k < n && static_cast<double>(k) / dn < p) ++k;
  return k;
}

double sorted_quantile(std::span<const double> sorted, double p) {
  return sorted[quantile_rank(sorted.size(), p) - 1];
}

double sample_quantile(const Sample& sample, double p) { return sorted_quantile(sample.sorted(), p); }

std::vector<double> block_quantiles(std::span<const double> values, std::size_t b, double p) {
  const std::size_t n = values.size();
  if (b < 1 || b > n) {
    throw DomainError("block_quantiles: block length must satisfy 1 <= b <= n");
  }
  const std::size_t k = quantile_rank(b, p);

  // low holds the k smallest values of the window, high the rest; the
  // window quantile is the largest element of low.
  std::multiset<double> low;
  std::multiset<double> high;
  auto rebalance = [&] {
    while (low.size() > k) {
      auto it = std::prev(low.end());
      high.insert(*it);
      low.erase(it);
    }
    while (low.size() < k && !high.empty()) {
      auto it = high.begin();
      low.insert(*it);
      high.erase(it);
    }
  };
  auto insert = [&](double v) {
    if (!low.empty() && v <= *low.rbegin()) {
      low.insert(v);
    } else {
      high.insert(v);
    }
    rebalance();
  };
  auto erase = [&](double v) {
    if (!low.empty() && v <= *low.rbegin()) {
      low.erase(low.find(v));
    } else {
      high.erase(high.find(v));
    }
    rebalance();
  };

  for (std::size_t i = 0; i < b; ++i) insert(values[i]);
  std::vector<double> out;
  out.reserve(n - b + 1);
  out.push_back(*low.rbegin());
  for (std::size_t i = b; i < n; ++i) {
    erase(values[i - b]);
    insert(values[i]);
    out.push_back(*low.rbegin());
  }
  return out;
}

}  // namespace monofn

#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline double bisect_inverse(const std::function<double(double)>& cdf, double p, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Standard normal CDF by quadrature of the density from -12.
inline double normal_cdf_quadrature(double x) {
  const double c = 1.0 / std::sqrt(2.0 * M_PI);
  return simpson([c](double t) { return c * std::exp(-0.5 * t * t); }, -12.0, x, 40000);
}

// inf{x in sample | #(X_i <= x) / n >= p} by linear scan.
inline double brute_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  for (double cand : v) {
    const auto count = std::count_if(v.begin(), v.end(), [&](double t) { return t <= cand; });
    if (static_cast<double>(count) / n >= p) return cand;
  }
  return v.back();
}

// Sorts every window separately.
inline std::vector<double> naive_block_quantiles(const std::vector<double>& v, std::size_t b, double p) {
  std::vector<double> out;
  for (std::size_t i = 0; i + b <= v.size(); ++i) {
    std::vector<double> w(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(i + b));
    out.push_back(brute_quantile(w, p));
  }
  return out;
}

// Alternating tail series with a fixed, generous number of terms.
inline double ks_tail_series(double c, int terms = 400) {
  double s = 0.0;
  for (int k = 1; k <= terms; ++k) s += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * c * c);
  return 2.0 * s;
}

inline double ks_quantile_series(double p) {
  double lo = 0.2, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ks_tail_series(mid) > 1.0 - p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// sup_j |B(t_j)| over a grid of m steps; B(t_j) = W(t_j) - t_j W(1) from
// partial sums of N(0, 1/m) increments. Also returns the grid values.
inline double bridge_sup(std::mt19937_64& rng, std::size_t m, std::vector<double>* path = nullptr) {
  std::normal_distribution<double> nd(0.0, 1.0 / std::sqrt(static_cast<double>(m)));
  std::vector<double> w(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j) w[j] = w[j - 1] + nd(rng);
  double sup = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    w[j] -= (static_cast<double>(j) / static_cast<double>(m)) * w[m];
    sup = std::max(sup, std::abs(w[j]));
  }
  if (path) *path = std::move(w);
  return sup;
}

}  // namespace oracle

namespace oracle {

struct BridgeTailEstimate {
  std::vector<double> grid_max;   // fraction of paths with max_j |B(t_j)| > c
  std::vector<double> continuous; // mean of P(sup_t |B(t)| > c | grid values)
};

// Ensemble of `paths` bridges on an m-step grid. The continuous estimate
// adds, between neighbouring grid values a and b, the probability that the
// interpolating Brownian bridge of duration 1/m crosses +c or -c:
// exp(-2 m (c - a)(c - b)) + exp(-2 m (c + a)(c + b)).
inline BridgeTailEstimate bridge_tail_ensemble(std::size_t paths, std::size_t m, const std::vector<double>& cs,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BridgeTailEstimate out;
  out.grid_max.assign(cs.size(), 0.0);
  out.continuous.assign(cs.size(), 0.0);
  std::vector<double> path;
  const double dm = static_cast<double>(m);
  for (std::size_t r = 0; r < paths; ++r) {
    const double sup = bridge_sup(rng, m, &path);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const double c = cs[k];
      if (sup > c) {
        out.grid_max[k] += 1.0;
        out.continuous[k] += 1.0;
        continue;
      }
      double log_stay = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double a = path[j], b = path[j + 1];
        const double cross = std::exp(-2.0 * dm * (c - a) * (c - b)) + std::exp(-2.0 * dm * (c + a) * (c + b));
        log_stay += std::log1p(-std::min(cross, 1.0));
      }
      out.continuous[k] += 1.0 - std::exp(log_stay);
    }
  }
  for (std::size_t k = 0; k < cs.size(); ++k) {
    out.grid_max[k] /= static_cast<double>(paths);
    out.continuous[k] /= static_cast<double>(paths);
  }
  return out;
}

}  // namespace oracle

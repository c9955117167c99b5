#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "monofn/distributions.hpp"
#include "monofn/empirical.hpp"

namespace monofn {

// Hypothesised transfer function h with its derivative.
struct HypothesisFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::string name;
};

// Boundary trim on the probability scale: min(25 log log n / n, 0.2).
// Requires n >= 16.
double trim_level(std::size_t n);

struct StatisticDetail {
  double value = 0.0;
  double trim = 0.0;
  std::size_t eval_points = 0;
  double argmax_x = 0.0;
};

// sup over delta_n <= F_Z(x) <= 1 - delta_n of
//   sqrt(n) f_Z(x) / h'(x) |g_hat(x) - h(x)|,
// taken over 512 points x = quantile(u), u equispaced on the trimmed range,
// plus both one-sided limits of g_hat at each of its jumps F_Z(x) = k/n.
StatisticDetail test_statistic_detail(const Sample& y, const KnownDistribution& z, const HypothesisFunction& hyp);
double test_statistic(const Sample& y, const KnownDistribution& z, const HypothesisFunction& hyp);

enum class PValueMethod { asymptotic, monte_carlo };

struct TestResult {
  double statistic = 0.0;
  double critical = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double level = 0.0;
  double trim = 0.0;
  std::size_t eval_points = 0;
  PValueMethod method = PValueMethod::asymptotic;
};

// Asymptotic test: critical = ks_sup_quantile(1 - alpha), p = ks_sup_tail(statistic).
TestResult test(const Sample& y, const KnownDistribution& z, const HypothesisFunction& hyp, double alpha);

struct MonteCarloResult {
  double observed = 0.0;
  double p_value = 1.0;
  std::size_t replications = 0;
  std::size_t exceedances = 0;
  std::size_t fit_failures = 0;
  std::optional<KnownDistribution> fitted;
};

// Parametric-bootstrap p-value. The family is fitted to the data by maximum
// likelihood and the observed statistic computed against hyp under the fit.
// Each replication draws n values from the fitted law, refits, and
// recomputes; p = (1 + #{simulated >= observed}) / (successful + 1).
// Throws DataError when more than 5% of the refits fail.
MonteCarloResult monte_carlo_p_value(const Sample& data, Family family, const HypothesisFunction& hyp,
                                     std::size_t replications, std::uint64_t seed, unsigned threads = 0);

// Counting rule behind monte_carlo_p_value.
double monte_carlo_p(std::size_t exceedances, std::size_t replications);

}  // namespace monofn

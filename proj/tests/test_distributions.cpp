#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "monofn/distributions.hpp"
#include "monofn/errors.hpp"
#include "monofn/special.hpp"
#include "oracles.hpp"

using namespace monofn;

namespace {

std::vector<KnownDistribution> shipped() {
  return {KnownDistribution::normal(0.0, 1.0), KnownDistribution::normal(3.0, 2.5),
          KnownDistribution::gamma(10.97, 0.0270), KnownDistribution::gamma(2.0, 1.0),
          KnownDistribution::gamma(0.7, 3.0), KnownDistribution::uniform(0.0, 1.0),
          KnownDistribution::uniform(-2.0, 5.0)};
}

}  // namespace

TEST_CASE("cdf reference values") {
  CHECK(cdf(KnownDistribution::normal(0, 1), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cdf(KnownDistribution::uniform(0, 1), 0.25) == doctest::Approx(0.25));
  CHECK(cdf(KnownDistribution::uniform(0, 1), -1.0) == 0.0);
  CHECK(cdf(KnownDistribution::uniform(0, 1), 2.0) == 1.0);
  CHECK(cdf(KnownDistribution::gamma(2, 1), -3.0) == 0.0);
  CHECK_THROWS_AS(cdf(KnownDistribution::normal(0, 1), NAN), DomainError);
  CHECK_THROWS_AS(cdf(KnownDistribution::normal(0, 1), INFINITY), DomainError);
}

TEST_CASE("gamma cdf at its mean agrees with quadrature of the density") {
  const auto g = KnownDistribution::gamma(10.97, 0.0270);
  const double x = 10.97 / 0.0270;  // 406.3
  const double shape = 10.97, rate = 0.0270;
  const double lg = std::lgamma(shape);
  auto density = [&](double t) {
    return t <= 0.0 ? 0.0 : std::exp(shape * std::log(rate) + (shape - 1) * std::log(t) - rate * t - lg);
  };
  const double by_quadrature = oracle::simpson(density, 0.0, x, 40000);
  const double value = cdf(g, x);
  CHECK(value > 0.4);
  CHECK(value < 0.6);
  CHECK(value == doctest::Approx(by_quadrature).epsilon(1e-10));
}

TEST_CASE("normal cdf agrees with quadrature") {
  const auto n = KnownDistribution::normal(0, 1);
  for (double x : {-3.0, -1.2, 0.4, 2.5}) {
    CHECK(cdf(n, x) == doctest::Approx(oracle::normal_cdf_quadrature(x)).epsilon(1e-11));
  }
}

TEST_CASE("quantile reference values") {
  const auto n = KnownDistribution::normal(0, 1);
  const double by_bisection = oracle::bisect_inverse(oracle::normal_cdf_quadrature, 0.975, -10.0, 10.0);
  CHECK(quantile(n, 0.975) == doctest::Approx(by_bisection).epsilon(1e-9));
  CHECK(quantile(n, 0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(std::abs(quantile(n, 0.5)) < 1e-15);
  CHECK(quantile(KnownDistribution::uniform(0, 1), 0.3) == doctest::Approx(0.3));
  for (double p : {0.0, 1.0, -0.1, 1.5}) CHECK_THROWS_AS(quantile(n, p), DomainError);
}

TEST_CASE("cdf(quantile(p)) round trip for every shipped family") {
  for (const auto& d : shipped()) {
    for (double p : {1e-6, 0.01, 0.1, 0.5, 0.9, 0.99, 1 - 1e-6}) {
      CAPTURE(d.describe());
      CAPTURE(p);
      const double x = quantile(d, p);
      CHECK(std::abs(cdf(d, x) - p) < 1e-10);
      if (p >= 0.01 && p <= 0.99) CHECK(std::abs(cdf(d, x) - p) < 1e-9);
    }
  }
}

TEST_CASE("quantile inverts cdf on the support") {
  for (const auto& d : shipped()) {
    const double lo = quantile(d, 0.001), hi = quantile(d, 0.999);
    for (int i = 0; i <= 50; ++i) {
      const double x = lo + (hi - lo) * i / 50.0;
      CAPTURE(d.describe());
      CAPTURE(x);
      CHECK(quantile(d, cdf(d, x)) == doctest::Approx(x).epsilon(1e-10).scale(d.stddev()));
    }
  }
}

TEST_CASE("cdf and quantile are monotone") {
  for (const auto& d : shipped()) {
    const double lo = d.mean() - 6 * d.stddev(), hi = d.mean() + 6 * d.stddev();
    double prev = -1.0;
    for (int i = 0; i < 10000; ++i) {
      const double v = cdf(d, lo + (hi - lo) * i / 9999.0);
      CHECK_MESSAGE(v >= prev, d.describe());
      prev = v;
    }
    double prev_q = -INFINITY;
    for (int i = 1; i < 1000; ++i) {
      const double q = quantile(d, i / 1000.0);
      CHECK(q >= prev_q);
      prev_q = q;
    }
  }
}

TEST_CASE("pdf integrates to one and matches the cdf finite difference") {
  for (const auto& d : shipped()) {
    const double lo = std::max(d.lower(), d.mean() - 14 * d.stddev());
    const double hi = d.family() == Family::uniform ? d.upper() : d.mean() + 30 * d.stddev();
    double total = 0.0;
    if (d.family() == Family::gamma) {
      // Integrate in log x; the gamma(0.7) density is singular at 0.
      total = oracle::simpson([&](double t) { return pdf(d, std::exp(t)) * std::exp(t); },
                              std::log(quantile(d, 1e-12)), std::log(hi), 200000) +
              1e-12;
    } else {
      total = oracle::simpson([&](double x) { return pdf(d, x); }, lo, hi, 200000);
    }
    CAPTURE(d.describe());
    CHECK(std::abs(total - 1.0) < 1e-8);

    for (double p : {0.05, 0.2, 0.5, 0.8, 0.95}) {
      const double x = quantile(d, p);
      const double step = 1e-5 * d.stddev();
      const double fd = (cdf(d, x + step) - cdf(d, x - step)) / (2 * step);
      CHECK(std::abs(fd - pdf(d, x)) < 1e-6 * std::max(1.0, pdf(d, x)));
    }
  }
  CHECK(pdf(KnownDistribution::uniform(0, 1), 1.5) == 0.0);
  CHECK(pdf(KnownDistribution::gamma(2, 1), -1.0) == 0.0);
}

TEST_CASE("pdf_derivative") {
  const auto n = KnownDistribution::normal(0, 1);
  CHECK(pdf_derivative(n, 1.0) / pdf(n, 1.0) == doctest::Approx(-1.0));

  const double shape = 10.97, rate = 0.0270;
  const auto g = KnownDistribution::gamma(shape, rate);
  const double mode = (shape - 1) / rate;
  CHECK(std::abs(pdf_derivative(g, mode) / pdf(g, mode)) < 1e-12);
  CHECK(pdf_derivative(g, 200.0) / pdf(g, 200.0) == doctest::Approx((shape - 1) / 200.0 - rate));

  auto u = KnownDistribution::uniform(0, 1);
  CHECK(pdf_derivative(u, 0.3) == 0.0);
  CHECK_THROWS_AS(pdf_derivative(u, 0.0), DomainError);
  CHECK_THROWS_AS(pdf_derivative(g, 0.0), DomainError);

  for (const auto& d : shipped()) {
    for (double p : {0.1, 0.3, 0.6, 0.9}) {
      const double x = quantile(d, p);
      const double step = 1e-5 * d.stddev();
      const double fd = (pdf(d, x + step) - pdf(d, x - step)) / (2 * step);
      const double an = pdf_derivative(d, x);
      CAPTURE(d.describe());
      CHECK(std::abs(fd - an) <= 1e-5 * std::max(std::abs(an), pdf(d, x) / d.stddev()));
    }
  }
}

TEST_CASE("distribution construction validates parameters") {
  CHECK_THROWS_AS(KnownDistribution::normal(0, 0), DomainError);
  CHECK_THROWS_AS(KnownDistribution::gamma(-1, 1), DomainError);
  CHECK_THROWS_AS(KnownDistribution::gamma(1, 0), DomainError);
  CHECK_THROWS_AS(KnownDistribution::uniform(1, 1), DomainError);
  CHECK(KnownDistribution::gamma(10.97, 0.027).lower() == 0.0);
  CHECK(std::isinf(KnownDistribution::normal(0, 1).lower()));
  CHECK_THROWS_AS(parse_family("weibull"), ConfigError);
}

TEST_CASE("special functions") {
  CHECK(special::digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-14));
  CHECK(special::trigamma(1.0) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-13));
  // digamma(x + 1) = digamma(x) + 1/x
  for (double x : {0.3, 2.7, 11.5}) {
    CHECK(special::digamma(x + 1) == doctest::Approx(special::digamma(x) + 1 / x).epsilon(1e-13));
    CHECK(special::trigamma(x + 1) == doctest::Approx(special::trigamma(x) - 1 / (x * x)).epsilon(1e-13));
  }
  // P(1, x) = 1 - e^-x
  for (double x : {0.1, 1.0, 5.0, 30.0}) {
    CHECK(special::gamma_p(1.0, x) == doctest::Approx(1 - std::exp(-x)).epsilon(1e-13));
  }
  CHECK(special::gamma_p(3.0, 2.0) + special::gamma_q(3.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("fit_gamma_mle recovers known parameters") {
  std::mt19937_64 rng(20240611);
  {
    std::gamma_distribution<double> gd(10.97, 1.0 / 0.0270);
    std::vector<double> data(10000);
    for (double& v : data) v = gd(rng);
    const auto fit = fit_gamma_mle(data);
    CHECK(std::abs(fit.shape - 10.97) < 0.5);
    CHECK(std::abs(fit.rate - 0.0270) < 0.002);
    const auto grad = gamma_loglik_gradient(data, fit);
    CHECK(std::hypot(grad[0], grad[1]) < 1e-8);
  }
  {
    std::gamma_distribution<double> gd(2.0, 1.0);
    std::vector<double> data(5000);
    for (double& v : data) v = gd(rng);
    const auto fit = fit_gamma_mle(data);
    CHECK(fit.shape > 1.85);
    CHECK(fit.shape < 2.15);
    const auto grad = gamma_loglik_gradient(data, fit);
    CHECK(std::hypot(grad[0], grad[1]) < 1e-8);
  }
}

TEST_CASE("fit_gamma_mle error paths") {
  CHECK_THROWS_AS(fit_gamma_mle(std::vector<double>{1.0}), DomainError);
  CHECK_THROWS_AS(fit_gamma_mle(std::vector<double>{1.0, -2.0, 3.0}), DomainError);
  CHECK_THROWS_AS(fit_gamma_mle(std::vector<double>{1.0, 0.0, 3.0}), DomainError);
  CHECK_THROWS_AS(fit_gamma_mle(std::vector<double>(10, 4.2)), ConvergenceError);
  std::vector<double> almost(50, 4.2);
  almost[7] = 4.2 * (1 + 1e-12);
  CHECK_THROWS_AS(fit_gamma_mle(almost), ConvergenceError);
}

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "monofn/density_band.hpp"
#include "monofn/errors.hpp"
#include "monofn/estimator.hpp"
#include "monofn/ks_distribution.hpp"
#include "monofn/random.hpp"
#include "monofn/simulate.hpp"
#include "oracles.hpp"

using namespace monofn;

namespace {

Sample draw_y(const Transfer& g, std::size_t n, std::uint64_t seed) {
  const auto z = KnownDistribution::normal(0, 1);
  auto engine = stream_engine(seed, 0);
  std::vector<double> y(n);
  for (double& v : y) v = g.value(draw(z, engine));
  return Sample(std::move(y));
}

}  // namespace

TEST_CASE("raised-cosine kernel") {
  const double mass = oracle::simpson([](double u) { return kernel_value(Kernel::raised_cosine, u); },
                                      -std::numbers::pi, std::numbers::pi, 2000);
  CHECK(std::abs(mass - 1.0) < 1e-9);
  CHECK(kernel_value(Kernel::raised_cosine, 3.2) == 0.0);
  CHECK(kernel_value(Kernel::raised_cosine, -3.2) == 0.0);
  KernelSpec spec;
  CHECK(spec.resolve_bandwidth(1000000) == doctest::Approx(0.1));
  spec.bandwidth = 0.0;
  CHECK_THROWS_AS(spec.resolve_bandwidth(10), DomainError);
}

TEST_CASE("kde point values") {
  KernelSpec spec;
  spec.bandwidth = 1.0;
  const Sample one({0.0});
  CHECK(kde(one, spec, 0.0) == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(kde(one, spec, 3.2) == 0.0);
  CHECK(kde(one, spec, -3.2) == 0.0);

  const auto y = draw_y(transfer("identity"), 10000, 8);
  const double f0 = kde(y, KernelSpec{}, 0.0);
  CHECK(std::abs(f0 - 1.0 / std::sqrt(2.0 * std::numbers::pi)) < 0.05);
}

TEST_CASE("kde integrates to one and is nonnegative") {
  for (std::size_t n : {100, 1000}) {
    const auto y = draw_y(transfer("(x+4)^2"), n, n);
    KernelSpec spec;
    const double h = spec.resolve_bandwidth(n);
    const double lo = y.sorted().front() - std::numbers::pi * h;
    const double hi = y.sorted().back() + std::numbers::pi * h;
    const int steps = 200000;
    double sum = 0.0;
    double prev = kde(y, spec, lo);
    for (int i = 1; i <= steps; ++i) {
      const double cur = kde(y, spec, lo + (hi - lo) * i / steps);
      CHECK(cur >= 0.0);
      sum += 0.5 * (prev + cur);
      prev = cur;
    }
    CHECK(std::abs(sum * (hi - lo) / steps - 1.0) < 2e-3);
  }
}

TEST_CASE("kde derivative is continuous across kernel edges") {
  // A jump in f' would be of order 1 / (n h^2); continuity leaves only the
  // curvature term, bounded by 2 eps max|f''| = 2 eps / (2 pi h^3).
  const Sample y({-0.3, 0.1, 0.15, 0.9});
  for (double h : {0.05, 0.2, 1.0}) {
    KernelSpec spec;
    spec.bandwidth = h;
    const double step = 1e-8;
    auto deriv = [&](double at) { return (kde(y, spec, at + step) - kde(y, spec, at - step)) / (2 * step); };
    const double eps = 1e-6;
    const double bound = 2 * eps / (2 * std::numbers::pi * h * h * h) + 1e-5;
    for (double obs : y.sorted()) {
      for (double edge : {obs - std::numbers::pi * h, obs, obs + std::numbers::pi * h}) {
        CHECK(std::abs(deriv(edge + eps) - deriv(edge - eps)) < bound);
      }
    }
    CHECK(bound < 0.01 / (4 * h * h));
  }
}

TEST_CASE("band structure") {
  const auto z = KnownDistribution::normal(0, 1);
  const auto y = draw_y(transfer("(x+4)^2"), 1000, 3);
  const auto band = confidence_band(y, z, -2.0, 2.0, 0.01, 401);
  REQUIRE(band.xs.size() == 401);
  CHECK(band.critical == doctest::Approx(ks_sup_quantile(0.99)));
  CHECK(band.bandwidth == doctest::Approx(std::pow(1000.0, -1.0 / 6.0)));
  for (std::size_t i = 0; i < band.xs.size(); ++i) {
    CHECK(band.band_lo[i] <= band.ghat[i]);
    CHECK(band.ghat[i] <= band.band_hi[i]);
    CHECK(band.half_width(i) ==
          doctest::Approx(band.critical / (std::sqrt(1000.0) * band.fhat_at_ghat[i])).epsilon(1e-12));
  }
  for (unsigned f : band.flags) CHECK((f & static_cast<unsigned>(BandFlag::low_density)) == 0);
  CHECK(band.flagged_count() <= 20);

  // Uniform bands dominate pointwise intervals at the same level.
  std::size_t wider = 0;
  for (std::size_t i = 0; i < band.xs.size(); ++i) {
    const auto ci = pointwise_ci(y, z, band.xs[i], 0.01);
    const double ci_half = 0.5 * (ci.hi - ci.lo);
    wider += band.half_width(i) >= ci_half;
  }
  CHECK(static_cast<double>(wider) >= 0.95 * static_cast<double>(band.xs.size()));
}

TEST_CASE("band half-widths shrink as alpha grows") {
  const auto z = KnownDistribution::normal(0, 1);
  const auto y = draw_y(transfer("log(x+5)"), 800, 4);
  double prev_crit = INFINITY;
  std::vector<double> prev(41, INFINITY);
  for (double alpha : {0.01, 0.05, 0.1, 0.3, 0.5}) {
    const auto band = confidence_band(y, z, -2.0, 2.0, alpha, 41);
    CHECK(band.critical < prev_crit);
    prev_crit = band.critical;
    for (std::size_t i = 0; i < 41; ++i) {
      CHECK(band.half_width(i) < prev[i]);
      prev[i] = band.half_width(i);
    }
  }
}

TEST_CASE("x^3 band is flagged near zero and wider than the pointwise interval") {
  const auto z = KnownDistribution::normal(0, 1);
  const auto y = draw_y(transfer("x^3"), 1000, 5);
  const auto band = confidence_band(y, z, -2.0, 2.0, 0.01, 401);
  std::size_t near_zero = 0;
  for (std::size_t i = 0; i < band.xs.size(); ++i) {
    if (std::abs(band.xs[i]) <= 0.25 && band.flags[i] != 0) ++near_zero;
  }
  CHECK(near_zero > 0);
  const auto mid = static_cast<std::size_t>(std::find(band.xs.begin(), band.xs.end(), 0.0) - band.xs.begin());
  REQUIRE(mid < band.xs.size());
  const auto ci = pointwise_ci(y, z, 0.0, 0.01);
  CHECK(band.half_width(mid) > 5.0 * 0.5 * (ci.hi - ci.lo));
}

TEST_CASE("band input validation") {
  const auto u = KnownDistribution::uniform(0, 1);
  const Sample y({0.1, 0.4, 0.8});
  CHECK_THROWS_AS(confidence_band(y, u, 0.0, 0.5, 0.05), DomainError);
  CHECK_THROWS_AS(confidence_band(y, u, 0.5, 1.0, 0.05), DomainError);
  CHECK_THROWS_AS(confidence_band(y, u, 0.6, 0.5, 0.05), DomainError);
  CHECK_THROWS_AS(confidence_band(y, u, 0.2, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(confidence_band(y, u, 0.2, 0.5, std::vector<double>{0.7}, 0.05), DomainError);
}

TEST_CASE("low-density floor flags an isolated estimate") {
  const auto z = KnownDistribution::uniform(0, 1);
  // g_hat(51/101) is the lone observation at 100.
  std::vector<double> v;
  for (int i = 0; i < 50; ++i) v.push_back(i * 1e-3);
  v.push_back(100.0);
  for (int i = 0; i < 50; ++i) v.push_back(200 + i * 1e-3);
  KernelSpec spec;
  spec.bandwidth = 0.5;
  const double x = 51.0 / 101.0 - 1e-9;
  const auto band = confidence_band(Sample(v), z, 0.4, 0.6, std::vector<double>{x, 0.45}, 0.05, spec);
  CHECK(band.ghat[0] == 100.0);
  CHECK(band.density_floor == doctest::Approx(1.0 / (101 * 0.5)));
  CHECK(band.fhat_at_ghat[0] == doctest::Approx(1.0 / (std::numbers::pi * 101 * 0.5)));
  CHECK((band.flags[0] & static_cast<unsigned>(BandFlag::low_density)) != 0);
  CHECK((band.flags[1] & static_cast<unsigned>(BandFlag::low_density)) == 0);
}

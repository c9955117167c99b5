#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "monofn/density_band.hpp"
#include "monofn/distributions.hpp"
#include "monofn/gof_test.hpp"
#include "monofn/random.hpp"

namespace monofn {

struct Transfer {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  HypothesisFunction as_hypothesis() const { return {value, derivative, name}; }
};

// Built-ins: "(x+4)^2", "log(x+5)", "log(x+10)", "x^3", "exp(x)", "identity".
// "e^x" is accepted for "exp(x)". Throws ConfigError listing the registry.
const Transfer& transfer(std::string_view name);
std::vector<std::string> transfer_names();

enum class Perturbation { none, n_eighth, root_n };

std::string_view perturbation_name(Perturbation p);
Perturbation parse_perturbation(std::string_view name);

// h(x) + x / n^(1/8) or h(x) + x / sqrt(n).
Transfer perturbed(const Transfer& base, Perturbation p, std::size_t n);

// Throws ConfigError unless t' > 0 on a 1001-point grid over [lo, hi].
void require_increasing(const Transfer& t, double lo, double hi);

struct Dependence {
  // Empty: i.i.d. Otherwise Z_i = sum_k coefficients[k] eps_{i-k}.
  std::vector<double> coefficients;

  bool iid() const { return coefficients.empty(); }
  std::size_t order() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

  static Dependence independent() { return {}; }
  // alpha_k = ratio^k for k = 0..q (alpha_0 = 1).
  static Dependence moving_average(std::size_t q, double ratio);
};

struct DGPConfig {
  // Law of Z for i.i.d. data; law of the innovations for MA data.
  KnownDistribution input_law = KnownDistribution::normal(0.0, 1.0);
  Dependence dependence;
  std::string transfer = "identity";
  Perturbation perturbation = Perturbation::none;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
};

// Law of a single Z_i: input_law for i.i.d. data, N(mu sum a_k, sigma^2 sum a_k^2)
// for MA data with normal innovations. Other MA innovations are rejected.
KnownDistribution marginal_law(const DGPConfig& config);

// The transfer actually applied to Z (base transfer plus perturbation).
Transfer effective_transfer(const DGPConfig& config);

struct Series {
  std::vector<double> z;
  std::vector<double> y;
};

// Deterministic in config.seed. For i.i.d. data, a draw outside the domain
// of the transfer (non-finite g(Z)) is redrawn; for MA data it is an error.
Series generate(const DGPConfig& config);
Series generate(const DGPConfig& config, Engine& engine);

struct ReportCell {
  std::string row;
  std::string column;
  double value = 0.0;
};

struct ExperimentReport {
  std::string kind;
  std::vector<ReportCell> cells;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;

  double at(std::string_view row, std::string_view column) const;
};

// Delimited table with header "row,column,value"; metadata as '#' lines.
void write_report_csv(std::ostream& os, const ExperimentReport& report, char delim = ',');
void write_report_json(std::ostream& os, const ExperimentReport& report);

enum class CoverageMethod { pointwise, band, subsample };

std::string_view coverage_method_name(CoverageMethod m);
CoverageMethod parse_coverage_method(std::string_view name);

struct CoverageOptions {
  CoverageMethod method = CoverageMethod::pointwise;
  double alpha = 0.01;
  std::size_t replications = 500;
  // Band interval; defaults to the range of xs.
  double band_lo = -2.0;
  double band_hi = 2.0;
  KernelSpec kernel;
  // Subsampling block length; 0 selects ceil(n^(4/5)).
  std::size_t block = 0;
  unsigned threads = 0;
};

// Per x: fraction of replications whose interval contains the true g(x).
// Column "all" holds the simultaneous fraction (every x covered), and for
// the band method "flagged_mean" the mean number of flagged points.
ExperimentReport run_coverage_study(const DGPConfig& config, const std::vector<double>& xs,
                                    const CoverageOptions& options);

struct TestTableOptions {
  double alpha = 0.15;
  std::size_t repetitions = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

// Cell (h, perturbation): fraction of correct decisions; accepting is
// correct under "none", rejecting under the perturbations.
ExperimentReport run_test_table(const std::vector<std::string>& h_list,
                                const std::vector<Perturbation>& perturbations, std::size_t n,
                                const TestTableOptions& options);

}  // namespace monofn

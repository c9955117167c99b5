#include "monofn/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "monofn/errors.hpp"
#include "monofn/estimator.hpp"
#include "monofn/subsampling.hpp"

namespace monofn {

namespace {

const std::vector<Transfer>& registry() {
  static const std::vector<Transfer> transfers = {
      {"(x+4)^2", [](double x) { return (x + 4.0) * (x + 4.0); }, [](double x) { return 2.0 * (x + 4.0); }},
      {"log(x+5)", [](double x) { return std::log(x + 5.0); }, [](double x) { return 1.0 / (x + 5.0); }},
      {"log(x+10)", [](double x) { return std::log(x + 10.0); }, [](double x) { return 1.0 / (x + 10.0); }},
      {"x^3", [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; }},
      {"exp(x)", [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); }},
      {"identity", [](double x) { return x; }, [](double) { return 1.0; }},
  };
  return transfers;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string json_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

const Transfer& transfer(std::string_view name) {
  if (name == "e^x") name = "exp(x)";
  for (const auto& t : registry()) {
    if (t.name == name) return t;
  }
  std::string known;
  for (const auto& t : registry()) known += (known.empty() ? "" : ", ") + t.name;
  throw ConfigError("unknown transfer function '" + std::string(name) + "'; known: " + known);
}

std::vector<std::string> transfer_names() {
  std::vector<std::string> names;
  for (const auto& t : registry()) names.push_back(t.name);
  return names;
}

std::string_view perturbation_name(Perturbation p) {
  switch (p) {
    case Perturbation::none:
      return "none";
    case Perturbation::n_eighth:
      return "x/n^(1/8)";
    case Perturbation::root_n:
      return "x/sqrt(n)";
  }
  return "none";
}

Perturbation parse_perturbation(std::string_view name) {
  if (name == "none") return Perturbation::none;
  if (name == "x/n^(1/8)" || name == "n_eighth") return Perturbation::n_eighth;
  if (name == "x/sqrt(n)" || name == "root_n") return Perturbation::root_n;
  throw ConfigError("unknown perturbation '" + std::string(name) + "' (expected none, x/n^(1/8), x/sqrt(n))");
}

Transfer perturbed(const Transfer& base, Perturbation p, std::size_t n) {
  if (p == Perturbation::none) return base;
  const double dn = static_cast<double>(n);
  const double scale = p == Perturbation::n_eighth ? std::pow(dn, -0.125) : 1.0 / std::sqrt(dn);
  Transfer out;
  out.name = base.name + "+" + std::string(perturbation_name(p));
  out.value = [f = base.value, scale](double x) { return f(x) + scale * x; };
  out.derivative = [df = base.derivative, scale](double x) { return df(x) + scale; };
  return out;
}

void require_increasing(const Transfer& t, double lo, double hi) {
  for (double x : linear_grid(lo, hi, 1001)) {
    if (!(t.derivative(x) > 0.0)) {
      // x^3 has a single stationary point at 0; it is still strictly increasing.
      if (x == 0.0 && t.name == "x^3") continue;
      throw ConfigError("transfer '" + t.name + "' is not strictly increasing near x = " + format_number(x));
    }
  }
}

Dependence Dependence::moving_average(std::size_t q, double ratio) {
  Dependence d;
  d.coefficients.resize(q + 1);
  double a = 1.0;
  for (auto& c : d.coefficients) {
    c = a;
    a *= ratio;
  }
  return d;
}

KnownDistribution marginal_law(const DGPConfig& config) {
  if (config.dependence.iid()) return config.input_law;
  if (config.input_law.family() != Family::normal) {
    throw ConfigError("MA data requires normal innovations (the marginal must be known exactly)");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double a : config.dependence.coefficients) {
    sum += a;
    sum_sq += a * a;
  }
  const auto prm = config.input_law.params();
  return KnownDistribution::normal(prm[0] * sum, prm[1] * std::sqrt(sum_sq));
}

Transfer effective_transfer(const DGPConfig& config) {
  return perturbed(transfer(config.transfer), config.perturbation, config.n);
}

Series generate(const DGPConfig& config) {
  auto engine = stream_engine(config.seed, 0);
  return generate(config, engine);
}

Series generate(const DGPConfig& config, Engine& engine) {
  const Transfer g = effective_transfer(config);
  Series s;
  s.z.reserve(config.n);
  s.y.reserve(config.n);
  if (config.dependence.iid()) {
    while (s.z.size() < config.n) {
      const double z = draw(config.input_law, engine);
      const double y = g.value(z);
      if (!std::isfinite(y)) continue;
      s.z.push_back(z);
      s.y.push_back(y);
    }
    return s;
  }
  marginal_law(config);  // validates the innovation family
  const auto& a = config.dependence.coefficients;
  const std::size_t q = config.dependence.order();
  // q presample innovations, then one per observation.
  std::vector<double> eps(config.n + q);
  for (double& e : eps) e = draw(config.input_law, engine);
  for (std::size_t i = 0; i < config.n; ++i) {
    double z = 0.0;
    for (std::size_t k = 0; k <= q; ++k) z += a[k] * eps[i + q - k];
    const double y = g.value(z);
    if (!std::isfinite(y)) {
      throw DomainError("generate: transfer '" + g.name + "' undefined at Z = " + format_number(z));
    }
    s.z.push_back(z);
    s.y.push_back(y);
  }
  return s;
}

double ExperimentReport::at(std::string_view row, std::string_view column) const {
  for (const auto& c : cells) {
    if (c.row == row && c.column == column) return c.value;
  }
  throw ConfigError("report has no cell (" + std::string(row) + ", " + std::string(column) + ")");
}

void write_report_csv(std::ostream& os, const ExperimentReport& report, char delim) {
  os << "# monofn report v1\n";
  os << "# kind: " << report.kind << "\n";
  os << "# replications: " << report.replications << "\n";
  os << "# seed: " << report.seed << "\n";
  os << "row" << delim << "column" << delim << "value\n";
  for (const auto& c : report.cells) {
    os << c.row << delim << c.column << delim << format_number(c.value) << "\n";
  }
}

void write_report_json(std::ostream& os, const ExperimentReport& report) {
  os << "{\"schema\":\"monofn.report/1\",\"kind\":\"" << json_escape(report.kind)
     << "\",\"replications\":" << report.replications << ",\"seed\":" << report.seed
     << ",\"runtime_seconds\":" << format_number(report.runtime_seconds) << ",\"cells\":[";
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& c = report.cells[i];
    os << (i ? "," : "") << "{\"row\":\"" << json_escape(c.row) << "\",\"column\":\"" << json_escape(c.column)
       << "\",\"value\":" << format_number(c.value) << "}";
  }
  os << "]}\n";
}

std::string_view coverage_method_name(CoverageMethod m) {
  switch (m) {
    case CoverageMethod::pointwise:
      return "pointwise";
    case CoverageMethod::band:
      return "band";
    case CoverageMethod::subsample:
      return "subsample";
  }
  return "pointwise";
}

CoverageMethod parse_coverage_method(std::string_view name) {
  if (name == "pointwise" || name == "ci") return CoverageMethod::pointwise;
  if (name == "band") return CoverageMethod::band;
  if (name == "subsample") return CoverageMethod::subsample;
  throw ConfigError("unknown coverage method '" + std::string(name) + "' (expected pointwise, band, subsample)");
}

ExperimentReport run_coverage_study(const DGPConfig& config, const std::vector<double>& xs,
                                    const CoverageOptions& options) {
  if (xs.empty()) throw ConfigError("run_coverage_study: empty evaluation grid");
  const auto start = std::chrono::steady_clock::now();
  const auto z_law = marginal_law(config);
  const Transfer g = effective_transfer(config);
  const std::size_t reps = options.replications;
  const std::size_t m = xs.size();

  // covered[rep * m + j]; flagged[rep].
  std::vector<unsigned char> covered(reps * m, 0);
  std::vector<std::size_t> flagged(reps, 0);
  parallel_for(
      reps,
      [&](std::size_t rep) {
        auto engine = stream_engine(config.seed, rep);
        const Sample y(generate(config, engine).y);
        unsigned char* row = covered.data() + rep * m;
        switch (options.method) {
          case CoverageMethod::pointwise:
            for (std::size_t j = 0; j < m; ++j) {
              const auto ci = pointwise_ci(y, z_law, xs[j], options.alpha);
              const double truth = g.value(xs[j]);
              row[j] = ci.lo <= truth && truth <= ci.hi;
            }
            break;
          case CoverageMethod::band: {
            const auto band =
                confidence_band(y, z_law, options.band_lo, options.band_hi, xs, options.alpha, options.kernel);
            for (std::size_t j = 0; j < m; ++j) {
              const double truth = g.value(xs[j]);
              row[j] = band.band_lo[j] <= truth && truth <= band.band_hi[j];
            }
            flagged[rep] = band.flagged_count();
            break;
          }
          case CoverageMethod::subsample:
            for (std::size_t j = 0; j < m; ++j) {
              const auto ci = subsample_ci(y, z_law, xs[j], options.alpha,
                                           options.block ? std::optional<std::size_t>(options.block) : std::nullopt);
              const double truth = g.value(xs[j]);
              row[j] = ci.ci_lo <= truth && truth <= ci.ci_hi;
            }
            break;
        }
      },
      options.threads);

  ExperimentReport report;
  report.kind = "coverage/" + std::string(coverage_method_name(options.method));
  report.replications = reps;
  report.seed = config.seed;
  const double dr = static_cast<double>(std::max<std::size_t>(reps, 1));
  std::size_t all = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    all += std::all_of(covered.begin() + rep * m, covered.begin() + (rep + 1) * m, [](unsigned char c) { return c; });
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t hits = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) hits += covered[rep * m + j];
    report.cells.push_back({g.name, format_number(xs[j]), static_cast<double>(hits) / dr});
  }
  report.cells.push_back({g.name, "all", static_cast<double>(all) / dr});
  if (options.method == CoverageMethod::band) {
    std::size_t total = 0;
    for (auto f : flagged) total += f;
    report.cells.push_back({g.name, "flagged_mean", static_cast<double>(total) / dr});
  }
  report.runtime_seconds = seconds_since(start);
  return report;
}

ExperimentReport run_test_table(const std::vector<std::string>& h_list,
                                const std::vector<Perturbation>& perturbations, std::size_t n,
                                const TestTableOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto z_law = KnownDistribution::normal(0.0, 1.0);
  ExperimentReport report;
  report.kind = "test_table/n=" + std::to_string(n);
  report.replications = options.repetitions;
  report.seed = options.seed;

  std::uint64_t cell_index = 0;
  for (const auto& h_name : h_list) {
    const Transfer& h = transfer(h_name);
    const auto hyp = h.as_hypothesis();
    for (Perturbation p : perturbations) {
      DGPConfig config;
      config.input_law = z_law;
      config.transfer = h.name;
      config.perturbation = p;
      config.n = n;
      std::uint64_t state = options.seed ^ (0x632be59bd9b4e019ULL * ++cell_index);
      config.seed = splitmix64(state);
      require_increasing(effective_transfer(config), -2.0, 2.0);

      std::vector<unsigned char> correct(options.repetitions, 0);
      parallel_for(
          options.repetitions,
          [&](std::size_t rep) {
            auto engine = stream_engine(config.seed, rep);
            const Sample y(generate(config, engine).y);
            const auto result = test(y, z_law, hyp, options.alpha);
            correct[rep] = (p == Perturbation::none) ? !result.reject : result.reject;
          },
          options.threads);
      std::size_t hits = 0;
      for (auto c : correct) hits += c;
      report.cells.push_back({h.name, std::string(perturbation_name(p)),
                              static_cast<double>(hits) / static_cast<double>(options.repetitions)});
    }
  }
  report.runtime_seconds = seconds_since(start);
  return report;
}

}  // namespace monofn

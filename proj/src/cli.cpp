#include "monofn/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "monofn/dataset.hpp"
#include "monofn/density_band.hpp"
#include "monofn/errors.hpp"
#include "monofn/estimator.hpp"
#include "monofn/gof_test.hpp"
#include "monofn/simulate.hpp"
#include "monofn/subsampling.hpp"

namespace monofn::cli {

namespace {

using nlohmann::json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  if (!text.empty() && text[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == delim) {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

// Rethrows library argument errors as usage errors naming the flag.
template <typename F>
auto for_flag(const std::string& flag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw UsageError(flag + ": " + e.what());
  } catch (const DomainError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

CLI::Validator open_interval(double lo, double hi) {
  return CLI::Validator(
      [lo, hi](std::string& s) -> std::string {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !(v > lo && v < hi)) {
          return "must lie in (" + num(lo) + ", " + num(hi) + "), got " + s;
        }
        return {};
      },
      "in (" + num(lo) + ", " + num(hi) + ")");
}

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 0;
};

Grid parse_grid(const std::string& text, const std::string& flag) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw UsageError(flag + ": expected lo,hi,points");
  Grid g;
  g.lo = parse_double(parts[0], flag);
  g.hi = parse_double(parts[1], flag);
  const double pts = parse_double(parts[2], flag);
  if (!(pts >= 1.0) || pts != std::floor(pts)) throw UsageError(flag + ": points must be a positive integer");
  g.points = static_cast<std::size_t>(pts);
  if (g.points > 1 && !(g.lo < g.hi)) throw UsageError(flag + ": need lo < hi");
  return g;
}

Dependence parse_ma(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("--ma: expected q,ratio");
  const double q = parse_double(parts[0], "--ma");
  if (!(q >= 0.0) || q != std::floor(q)) throw UsageError("--ma: q must be a non-negative integer");
  return Dependence::moving_average(static_cast<std::size_t>(q), parse_double(parts[1], "--ma"));
}

struct Output {
  std::ofstream file;
  std::ostream* os;

  Output(const std::string& path, std::ostream& fallback) : os(&fallback) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw DataError("cannot write '" + path + "'");
      os = &file;
    }
  }
  std::ostream& operator*() { return *os; }
};

// Options shared by the data-driven commands.
struct DataArgs {
  std::string path;
  std::string y_col = "0";
  std::string z_col;
  std::string delim = ",";
  bool header = false;

  void add(CLI::App* app) {
    app->add_option("--data", path, "Delimited data file")->required();
    app->add_option("--y-col", y_col, "Y column: 0-based index or header name")->capture_default_str();
    app->add_option("--z-col", z_col, "Z column (used by <family>:fit)");
    app->add_option("--delim", delim, "Field delimiter")->capture_default_str();
    app->add_flag("--header", header, "First line holds column names");
  }

  Dataset load() const {
    if (delim.size() != 1) throw UsageError("--delim: expected a single character");
    CsvOptions o;
    o.delimiter = delim[0];
    o.header = header;
    const auto y = for_flag("--y-col", [&] { return ColumnSelector::parse(y_col); });
    std::optional<ColumnSelector> z;
    if (!z_col.empty()) z = for_flag("--z-col", [&] { return ColumnSelector::parse(z_col); });
    return read_dataset(path, y, z, o);
  }
};

// A fit that fails on the data (e.g. a non-positive value under gamma) is a data error.
KnownDistribution fit_checked(const DistSpec& spec, std::span<const double> data) {
  try {
    return resolve_dist(spec, data);
  } catch (const DomainError& e) {
    throw DataError(e.what());
  }
}

KnownDistribution dist_for(const std::string& text, const Dataset& d) {
  const auto spec = for_flag("--dist", [&] { return parse_dist_spec(text); });
  std::span<const double> fit_on = d.z.empty() ? std::span<const double>(d.y) : std::span<const double>(d.z);
  return fit_checked(spec, fit_on);
}

void require_xs_inside(const KnownDistribution& z, const std::vector<double>& xs, const std::string& flag) {
  for (double x : xs) for_flag(flag, [&] { require_inside_support(z, x, "estimate"); });
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  DataArgs data;
  std::string dist;
  std::optional<double> x;
  std::string grid;
  std::string pgrid = "0.01,0.99,200";
  double alpha = 0.01;
  bool band = false;
  std::optional<double> bandwidth;
  std::string out;
  bool as_json = false;
};

int do_estimate(const EstimateArgs& a, std::ostream& stdout_) {
  const auto d = a.data.load();
  const auto z = dist_for(a.dist, d);
  const Sample y(d.y);
  std::vector<double> xs;
  std::string where = "--pgrid";
  if (a.x) {
    xs = {*a.x};
    where = "--x";
  } else if (!a.grid.empty()) {
    const auto g = parse_grid(a.grid, "--grid");
    xs = linear_grid(g.lo, g.hi, g.points);
    where = "--grid";
  } else {
    const auto g = parse_grid(a.pgrid, "--pgrid");
    if (!(g.lo > 0.0 && g.hi < 1.0)) throw UsageError("--pgrid: probabilities must lie in (0, 1)");
    xs = probability_grid(z, g.lo, g.hi, g.points);
  }
  require_xs_inside(z, xs, where);
  const auto est = estimate_with_ci(y, z, xs, a.alpha);

  std::optional<BandResult> band;
  if (a.band) {
    if (xs.size() < 2) throw UsageError("--band: needs a grid of at least two points");
    KernelSpec spec;
    spec.bandwidth = a.bandwidth;
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    band = for_flag("--band", [&] { return confidence_band(y, z, *lo, *hi, xs, a.alpha, spec); });
  }

  Output out(a.out, stdout_);
  if (a.as_json) {
    json j;
    j["schema"] = "monofn.estimate/1";
    j["dist"] = z.describe();
    j["n"] = y.size();
    j["level"] = est.level;
    json rows = json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      json r = {{"x", xs[i]},
                {"ghat", est.ghat[i]},
                {"ci_lo", est.ci_lo[i]},
                {"ci_hi", est.ci_hi[i]},
                {"clamped", static_cast<bool>(est.clamped[i])}};
      if (band) {
        r["band_lo"] = band->band_lo[i];
        r["band_hi"] = band->band_hi[i];
        r["flagged"] = band->flags[i];
      }
      rows.push_back(r);
    }
    j["rows"] = rows;
    if (band) {
      j["band"] = {{"critical", band->critical},
                   {"bandwidth", band->bandwidth},
                   {"density_floor", band->density_floor},
                   {"flagged_count", band->flagged_count()}};
    }
    *out << j.dump(2) << "\n";
    return ok;
  }
  auto& os = *out;
  os << "# monofn estimate v1\n";
  os << "# dist: " << z.describe() << "\n";
  os << "# n: " << y.size() << "\n";
  os << "# level: " << num(est.level) << "\n";
  if (d.rows_dropped) os << "# dropped_rows: " << d.rows_dropped << "\n";
  if (band) {
    os << "# band_critical: " << num(band->critical) << "\n";
    os << "# bandwidth: " << num(band->bandwidth) << "\n";
    os << "# flagged: " << band->flagged_count() << "\n";
  }
  os << "x,ghat,ci_lo,ci_hi" << (band ? ",band_lo,band_hi,flagged" : "") << "\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    os << num(xs[i]) << ',' << num(est.ghat[i]) << ',' << num(est.ci_lo[i]) << ',' << num(est.ci_hi[i]);
    if (band) os << ',' << num(band->band_lo[i]) << ',' << num(band->band_hi[i]) << ',' << band->flags[i];
    os << "\n";
  }
  return ok;
}

// -------------------------------------------------------------------- test

struct TestArgs {
  DataArgs data;
  std::string dist;
  std::string h = "identity";
  double alpha = 0.15;
  std::size_t mc_reps = 0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool as_json = false;
};

int do_test(const TestArgs& a, std::ostream& out) {
  const auto hyp = for_flag("--h", [&] { return transfer(a.h).as_hypothesis(); });
  if (a.mc_reps != 0 && a.mc_reps < 99) throw UsageError("--mc-reps: need at least 99 replications");
  const auto d = a.data.load();
  const Sample y(d.y);
  const auto spec = for_flag("--dist", [&] { return parse_dist_spec(a.dist); });
  for_flag("--data", [&] { return trim_level(y.size()); });

  std::vector<std::pair<std::string, std::string>> fields;
  std::string dist_text;
  if (a.mc_reps) {
    const auto r = monte_carlo_p_value(y, spec.family, hyp, a.mc_reps, a.seed, a.threads);
    dist_text = r.fitted ? r.fitted->describe() : family_name(spec.family);
    const bool reject = r.p_value <= a.alpha;
    fields = {{"statistic", num(r.observed)},
              {"p_value", num(r.p_value)},
              {"decision", reject ? "reject" : "accept"},
              {"level", num(1.0 - a.alpha)},
              {"method", "monte_carlo"},
              {"replications", std::to_string(r.replications)},
              {"exceedances", std::to_string(r.exceedances)},
              {"fit_failures", std::to_string(r.fit_failures)},
              {"seed", std::to_string(a.seed)}};
  } else {
    std::span<const double> fit_on = d.z.empty() ? std::span<const double>(d.y) : std::span<const double>(d.z);
    const auto z = fit_checked(spec, fit_on);
    dist_text = z.describe();
    const auto r = for_flag("--h", [&] { return test(y, z, hyp, a.alpha); });
    fields = {{"statistic", num(r.statistic)}, {"critical", num(r.critical)},
              {"p_value", num(r.p_value)},     {"decision", r.reject ? "reject" : "accept"},
              {"level", num(r.level)},         {"trim", num(r.trim)},
              {"method", "asymptotic"}};
  }
  if (a.as_json) {
    json j;
    j["schema"] = "monofn.test/1";
    j["h"] = hyp.name;
    j["dist"] = dist_text;
    j["n"] = y.size();
    for (const auto& [k, v] : fields) {
      if (k == "decision" || k == "method") {
        j[k] = v;
      } else {
        j[k] = parse_double(v, k);
      }
    }
    out << j.dump(2) << "\n";
    return ok;
  }
  out << "# monofn test v1\n";
  out << "# h: " << hyp.name << "\n";
  out << "# dist: " << dist_text << "\n";
  out << "# n: " << y.size() << "\n";
  out << "field,value\n";
  for (const auto& [k, v] : fields) out << k << ',' << v << "\n";
  return ok;
}

// ------------------------------------------------------------ subsample-ci

struct SubsampleArgs {
  DataArgs data;
  std::string dist;
  double x = 0.0;
  double alpha = 0.01;
  std::optional<std::size_t> block;
  bool as_json = false;
};

int do_subsample(const SubsampleArgs& a, std::ostream& out) {
  const auto d = a.data.load();
  const auto z = dist_for(a.dist, d);
  const Sample y(d.y);
  if (a.block && (*a.block < 2 || *a.block >= y.size())) {
    throw UsageError("--block: must satisfy 2 <= b < n = " + std::to_string(y.size()));
  }
  if (!a.block && default_block_length(y.size()) >= y.size()) {
    throw UsageError("--data: too few observations for subsampling");
  }
  for_flag("--x", [&] { require_inside_support(z, a.x, "subsample-ci"); });
  const auto r = subsample_ci(y, z, a.x, a.alpha, a.block);
  if (a.as_json) {
    json j = {{"schema", "monofn.subsample/1"}, {"dist", z.describe()}, {"x", r.x},
              {"ghat", r.ghat},                 {"ci_lo", r.ci_lo},         {"ci_hi", r.ci_hi},
              {"d_quantile", r.d_quantile},     {"b", r.b},                 {"n", r.n},
              {"windows", r.windows},           {"level", r.level}};
    out << j.dump(2) << "\n";
    return ok;
  }
  out << "# monofn subsample-ci v1\n";
  out << "# dist: " << z.describe() << "\n";
  out << "x,ghat,ci_lo,ci_hi,d_quantile,b,n,windows,level\n";
  out << num(r.x) << ',' << num(r.ghat) << ',' << num(r.ci_lo) << ',' << num(r.ci_hi) << ',' << num(r.d_quantile)
      << ',' << r.b << ',' << r.n << ',' << r.windows << ',' << num(r.level) << "\n";
  return ok;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  DataArgs data;
  std::string family = "gamma";
  std::string qq_out;
  bool as_json = false;
};

int do_fit(const FitArgs& a, std::ostream& out) {
  const Family fam = for_flag("--family", [&] { return parse_family(a.family); });
  const auto d = a.data.load();
  DistSpec spec;
  spec.family = fam;
  spec.fit = true;
  const auto fitted = fit_checked(spec, d.y);
  std::vector<double> sorted = d.y;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> ps(sorted.size());
  std::vector<double> qs(sorted.size());
  double max_dev = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ps[i] = (static_cast<double>(i) + 0.5) / n;
    qs[i] = quantile(fitted, ps[i]);
    max_dev = std::max(max_dev, std::abs(sorted[i] - qs[i]) / fitted.stddev());
  }
  const auto prm = fitted.params();
  std::vector<std::pair<std::string, double>> params;
  switch (fam) {
    case Family::gamma:
      params = {{"shape", prm[0]}, {"rate", prm[1]}, {"scale", 1.0 / prm[1]}};
      break;
    case Family::normal:
      params = {{"mean", prm[0]}, {"sd", prm[1]}};
      break;
    case Family::uniform:
      params = {{"lo", prm[0]}, {"hi", prm[1]}};
      break;
  }

  auto write_qq = [&](std::ostream& os) {
    os << "# monofn qq v1\n";
    os << "# dist: " << fitted.describe() << "\n";
    os << "i,p,sample,fitted\n";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      os << i + 1 << ',' << num(ps[i]) << ',' << num(sorted[i]) << ',' << num(qs[i]) << "\n";
    }
  };
  if (!a.qq_out.empty()) {
    Output q(a.qq_out, out);
    write_qq(*q);
  }
  if (a.as_json) {
    json j = {{"schema", "monofn.fit/1"}, {"family", family_name(fam)}, {"dist", fitted.describe()},
              {"n", sorted.size()},        {"qq_max_std_dev", max_dev}};
    for (const auto& [k, v] : params) j[k] = v;
    out << j.dump(2) << "\n";
    return ok;
  }
  out << "# monofn fit v1\n";
  out << "field,value\n";
  out << "family," << family_name(fam) << "\n";
  for (const auto& [k, v] : params) out << k << ',' << num(v) << "\n";
  out << "n," << sorted.size() << "\n";
  if (d.rows_dropped) out << "dropped_rows," << d.rows_dropped << "\n";
  out << "qq_max_std_dev," << num(max_dev) << "\n";
  if (a.qq_out.empty()) write_qq(out);
  return ok;
}

// ---------------------------------------------------------------- simulate

struct TableArgs {
  std::uint64_t seed = 1;
  std::size_t reps = 200;
  std::size_t n = 0;
  double alpha = 0.15;
  unsigned threads = 0;
  std::string out;
  bool as_json = false;
};

void emit_report(const ExperimentReport& r, const std::string& path, bool as_json, std::ostream& stdout_) {
  Output out(path, stdout_);
  if (as_json) {
    write_report_json(*out, r);
  } else {
    write_report_csv(*out, r);
  }
}

int do_table(const TableArgs& a, std::ostream& out) {
  if (a.reps == 0) throw UsageError("--reps: must be positive");
  TestTableOptions o;
  o.alpha = a.alpha;
  o.repetitions = a.reps;
  o.seed = a.seed;
  o.threads = a.threads;
  const auto r = for_flag("--n", [&] {
    return run_test_table({"(x+4)^2", "log(x+5)", "exp(x)"},
                          {Perturbation::none, Perturbation::n_eighth, Perturbation::root_n}, a.n, o);
  });
  emit_report(r, a.out, a.as_json, out);
  return ok;
}

struct CoverageArgs {
  std::string method = "pointwise";
  std::string transfer = "(x+4)^2";
  std::string pert = "none";
  std::string input = "normal:0,1";
  std::string ma;
  std::size_t n = 1000;
  std::size_t reps = 500;
  double alpha = 0.01;
  std::uint64_t seed = 1;
  std::string grid;
  std::optional<double> band_lo;
  std::optional<double> band_hi;
  std::optional<double> bandwidth;
  std::size_t block = 0;
  unsigned threads = 0;
  std::string out;
  bool as_json = false;
};

DGPConfig dgp_from(const std::string& input, const std::string& ma, const std::string& t, const std::string& pert,
                   std::size_t n, std::uint64_t seed) {
  DGPConfig c;
  const auto spec = for_flag("--input", [&] { return parse_dist_spec(input); });
  if (spec.fit) throw UsageError("--input: a fully specified law is required");
  c.input_law = *spec.dist;
  if (!ma.empty()) c.dependence = parse_ma(ma);
  c.transfer = for_flag("--transfer", [&] { return transfer(t).name; });
  c.perturbation = for_flag("--pert", [&] { return parse_perturbation(pert); });
  if (n < 2) throw UsageError("--n: need at least two observations");
  c.n = n;
  c.seed = seed;
  for_flag("--input", [&] { return marginal_law(c); });
  return c;
}

int do_coverage(const CoverageArgs& a, std::ostream& out) {
  const auto c = dgp_from(a.input, a.ma, a.transfer, a.pert, a.n, a.seed);
  CoverageOptions o;
  o.method = for_flag("--method", [&] { return parse_coverage_method(a.method); });
  o.alpha = a.alpha;
  o.replications = a.reps;
  if (a.reps == 0) throw UsageError("--reps: must be positive");
  o.block = a.block;
  o.threads = a.threads;
  o.kernel.bandwidth = a.bandwidth;
  const std::string default_grid = o.method == CoverageMethod::band ? "-2,2,401" : "-1,1,3";
  const auto g = parse_grid(a.grid.empty() ? default_grid : a.grid, "--grid");
  const auto xs = linear_grid(g.lo, g.hi, g.points);
  require_xs_inside(marginal_law(c), xs, "--grid");
  o.band_lo = a.band_lo.value_or(g.lo);
  o.band_hi = a.band_hi.value_or(g.hi);
  if (o.method == CoverageMethod::band && !(o.band_lo < o.band_hi)) {
    throw UsageError("--band-lo/--band-hi: need band_lo < band_hi");
  }
  if (o.method == CoverageMethod::subsample) {
    const std::size_t b = a.block ? a.block : default_block_length(a.n);
    if (b < 2 || b >= a.n) throw UsageError("--block: must satisfy 2 <= b < n");
  }
  const auto r = for_flag("--grid", [&] { return run_coverage_study(c, xs, o); });
  emit_report(r, a.out, a.as_json, out);
  return ok;
}

struct GenerateArgs {
  std::string transfer = "identity";
  std::string pert = "none";
  std::string input = "normal:0,1";
  std::string ma;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int do_generate(const GenerateArgs& a, std::ostream& stdout_) {
  const auto c = dgp_from(a.input, a.ma, a.transfer, a.pert, a.n, a.seed);
  const auto s = for_flag("--transfer", [&] { return generate(c); });
  Output out(a.out, stdout_);
  auto& os = *out;
  os << "# monofn series v1\n";
  os << "# transfer: " << effective_transfer(c).name << "\n";
  os << "# marginal: " << marginal_law(c).describe() << "\n";
  os << "# seed: " << c.seed << "\n";
  os << "z,y\n";
  os.precision(17);
  for (std::size_t i = 0; i < s.z.size(); ++i) os << s.z[i] << ',' << s.y[i] << "\n";
  return ok;
}

}  // namespace

DistSpec parse_dist_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("expected family:params, got '" + text + "'");
  DistSpec s;
  s.family = parse_family(text.substr(0, colon));
  const std::string rest = text.substr(colon + 1);
  if (rest == "fit") {
    s.fit = true;
    return s;
  }
  const auto parts = split(rest, ',');
  if (parts.size() != 2) throw ConfigError("expected two parameters in '" + text + "'");
  auto value = [&](const std::string& p, std::string& key) {
    const auto eq = p.find('=');
    key = eq == std::string::npos ? "" : p.substr(0, eq);
    const std::string v = eq == std::string::npos ? p : p.substr(eq + 1);
    try {
      return parse_double(v, "parameter");
    } catch (const UsageError& e) {
      throw ConfigError(e.what());
    }
  };
  std::string k0;
  std::string k1;
  const double a = value(parts[0], k0);
  const double b = value(parts[1], k1);
  switch (s.family) {
    case Family::normal:
      if (!k0.empty() || !k1.empty()) throw ConfigError("normal takes mean,sd");
      s.dist = KnownDistribution::normal(a, b);
      break;
    case Family::uniform:
      if (!k0.empty() || !k1.empty()) throw ConfigError("uniform takes lo,hi");
      s.dist = KnownDistribution::uniform(a, b);
      break;
    case Family::gamma:
      if (!k0.empty() && k0 != "shape") throw ConfigError("gamma: first parameter is the shape");
      if (k1.empty() || k1 == "rate") {
        s.dist = KnownDistribution::gamma(a, b);
      } else if (k1 == "scale") {
        if (!(b > 0.0)) throw ConfigError("gamma: scale must be positive");
        s.dist = KnownDistribution::gamma(a, 1.0 / b);
      } else {
        throw ConfigError("gamma: second parameter is rate= or scale=");
      }
      break;
  }
  return s;
}

KnownDistribution resolve_dist(const DistSpec& spec, std::span<const double> fit_data) {
  if (!spec.fit) return *spec.dist;
  return fit_family(spec.family, fit_data);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimation and testing of a monotone transfer function Y = g(Z) with Z of known law", "monofn"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all", "Expand all help");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Plug-in estimate with pointwise intervals and optional band");
  est.data.add(c_est);
  c_est->add_option("--dist", est.dist, "Law of Z: family:params or family:fit")->required();
  auto* o_x = c_est->add_option("--x", est.x, "Single evaluation point");
  c_est->add_option("--grid", est.grid, "Linear grid lo,hi,points")->excludes(o_x);
  c_est->add_option("--pgrid", est.pgrid, "Probability grid u_lo,u_hi,points")->capture_default_str();
  c_est->add_option("--alpha", est.alpha, "1 - confidence level")->check(open_interval(0.0, 0.5))->capture_default_str();
  c_est->add_flag("--band", est.band, "Add the simultaneous band over the grid");
  c_est->add_option("--bandwidth", est.bandwidth, "Kernel bandwidth (default n^(-1/6))")
      ->check(open_interval(0.0, INFINITY));
  c_est->add_option("--out", est.out, "Output file (default stdout)");
  c_est->add_flag("--json", est.as_json, "JSON output");

  TestArgs tst;
  auto* c_test = app.add_subcommand("test", "Goodness-of-fit test of H0: g = h");
  tst.data.add(c_test);
  c_test->add_option("--dist", tst.dist, "Law of Z, or the family refitted under --mc-reps")->required();
  c_test->add_option("--h", tst.h, "Hypothesised transfer: " + [] {
    std::string s;
    for (const auto& n : transfer_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }())->capture_default_str();
  c_test->add_option("--alpha", tst.alpha, "Significance level")->check(open_interval(0.0, 1.0))->capture_default_str();
  c_test->add_option("--mc-reps", tst.mc_reps, "Monte-Carlo replications (0: asymptotic p-value)");
  c_test->add_option("--seed", tst.seed, "Root seed")->capture_default_str();
  c_test->add_option("--threads", tst.threads, "Worker threads (0: all cores)");
  c_test->add_flag("--json", tst.as_json, "JSON output");

  SubsampleArgs sub;
  auto* c_sub = app.add_subcommand("subsample-ci", "Subsampling interval for dependent data");
  sub.data.add(c_sub);
  c_sub->add_option("--dist", sub.dist, "Marginal law of Z")->required();
  c_sub->add_option("--x", sub.x, "Evaluation point")->required();
  c_sub->add_option("--alpha", sub.alpha, "1 - confidence level")->check(open_interval(0.0, 1.0))->capture_default_str();
  c_sub->add_option("--block", sub.block, "Block length b (default ceil(n^(4/5)))");
  c_sub->add_flag("--json", sub.as_json, "JSON output");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Maximum-likelihood fit with Q-Q pairs");
  fit.data.add(c_fit);
  c_fit->add_option("--family", fit.family, "gamma, normal or uniform")->capture_default_str();
  c_fit->add_option("--qq-out", fit.qq_out, "Write Q-Q pairs here instead of stdout");
  c_fit->add_flag("--json", fit.as_json, "JSON output (Q-Q pairs only with --qq-out)");

  auto* c_sim = app.add_subcommand("simulate", "Simulation drivers");
  c_sim->require_subcommand(1);
  TableArgs t2;
  TableArgs t3;
  t2.n = 1000;
  t3.n = 10000;
  auto add_table = [&](const char* name, const char* help, TableArgs& t) {
    auto* c = c_sim->add_subcommand(name, help);
    c->add_option("--seed", t.seed, "Root seed")->capture_default_str();
    c->add_option("--reps", t.reps, "Repetitions per cell")->capture_default_str();
    c->add_option("--n", t.n, "Sample size")->capture_default_str();
    c->add_option("--alpha", t.alpha, "Test level alpha")->check(open_interval(0.0, 1.0))->capture_default_str();
    c->add_option("--threads", t.threads, "Worker threads (0: all cores)");
    c->add_option("--out", t.out, "Output file");
    c->add_flag("--json", t.as_json, "JSON output");
    return c;
  };
  auto* c_t2 = add_table("table2", "Correct-test ratios, n = 1000", t2);
  auto* c_t3 = add_table("table3", "Correct-test ratios, n = 10000", t3);

  CoverageArgs cov;
  auto* c_cov = c_sim->add_subcommand("coverage", "Coverage of intervals or bands");
  c_cov->add_option("--method", cov.method, "pointwise, band or subsample")->capture_default_str();
  c_cov->add_option("--transfer", cov.transfer, "True transfer g")->capture_default_str();
  c_cov->add_option("--pert", cov.pert, "none, x/n^(1/8) or x/sqrt(n)")->capture_default_str();
  c_cov->add_option("--input", cov.input, "Law of Z (innovations for --ma)")->capture_default_str();
  c_cov->add_option("--ma", cov.ma, "Moving average q,ratio (coefficients ratio^k)");
  c_cov->add_option("--n", cov.n, "Sample size")->capture_default_str();
  c_cov->add_option("--reps", cov.reps, "Replications")->capture_default_str();
  c_cov->add_option("--alpha", cov.alpha, "1 - confidence level")->check(open_interval(0.0, 0.5))->capture_default_str();
  c_cov->add_option("--seed", cov.seed, "Root seed")->capture_default_str();
  c_cov->add_option("--grid", cov.grid, "Linear grid lo,hi,points");
  c_cov->add_option("--band-lo", cov.band_lo, "Band interval start c");
  c_cov->add_option("--band-hi", cov.band_hi, "Band interval end d");
  c_cov->add_option("--bandwidth", cov.bandwidth, "Kernel bandwidth")->check(open_interval(0.0, INFINITY));
  c_cov->add_option("--block", cov.block, "Subsampling block length");
  c_cov->add_option("--threads", cov.threads, "Worker threads (0: all cores)");
  c_cov->add_option("--out", cov.out, "Output file");
  c_cov->add_flag("--json", cov.as_json, "JSON output");

  GenerateArgs gen;
  auto* c_gen = c_sim->add_subcommand("generate", "Write one simulated series as z,y");
  c_gen->add_option("--transfer", gen.transfer, "Transfer g")->capture_default_str();
  c_gen->add_option("--pert", gen.pert, "Perturbation added to g")->capture_default_str();
  c_gen->add_option("--input", gen.input, "Law of Z (innovations for --ma)")->capture_default_str();
  c_gen->add_option("--ma", gen.ma, "Moving average q,ratio");
  c_gen->add_option("--n", gen.n, "Sample size")->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "Root seed")->capture_default_str();
  c_gen->add_option("--out", gen.out, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (c_est->parsed()) return do_estimate(est, out);
    if (c_test->parsed()) return do_test(tst, out);
    if (c_sub->parsed()) return do_subsample(sub, out);
    if (c_fit->parsed()) return do_fit(fit, out);
    if (c_t2->parsed()) return do_table(t2, out);
    if (c_t3->parsed()) return do_table(t3, out);
    if (c_cov->parsed()) return do_coverage(cov, out);
    if (c_gen->parsed()) return do_generate(gen, out);
  } catch (const UsageError& e) {
    err << "monofn: " << e.what() << "\n";
    return usage;
  } catch (const ConfigError& e) {
    err << "monofn: " << e.what() << "\n";
    return usage;
  } catch (const DataError& e) {
    err << "monofn: data error: " << e.what() << "\n";
    return data;
  } catch (const ConvergenceError& e) {
    err << "monofn: numeric error: " << e.what() << "\n";
    return numeric;
  } catch (const DomainError& e) {
    err << "monofn: " << e.what() << "\n";
    return usage;
  }
  err << "monofn: no command\n";
  return usage;
}

}  // namespace monofn::cli

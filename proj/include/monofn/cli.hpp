#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monofn/distributions.hpp"

namespace monofn::cli {

enum ExitCode { ok = 0, usage = 2, data = 3, numeric = 4 };

// --dist value: "normal:mu,sigma", "uniform:a,b", "gamma:shape,rate",
// "gamma:shape,rate=r", "gamma:shape,scale=s", or "<family>:fit".
struct DistSpec {
  Family family = Family::normal;
  bool fit = false;
  std::optional<KnownDistribution> dist;
};

DistSpec parse_dist_spec(const std::string& text);
KnownDistribution resolve_dist(const DistSpec& spec, std::span<const double> fit_data);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace monofn::cli

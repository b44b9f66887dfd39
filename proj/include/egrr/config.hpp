#pragma once

// Flat key-value parameter files:
//
//   # comment
//   n_agents = 10000
//   rho0     = 0.04
//   variants = global, local
//   axis1    = kappa: 0.5, 0.6, 0.7
//
// Keys are the SimParams field names plus the harness keys `replicates`,
// `variants`, `threads`, `axis1`, `axis2`. Unknown keys are rejected.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "egrr/core.hpp"
#include "egrr/grr.hpp"

namespace egrr {

/// File could not be opened or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One sweep axis: a SimParams field name (or `expected_susceptibles`) and
/// its values.
struct Axis {
  std::string name;
  std::vector<double> values;
};

struct HarnessConfig {
  SimParams params;
  std::int64_t replicates = 100;
  std::vector<GrrVariant> variants{GrrVariant::Global, GrrVariant::Local};
  std::vector<Axis> axes;
  unsigned threads = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ValidationError({std::string(key) + ": cannot parse '" + std::string(text) + "'"});
  return value;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline bool is_param_field(std::string_view key) {
  static const char* const kFields[] = {"n_agents", "rho0",    "kappa",   "t_infect",
                                        "t_recover", "dr",     "n_iters", "seed",
                                        "domain_side", "clock"};
  for (const char* f : kFields)
    if (key == f) return true;
  return false;
}

/// Sets one SimParams field from its textual value.
inline void set_param(SimParams& p, std::string_view key, std::string_view value) {
  using detail::parse_number;
  if (key == "n_agents") p.n_agents = parse_number<std::int64_t>(key, value);
  else if (key == "rho0") p.rho0 = parse_number<double>(key, value);
  else if (key == "kappa") p.kappa = parse_number<double>(key, value);
  else if (key == "t_infect") p.t_infect = parse_number<std::int32_t>(key, value);
  else if (key == "t_recover") p.t_recover = parse_number<std::int32_t>(key, value);
  else if (key == "dr") p.dr = parse_number<double>(key, value);
  else if (key == "n_iters") p.n_iters = parse_number<std::int32_t>(key, value);
  else if (key == "seed") p.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "domain_side") p.domain_side = parse_number<double>(key, value);
  else if (key == "clock") {
    const auto v = detail::trim(value);
    if (v == "fixed") p.clock = ClockRule::Fixed;
    else if (v == "geometric") p.clock = ClockRule::Geometric;
    else throw ValidationError({"clock: expected fixed|geometric"});
  } else {
    throw ValidationError({"unknown parameter '" + std::string(key) + "'"});
  }
}

/// Sets a numeric SimParams field from a sweep value.
inline void set_param(SimParams& p, std::string_view key, double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  set_param(p, key, os.str());
}

inline std::vector<GrrVariant> parse_variants(std::string_view text) {
  std::vector<GrrVariant> out;
  for (auto v : detail::split(text, ','))
    if (!v.empty()) out.push_back(parse_variant(std::string(v)));
  return out;
}

inline Axis parse_axis(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ValidationError({"axis: expected 'name: v1, v2, ...'"});
  Axis a;
  a.name = std::string(detail::trim(text.substr(0, colon)));
  if (a.name != "expected_susceptibles" && (!is_param_field(a.name) || a.name == "clock"))
    throw ValidationError({"axis: '" + a.name + "' is not a numeric parameter"});
  for (auto v : detail::split(text.substr(colon + 1), ','))
    if (!v.empty()) a.values.push_back(detail::parse_number<double>(a.name, v));
  if (a.values.empty()) throw ValidationError({"axis '" + a.name + "' has no values"});
  return a;
}

inline HarnessConfig parse_config(std::istream& in) {
  HarnessConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError({"line " + std::to_string(lineno) + ": expected 'key = value'"});
    const auto key = detail::trim(s.substr(0, eq));
    const auto value = detail::trim(s.substr(eq + 1));
    if (key == "replicates") cfg.replicates = detail::parse_number<std::int64_t>(key, value);
    else if (key == "variants") cfg.variants = parse_variants(value);
    else if (key == "threads") cfg.threads = detail::parse_number<unsigned>(key, value);
    else if (key == "axis1" || key == "axis2") cfg.axes.push_back(parse_axis(value));
    else set_param(cfg.params, key, value);
  }
  return cfg;
}

inline HarnessConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

/// Key-value dump of `p`, readable by parse_config.
inline std::string params_snapshot(const SimParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "n_agents = " << p.n_agents << '\n'
     << "rho0 = " << p.rho0 << '\n'
     << "kappa = " << p.kappa << '\n'
     << "t_infect = " << p.t_infect << '\n'
     << "t_recover = " << p.t_recover << '\n'
     << "dr = " << p.dr << '\n'
     << "n_iters = " << p.n_iters << '\n'
     << "seed = " << p.seed << '\n'
     << "domain_side = " << p.domain_side << '\n'
     << "clock = " << to_string(p.clock) << '\n';
  return os.str();
}

}  // namespace egrr

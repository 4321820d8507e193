#pragma once
// Run configuration: a small sectioned key=value text format and its
// validation. Parsing collects every problem found, not only the first.

#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "harmonium/errors.hpp"
#include "harmonium/frequency_profile.hpp"
#include "harmonium/rm.hpp"

namespace harmonium::cli {

enum class RunMode { dynamics3d, eigenstate2d };

struct RunConfig {
  std::string scenario;
  RunMode mode = RunMode::dynamics3d;
  std::string output_dir = ".";
  std::optional<FrequencyProfile> profile;
  std::optional<rm::InteractionPotential> interaction;
  double b_max = 20.0;
  int n_points = 2000;
  double t_end = 0.0;
  double dt = 1e-3;
  int output_stride = 0;        // 0 -> pick ~50 output instants
  std::vector<double> r_nodes;  // empty -> no density.csv
  std::vector<double> k_nodes;  // empty -> no structure_factor.csv
  int eigen_n = 0;
  int eigen_m = 0;

  long long n_steps() const { return std::llround(t_end / dt); }

  int effective_stride() const {
    if (output_stride > 0) return output_stride;
    return static_cast<int>(std::max<long long>(1, n_steps() / 50));
  }

  const FrequencyProfile& profile_ref() const { return *profile; }
  const rm::InteractionPotential& interaction_ref() const { return *interaction; }
};

namespace detail {

struct RawConfig {
  // section.key -> (value, line number)
  std::map<std::string, std::pair<std::string, int>> entries;
};

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return {};
  return s.substr(a, b - a + 1);
}

inline RawConfig tokenize(const std::string& text, std::vector<std::string>& issues) {
  static const std::set<std::string> known_sections = {
      "run", "profile", "interaction", "grid", "time", "density", "structure_factor",
      "eigenstate"};
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back("line " + std::to_string(line_no) + ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (known_sections.count(section) == 0)
        issues.push_back("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    if (section.empty()) {
      issues.push_back("line " + std::to_string(line_no) + ": key outside any [section]");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      issues.push_back("line " + std::to_string(line_no) + ": empty key or value");
      continue;
    }
    const std::string full = section + "." + key;
    if (raw.entries.count(full) != 0)
      issues.push_back("line " + std::to_string(line_no) + ": duplicate key " + full);
    else
      raw.entries[full] = {value, line_no};
  }
  return raw;
}

class Reader {
 public:
  Reader(RawConfig raw, std::vector<std::string>& issues)
      : raw_(std::move(raw)), issues_(issues) {}

  bool has(const std::string& key) const { return raw_.entries.count(key) != 0; }

  std::optional<std::string> take_string(const std::string& key) {
    auto it = raw_.entries.find(key);
    if (it == raw_.entries.end()) return std::nullopt;
    consumed_.insert(key);
    return it->second.first;
  }

  std::optional<double> take_double(const std::string& key) {
    auto s = take_string(key);
    if (!s) return std::nullopt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(*s, &pos);
      if (pos != s->size()) throw std::invalid_argument("");
      if (!std::isfinite(v)) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      issues_.push_back(key + ": not a finite number ('" + *s + "')");
      return std::nullopt;
    }
  }

  std::optional<int> take_int(const std::string& key) {
    auto v = take_double(key);
    if (!v) return std::nullopt;
    if (std::abs(*v - std::round(*v)) > 1e-9) {
      issues_.push_back(key + ": expected an integer");
      return std::nullopt;
    }
    return static_cast<int>(std::llround(*v));
  }

  std::optional<std::vector<double>> take_list(const std::string& key) {
    auto s = take_string(key);
    if (!s) return std::nullopt;
    std::vector<double> out;
    std::string item;
    std::istringstream in(*s);
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size() || !std::isfinite(v)) throw std::invalid_argument("");
        out.push_back(v);
      } catch (const std::exception&) {
        issues_.push_back(key + ": malformed list element '" + item + "'");
        return std::nullopt;
      }
    }
    if (out.empty()) {
      issues_.push_back(key + ": empty list");
      return std::nullopt;
    }
    return out;
  }

  void report_unknown_keys() {
    for (const auto& [key, value] : raw_.entries)
      if (consumed_.count(key) == 0)
        issues_.push_back("line " + std::to_string(value.second) + ": unknown key " + key);
  }

 private:
  RawConfig raw_;
  std::set<std::string> consumed_;
  std::vector<std::string>& issues_;
};

inline std::optional<FrequencyProfile> parse_profile(Reader& r,
                                                     std::vector<std::string>& issues) {
  auto type = r.take_string("profile.type");
  if (!type) {
    issues.push_back("profile.type: required (constant | sudden_quench | periodic_drive | tabulated)");
    return std::nullopt;
  }
  try {
    if (*type == "constant") {
      auto w0 = r.take_double("profile.omega0");
      if (!w0) {
        issues.push_back("profile.omega0: required for constant profiles");
        return std::nullopt;
      }
      return FrequencyProfile(Constant{*w0});
    }
    if (*type == "sudden_quench") {
      auto wi = r.take_double("profile.omega_initial");
      auto wf = r.take_double("profile.omega_final");
      auto ts = r.take_double("profile.t_switch");
      if (!wi || !wf) {
        issues.push_back("profile.omega_initial / profile.omega_final: required for quenches");
        return std::nullopt;
      }
      return FrequencyProfile(SuddenQuench{*wi, *wf, ts.value_or(0.0)});
    }
    if (*type == "periodic_drive") {
      auto wb = r.take_double("profile.omega_base");
      auto amp = r.take_double("profile.amplitude");
      auto wd = r.take_double("profile.omega_drive");
      if (!wb || !amp || !wd) {
        issues.push_back("profile.omega_base / amplitude / omega_drive: required for drives");
        return std::nullopt;
      }
      return FrequencyProfile(PeriodicDrive{*wb, *amp, *wd});
    }
    if (*type == "tabulated") {
      auto times = r.take_list("profile.times");
      auto values = r.take_list("profile.omega_sq");
      if (!times || !values) {
        issues.push_back("profile.times / profile.omega_sq: required for tabulated profiles");
        return std::nullopt;
      }
      return FrequencyProfile(Tabulated{*times, *values});
    }
    issues.push_back("profile.type: unknown value '" + *type + "'");
  } catch (const std::exception& e) {
    issues.push_back(std::string("profile: ") + e.what());
  }
  return std::nullopt;
}

inline std::optional<rm::InteractionPotential> parse_interaction(
    Reader& r, std::vector<std::string>& issues) {
  auto type = r.take_string("interaction.type");
  if (!type) return rm::InteractionPotential::none();
  try {
    if (*type == "none") return rm::InteractionPotential::none();
    if (*type == "moshinsky") {
      auto k = r.take_double("interaction.force_constant");
      if (!k) {
        issues.push_back("interaction.force_constant: required for moshinsky");
        return std::nullopt;
      }
      return rm::InteractionPotential::moshinsky(*k);
    }
    if (*type == "coulomb" || *type == "inverse_square") {
      auto lam = r.take_double("interaction.lambda");
      if (!lam) {
        issues.push_back("interaction.lambda: required for " + *type);
        return std::nullopt;
      }
      return *type == "coulomb" ? rm::InteractionPotential::coulomb(*lam)
                                : rm::InteractionPotential::inverse_square(*lam);
    }
    issues.push_back("interaction.type: unknown value '" + *type + "'");
  } catch (const std::exception& e) {
    issues.push_back(std::string("interaction: ") + e.what());
  }
  return std::nullopt;
}

// nodes = explicit comma list, or (max, count) -> linspace from 0
inline std::vector<double> parse_nodes(Reader& r, const std::string& section,
                                       const std::string& max_key,
                                       std::vector<std::string>& issues) {
  std::vector<double> nodes;
  const bool has_list = r.has(section + ".nodes");
  const bool has_span = r.has(section + "." + max_key) || r.has(section + ".count");
  if (has_list && has_span) {
    issues.push_back(section + ": give either nodes or " + max_key + "/count, not both");
    return nodes;
  }
  if (has_list) {
    if (auto list = r.take_list(section + ".nodes")) nodes = *list;
  } else if (has_span) {
    auto hi = r.take_double(section + "." + max_key);
    auto count = r.take_int(section + ".count");
    if (!hi || !count) {
      issues.push_back(section + ": " + max_key + " and count are both required");
      return nodes;
    }
    if (!(*hi > 0.0) || *count < 2) {
      issues.push_back(section + ": " + max_key + " must be > 0 and count >= 2");
      return nodes;
    }
    nodes.resize(*count);
    for (int i = 0; i < *count; ++i) nodes[i] = *hi * i / (*count - 1);
  }
  for (double v : nodes)
    if (v < 0.0) issues.push_back(section + ": nodes must be nonnegative");
  return nodes;
}

}  // namespace detail

/// Parse and validate a configuration; throws config_error carrying all
/// issues found. Defaults: dt = 0.001, b_max = 20, n_points = 2000.
inline RunConfig parse_config(const std::string& text) {
  std::vector<std::string> issues;
  detail::Reader reader(detail::tokenize(text, issues), issues);
  RunConfig cfg;

  if (auto v = reader.take_string("run.scenario")) {
    cfg.scenario = *v;
  } else {
    issues.push_back("run.scenario: required");
  }
  if (auto v = reader.take_string("run.mode")) {
    if (*v == "dynamics3d")
      cfg.mode = RunMode::dynamics3d;
    else if (*v == "eigenstate2d")
      cfg.mode = RunMode::eigenstate2d;
    else
      issues.push_back("run.mode: expected dynamics3d or eigenstate2d, got '" + *v + "'");
  }
  if (auto v = reader.take_string("run.output_dir")) cfg.output_dir = *v;

  cfg.profile = detail::parse_profile(reader, issues);
  cfg.interaction = detail::parse_interaction(reader, issues);

  if (auto v = reader.take_double("grid.b_max")) {
    if (*v > 0.0)
      cfg.b_max = *v;
    else
      issues.push_back("grid.b_max: must be positive");
  }
  if (auto v = reader.take_int("grid.n_points")) {
    if (*v >= 200)
      cfg.n_points = *v;
    else
      issues.push_back("grid.n_points: must be >= 200 for production runs");
  }

  if (auto v = reader.take_double("time.t_end")) {
    if (*v > 0.0)
      cfg.t_end = *v;
    else
      issues.push_back("time.t_end: must be positive");
  } else {
    issues.push_back("time.t_end: required");
  }
  if (auto v = reader.take_double("time.dt")) {
    if (*v > 0.0)
      cfg.dt = *v;
    else
      issues.push_back("time.dt: must be positive");
  }
  if (auto v = reader.take_int("time.output_stride")) {
    if (*v >= 1)
      cfg.output_stride = *v;
    else
      issues.push_back("time.output_stride: must be >= 1");
  }

  cfg.r_nodes = detail::parse_nodes(reader, "density", "r_max", issues);
  cfg.k_nodes = detail::parse_nodes(reader, "structure_factor", "k_max", issues);

  const bool has_eigenstate = reader.has("eigenstate.n") || reader.has("eigenstate.m");
  if (auto v = reader.take_int("eigenstate.n")) {
    if (*v >= 0)
      cfg.eigen_n = *v;
    else
      issues.push_back("eigenstate.n: must be >= 0");
  }
  if (auto v = reader.take_int("eigenstate.m")) {
    if (*v >= 0)
      cfg.eigen_m = *v;
    else
      issues.push_back("eigenstate.m: must be >= 0");
  }

  reader.report_unknown_keys();

  // cross-field validation
  if (cfg.t_end > 0.0 && cfg.dt > 0.0) {
    const double steps = cfg.t_end / cfg.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6)
      issues.push_back("time: t_end must be an integer multiple of dt");
    else if (cfg.profile) {
      if (auto ts = cfg.profile->switch_time(); ts && *ts > 0.0 && *ts < cfg.t_end) {
        const double k = *ts / cfg.dt;
        if (std::abs(k - std::round(k)) > 1e-9)
          issues.push_back("profile.t_switch: must lie on the dt step grid");
      }
      try {
        cfg.profile->omega_sq(0.0);
        cfg.profile->omega_sq(cfg.t_end);
      } catch (const std::out_of_range&) {
        issues.push_back("profile: tabulated knots must cover [0, t_end]");
      }
    }
  }
  if (cfg.profile && cfg.interaction &&
      cfg.interaction->kind() == rm::InteractionPotential::Kind::moshinsky &&
      cfg.t_end > 0.0) {
    try {
      if (!(cfg.profile->min_omega_sq(0.0, cfg.t_end) -
                2.0 * cfg.interaction->strength() >
            0.0))
        issues.push_back(
            "interaction: unbound relative-motion channel (omega0^2(t) - 2 K <= 0 in the run)");
    } catch (const std::out_of_range&) {
      // coverage issue already reported
    }
  }
  if (cfg.mode == RunMode::dynamics3d && cfg.profile && cfg.t_end > 0.0) {
    // the grid must resolve the narrowest relative-motion oscillator length
    try {
      const double wmax2 = cfg.profile->max_omega_sq(0.0, cfg.t_end);
      if (wmax2 > 0.0) {
        const double narrowest = 1.0 / std::sqrt(rm::rm_effective_mass * std::sqrt(wmax2));
        if (cfg.b_max / cfg.n_points > narrowest / 20.0)
          issues.push_back(
              "grid: spacing " + std::to_string(cfg.b_max / cfg.n_points) +
              " does not resolve the narrowest oscillator length (needs <= " +
              std::to_string(narrowest / 20.0) + "); raise n_points or shrink b_max");
      }
    } catch (const std::out_of_range&) {
      // tabulated coverage problem already reported
    }
  }
  if (cfg.mode == RunMode::eigenstate2d) {
    if (!cfg.r_nodes.empty())
      issues.push_back("density: not available in eigenstate2d mode (density is a 3D observable)");
    if (cfg.interaction &&
        (cfg.interaction->kind() == rm::InteractionPotential::Kind::coulomb ||
         cfg.interaction->kind() == rm::InteractionPotential::Kind::inverse_square))
      issues.push_back(
          "interaction: eigenstate2d mode supports none or moshinsky (analytic relative channel)");
    if (cfg.k_nodes.empty())
      issues.push_back("structure_factor: eigenstate2d mode requires k nodes");
    if (cfg.eigen_n + cfg.eigen_m > 30)
      issues.push_back("eigenstate: n + m > 30 exceeds the supported range");
  } else if (has_eigenstate) {
    issues.push_back("eigenstate: only meaningful in eigenstate2d mode");
  }

  if (!issues.empty()) throw config_error(std::move(issues));
  return cfg;
}

inline const char* mode_name(RunMode m) {
  return m == RunMode::dynamics3d ? "dynamics3d" : "eigenstate2d";
}

}  // namespace harmonium::cli

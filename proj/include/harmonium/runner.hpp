#pragma once
// Scenario executor. Produces oscillator.csv, density.csv,
// structure_factor.csv and manifest.json in the configured output
// directory. CSV numbers are printed with %.16e so a rerun of the same
// configuration reproduces the files byte for byte.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "harmonium/config.hpp"
#include "harmonium/observables.hpp"
#include "harmonium/version.hpp"

namespace harmonium::cli {

namespace detail {

inline std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& schema,
            const std::vector<std::string>& columns)
      : out_(path) {
    if (!out_) throw numerical_error("cannot open output file " + path.string());
    out_ << "# schema: " << schema << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }

  void row(std::initializer_list<double> values) {
    std::size_t i = 0;
    for (double v : values) out_ << sci(v) << (++i < values.size() ? "," : "\n");
  }

 private:
  std::ofstream out_;
};

inline const char* classify(const std::exception& e) {
  if (dynamic_cast<const config_error*>(&e)) return "config";
  if (dynamic_cast<const harmonium::domain_error*>(&e)) return "domain";
  if (dynamic_cast<const numerical_error*>(&e)) return "numerical";
  return "internal";
}

inline void write_density_csv(const observables::DensitySeries& series,
                              const std::filesystem::path& path) {
  CsvWriter csv(path, "harmonium.density.v1", {"t", "r", "n"});
  for (std::size_t it = 0; it < series.times.size(); ++it)
    for (std::size_t ir = 0; ir < series.r_nodes.size(); ++ir)
      csv.row({series.times[it], series.r_nodes[ir], series.values[it][ir]});
}

inline void write_structure_factor_csv(const observables::StructureFactorSeries& series,
                                       const std::filesystem::path& path) {
  CsvWriter csv(path, "harmonium.structure_factor.v1", {"t", "k", "f_cm", "f_rm", "f_tot"});
  for (std::size_t it = 0; it < series.times.size(); ++it)
    for (std::size_t ik = 0; ik < series.k_nodes.size(); ++ik)
      csv.row({series.times[it], series.k_nodes[ik], series.f_cm[it][ik],
               series.f_rm[it][ik], series.f_tot[it][ik]});
}

inline nlohmann::json echo_config(const RunConfig& cfg) {
  nlohmann::json j;
  j["scenario"] = cfg.scenario;
  j["mode"] = mode_name(cfg.mode);
  j["profile"] = cfg.profile ? cfg.profile->describe() : "-";
  j["interaction"] = {{"type", cfg.interaction ? cfg.interaction->name() : "-"},
                      {"strength", cfg.interaction ? cfg.interaction->strength() : 0.0}};
  j["grid"] = {{"b_max", cfg.b_max}, {"n_points", cfg.n_points}};
  j["time"] = {{"t_end", cfg.t_end}, {"dt", cfg.dt}, {"output_stride", cfg.effective_stride()}};
  j["density_r_nodes"] = cfg.r_nodes;
  j["structure_factor_k_nodes"] = cfg.k_nodes;
  if (cfg.mode == RunMode::eigenstate2d)
    j["eigenstate"] = {{"n", cfg.eigen_n}, {"m", cfg.eigen_m}};
  return j;
}

}  // namespace detail

struct RunResult {
  std::filesystem::path output_dir;
  nlohmann::json diagnostics;
};

namespace detail {

inline void execute(const RunConfig& cfg, const std::filesystem::path& dir,
                    nlohmann::json& diagnostics) {
  const auto& profile = cfg.profile_ref();
  const auto& interaction = cfg.interaction_ref();
  const int stride = cfg.effective_stride();
  const long long n_steps = cfg.n_steps();

  const OscillatorTrajectory cm_traj =
      solve_trajectory(profile, cfg.t_end, cfg.dt, cm::cm_effective_mass);
  diagnostics["oscillator_wronskian_drift"] = cm_traj.wronskian_drift();

  {
    CsvWriter osc(dir / "oscillator.csv", "harmonium.oscillator.v1",
                  {"t", "abs_x", "phi", "phi_dot"});
    for (std::size_t i = 0; i < cm_traj.size(); i += stride)
      osc.row({cm_traj.times[i], std::abs(cm_traj.x[i]), cm_traj.phi[i], cm_traj.phi_dot[i]});
  }

  if (cfg.mode == RunMode::eigenstate2d) {
    // analytic relative channel: mapped ground-state oscillator (K = 0 for
    // the none interaction)
    const double force_constant =
        interaction.kind() == rm::InteractionPotential::Kind::moshinsky
            ? interaction.strength()
            : 0.0;
    const OscillatorTrajectory mapped =
        rm::moshinsky_trajectory(force_constant, profile, cfg.t_end, cfg.dt);
    diagnostics["mapped_wronskian_drift"] = mapped.wronskian_drift();

    observables::StructureFactorSeries series;
    series.k_nodes = cfg.k_nodes;
    for (std::size_t i = 0; i < cm_traj.size(); i += stride) {
      const double t = cm_traj.times[i];
      const double c_cm = cm::cm_effective_mass * cm_traj.phi_dot[i];
      const double c_rm = rm::rm_effective_mass * mapped.phi_dot[mapped.index_of(t)];
      series.times.push_back(t);
      auto& f_cm = series.f_cm.emplace_back();
      auto& f_rm = series.f_rm.emplace_back();
      auto& f_tot = series.f_tot.emplace_back();
      for (double k : cfg.k_nodes) {
        f_cm.push_back(observables::structure_factor_cm(cfg.eigen_n, cfg.eigen_m, c_cm, k));
        f_rm.push_back(observables::structure_factor_cm_ground(c_rm, 0.5 * k));
        f_tot.push_back(observables::structure_factor_total(f_cm.back(), f_rm.back()));
      }
    }
    write_structure_factor_csv(series, dir / "structure_factor.csv");
    return;
  }

  // 3D ground-state dynamics: relax, then propagate on the radial grid
  const rm::RadialGrid grid(cfg.b_max, cfg.n_points);
  const auto relaxed = rm::relax_ground_state(interaction, profile.initial_omega(), grid);
  diagnostics["relaxation"] = {{"energy", relaxed.energy},
                               {"iterations", relaxed.iterations},
                               {"final_dtau", relaxed.final_dtau}};

  observables::DensitySeries density;
  density.r_nodes = cfg.r_nodes;
  observables::StructureFactorSeries sf;
  sf.k_nodes = cfg.k_nodes;

  auto emit = [&](const rm::RMState& state) {
    const double t = state.time;
    const std::size_t i = cm_traj.index_of(t);
    if (!cfg.r_nodes.empty()) {
      const auto rm_density = observables::rm_density_from_grid(state);
      density.times.push_back(t);
      auto& row = density.values.emplace_back();
      for (double r : cfg.r_nodes)
        row.push_back(observables::density_3d(r, t, cm_traj, rm_density));
    }
    if (!cfg.k_nodes.empty()) {
      const double c_cm = cm::cm_effective_mass * cm_traj.phi_dot[i];
      sf.times.push_back(t);
      auto& f_cm = sf.f_cm.emplace_back();
      auto& f_rm = sf.f_rm.emplace_back();
      auto& f_tot = sf.f_tot.emplace_back();
      for (double k : cfg.k_nodes) {
        f_cm.push_back(observables::structure_factor_cm_ground(c_cm, k));
        f_rm.push_back(observables::structure_factor_rm_numeric(state, k));
        f_tot.push_back(observables::structure_factor_total(f_cm.back(), f_rm.back()));
      }
    }
  };

  emit(relaxed.state);
  long long step = 0;
  rm::PropagationReport report;
  rm::propagate(
      relaxed.state, interaction, profile, cfg.dt, static_cast<int>(n_steps),
      [&](const rm::RMState& s) {
        if (++step % stride == 0) emit(s);
      },
      &report);
  diagnostics["propagation"] = {{"max_step_norm_drift", report.max_step_norm_drift},
                                {"total_norm_drift", report.total_norm_drift},
                                {"max_boundary_amplitude", report.max_boundary_amplitude}};
  if (!cfg.r_nodes.empty()) write_density_csv(density, dir / "density.csv");
  if (!cfg.k_nodes.empty()) write_structure_factor_csv(sf, dir / "structure_factor.csv");
}

}  // namespace detail

/// Execute a validated configuration. The manifest is written whenever the
/// run completes or aborts with a classified error; aborts rethrow after
/// recording their diagnosis.
inline RunResult run(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  nlohmann::json manifest;
  manifest["schema"] = "harmonium.manifest.v1";
  manifest["code_version"] = version;
  manifest["config"] = detail::echo_config(cfg);
  nlohmann::json diagnostics = nlohmann::json::object();

  auto finish = [&](const char* status) {
    manifest["status"] = status;
    manifest["diagnostics"] = diagnostics;
    manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
  };

  try {
    detail::execute(cfg, dir, diagnostics);
  } catch (const std::exception& e) {
    manifest["error"] = {{"type", detail::classify(e)}, {"message", e.what()}};
    finish("aborted");
    throw;
  }
  finish("completed");
  return {dir, diagnostics};
}

}  // namespace harmonium::cli

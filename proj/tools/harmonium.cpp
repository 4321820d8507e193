// Batch front-end for harmonically confined two-electron model atoms:
// exact time-dependent densities and atomic scattering factors.
//
// Subcommands:
//   run <config>       execute a scenario, write CSV series + manifest
//   validate <config>  parse and validate only
//   oracle             run built-in brute-force cross-checks, print a table
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 domain error (e.g. unbound Moshinsky channel).

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "harmonium/config.hpp"
#include "harmonium/runner.hpp"
#include "harmonium/version.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw harmonium::config_error({"cannot read config file " + path});
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct OracleTable {
  int failures = 0;

  void check(const std::string& name, double error, double tolerance) {
    const bool ok = std::isfinite(error) && error <= tolerance;
    std::printf("%s  %-58s max error %.3e (tol %.1e)\n", ok ? "PASS" : "FAIL", name.c_str(),
                error, tolerance);
    if (!ok) ++failures;
  }
};

// Brute-force cross-checks mirroring the regression suite at desk scale.
int run_oracle_table() {
  using namespace harmonium;
  OracleTable table;

  {  // Laguerre recurrence vs explicit binomial sum (integer order)
    double worst = 0.0;
    for (int n = 0; n <= 8; ++n)
      for (int m : {0, 1, 2})
        for (double x = 0.0; x <= 16.0; x += 1.6) {
          long double sum = 0.0L;
          long double xpow = 1.0L;
          long double fact = 1.0L;
          for (int s = 0; s <= n; ++s) {
            if (s > 0) {
              xpow *= -static_cast<long double>(x);
              fact *= s;
            }
            sum += static_cast<long double>(specfun::binomial(n + m, n - s)) * xpow / fact;
          }
          const double rec = specfun::laguerre(n, m, x);
          worst = std::max(worst, std::abs(rec - static_cast<double>(sum)) /
                                      std::max(1.0, std::abs(static_cast<double>(sum))));
        }
    table.check("laguerre: recurrence vs binomial sum", worst, 1e-10);
  }

  {  // Kummer: M(1,1,x) = e^x and contiguity at b = 1
    double worst = 0.0;
    for (double x : {-40.0, -10.0, -2.5, -1.0, 0.5, 2.0})
      worst = std::max(worst, std::abs(specfun::kummer_m(1.0, 1.0, x) - std::exp(x)) /
                                  std::exp(x));
    for (double a : {2.0, 4.0, 6.0})
      for (double x : {-30.0, -8.0, -1.0}) {
        const double lhs = (1.0 - a) * specfun::kummer_m(a - 1.0, 1.0, x) +
                           (2.0 * a - 1.0 + x) * specfun::kummer_m(a, 1.0, x) -
                           a * specfun::kummer_m(a + 1.0, 1.0, x);
        const double scale = std::max({std::abs(specfun::kummer_m(a, 1.0, x)), 1e-30});
        worst = std::max(worst, std::abs(lhs) / scale);
      }
    table.check("kummer: M(1,1,x)=e^x and contiguity", worst, 1e-8);
  }

  {  // oscillator Wronskian conservation on a quench and a drive
    double worst = 0.0;
    for (const FrequencyProfile& p :
         {FrequencyProfile(SuddenQuench{1.0, 2.0, 0.0}),
          FrequencyProfile(PeriodicDrive{1.0, 0.5, 2.0})}) {
      const auto traj = solve_trajectory(p, 8.0, 1e-3, 2.0);
      worst = std::max(worst, traj.wronskian_drift());
    }
    table.check("oscillator: Wronskian drift (quench, drive)", worst, 1e-8);
  }

  {  // 3D centre-of-mass norm conservation under the quench, (n,l) = (2,0)
    const FrequencyProfile quench(SuddenQuench{1.0, 2.0, 0.0});
    const auto traj = solve_trajectory(quench, 1.0, 1e-3, 2.0);
    const auto qn = cm::CMQuantumNumbers::three_d(2, 0);
    double worst = 0.0;
    for (double t : {0.0, 0.5, 1.0}) {
      const int nq = 4000;
      const double hi = 6.0;
      double norm = 0.0;  // Simpson over [0, hi]
      for (int i = 0; i <= nq; ++i) {
        const double c = hi * i / nq;
        const double w = (i == 0 || i == nq) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        norm += w * std::norm(cm::chi_3d(qn, traj, c, t)) * c * c;
      }
      norm *= hi / nq / 3.0;
      worst = std::max(worst, std::abs(norm - 1.0));
    }
    table.check("cm: 3D norm conservation, (n,l)=(2,0) under quench", worst, 1e-8);
  }

  {  // closed scattering factor vs direct Hankel quadrature, (n,m)=(1,0)
    const double c_coef = 2.0, k = 1.0;
    const int nq = 40000;
    const double hi = 8.0;
    double hank = 0.0;
    for (int i = 0; i <= nq; ++i) {
      const double c = hi * i / nq;
      const double w = (i == 0 || i == nq) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const double lag = specfun::laguerre(1, 0.0, c_coef * c * c);
      const double chisq = 2.0 * c_coef * std::exp(-c_coef * c * c) * lag * lag;
      hank += w * specfun::bessel_j0(k * c) * chisq * c;
    }
    hank *= hi / nq / 3.0;
    const double closed = observables::structure_factor_cm(1, 0, c_coef, k);
    table.check("observables: Kummer-M factor vs Hankel quadrature", std::abs(closed - hank),
                1e-8);
  }

  {  // electron-count sum rule, static none interaction
    const FrequencyProfile cst(Constant{1.0});
    const auto traj = solve_trajectory(cst, 0.5, 1e-3, 2.0);
    const auto relaxed =
        rm::relax_ground_state(rm::InteractionPotential::none(), 1.0, rm::RadialGrid(16.0, 1200));
    const auto rho = observables::rm_density_from_grid(relaxed.state);
    const int nq = 1200;
    const double hi = 9.0;
    double total = 0.0;
    for (int i = 0; i <= nq; ++i) {
      const double r = hi * i / nq;
      const double w = (i == 0 || i == nq) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      total += w * observables::density_3d(r, 0.0, traj, rho) * 4.0 * std::numbers::pi * r * r;
    }
    total *= hi / nq / 3.0;
    table.check("observables: electron-count sum rule (static)", std::abs(total - 2.0), 1e-6);
  }

  {  // Moshinsky quench: grid propagation vs analytic mapped state
    const double K = 0.25;
    const FrequencyProfile quench(SuddenQuench{1.0, 2.0, 0.0});
    const double t_end = 2.0, dt = 1e-3;
    const rm::RadialGrid grid(16.0, 1200);
    const auto interaction = rm::InteractionPotential::moshinsky(K);
    auto relaxed = rm::relax_ground_state(interaction, quench.initial_omega(), grid);
    const auto numeric = rm::propagate(relaxed.state, interaction, quench, dt,
                                       static_cast<int>(t_end / dt));
    const auto mapped = rm::moshinsky_trajectory(K, quench, t_end, dt);
    const auto analytic = rm::moshinsky_rm_grid_state(mapped, grid, t_end);
    const double deficit = 1.0 - std::abs(rm::overlap(numeric, analytic));
    table.check("rm: Moshinsky quench, analytic vs grid overlap deficit", deficit, 1e-6);
  }

  std::printf("%s\n", table.failures == 0 ? "all oracle checks passed"
                                          : "oracle checks FAILED");
  return table.failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "harmonium: time-dependent densities and scattering factors of harmonically "
      "confined two-electron model atoms"};
  app.set_version_flag("--version", harmonium::version);
  app.require_subcommand(1);

  std::string run_config_path;
  std::string validate_config_path;
  auto* run_cmd = app.add_subcommand("run", "execute a scenario from a config file");
  run_cmd->add_option("config", run_config_path, "path to the run configuration")
      ->required();
  auto* validate_cmd =
      app.add_subcommand("validate", "parse and validate a config file, run nothing");
  validate_cmd->add_option("config", validate_config_path, "path to the run configuration")
      ->required();
  app.add_subcommand("oracle",
                     "run built-in brute-force cross-checks and print a pass/fail table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const auto cfg = harmonium::cli::parse_config(read_file(run_config_path));
      const auto result = harmonium::cli::run(cfg);
      std::cout << "run '" << cfg.scenario << "' completed; outputs in "
                << result.output_dir.string() << "\n";
      return 0;
    }
    if (validate_cmd->parsed()) {
      const auto cfg = harmonium::cli::parse_config(read_file(validate_config_path));
      std::cout << "configuration OK: scenario '" << cfg.scenario << "', mode "
                << harmonium::cli::mode_name(cfg.mode) << "\n";
      return 0;
    }
    return run_oracle_table();
  } catch (const harmonium::config_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const harmonium::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

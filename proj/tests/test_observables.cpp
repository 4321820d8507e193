#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "harmonium/observables.hpp"
#include "oracle_utils.hpp"

using namespace harmonium;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;

/// Hankel-transform oracle for the closed 2D factor: adaptive quadrature of
/// Int J0(k c) |chi_nm(c)|^2 c dc with the Laguerre part from the explicit
/// binomial sum.
double hankel_oracle(int n, int m, double c_coef, double k) {
  const double log_norm = static_cast<double>(
      oracle::ref_log_gamma(n + 1.0L) - oracle::ref_log_gamma(n + m + 1.0L));
  const double amp = 2.0 * std::exp(log_norm) * std::pow(c_coef, m + 1.0);
  auto integrand = [&](double c) {
    const double u = c_coef * c * c;
    const double lag = static_cast<double>(oracle::ref_laguerre_sum(n, m, u));
    return specfun::bessel_j0(k * c) * amp * std::pow(c, 2.0 * m) * std::exp(-u) * lag * lag *
           c;
  };
  const double c_hi = std::sqrt((60.0 + 8.0 * (m + 2 * n)) / c_coef);
  return oracle::adaptive_simpson(integrand, 0.0, c_hi, 1e-12);
}
}  // namespace

TEST_CASE("density for independent electrons in a static trap") {
  const FrequencyProfile cst(Constant{1.0});
  const auto cm_traj = solve_trajectory(cst, 1.0, 1e-3, 2.0);
  const auto mapped = rm::moshinsky_trajectory(0.0, cst, 1.0, 1e-3);
  const auto rho = observables::rm_density_moshinsky(mapped, 0.5);
  // n(r) = 2 (omega/pi)^{3/2} exp(-omega r^2)
  CHECK_THAT(observables::density_3d(0.0, 0.5, cm_traj, rho),
             WithinRel(2.0 / std::pow(pi, 1.5), 1e-9));
  for (double r : {0.4, 1.1, 2.3})
    CHECK_THAT(observables::density_3d(r, 0.5, cm_traj, rho),
               WithinRel(2.0 * std::pow(1.0 / pi, 1.5) * std::exp(-r * r), 1e-9));
  // same through the grid-state provider
  const auto relaxed =
      rm::relax_ground_state(rm::InteractionPotential::none(), 1.0, rm::RadialGrid(16.0, 1600));
  const auto rho_grid = observables::rm_density_from_grid(relaxed.state);
  // the relaxed grid state sits O(h^2) from the continuum ground state
  for (double r : {0.0, 0.7, 1.8})
    CHECK_THAT(observables::density_3d(r, 0.5, cm_traj, rho_grid),
               WithinRel(2.0 * std::pow(1.0 / pi, 1.5) * std::exp(-r * r), 2e-5));
}

TEST_CASE("density is nonnegative and integrates to the electron count") {
  const double K = 0.25;
  const FrequencyProfile quench(SuddenQuench{1.0, 2.0, 0.0});
  const double dt = 1e-3;
  const double t = 0.786;  // close to pi/4, on the grid
  const auto cm_traj = solve_trajectory(quench, 1.0, dt, 2.0);
  const auto mapped = rm::moshinsky_trajectory(K, quench, 1.0, dt);
  const auto rho = observables::rm_density_moshinsky(mapped, t);
  const double total = oracle::simpson(
      [&](double r) {
        const double n = observables::density_3d(r, t, cm_traj, rho);
        REQUIRE(n >= 0.0);
        return n * 4.0 * pi * r * r;
      },
      0.0, 10.0, 600);
  CHECK_THAT(total, WithinAbs(2.0, 1e-6));
}

TEST_CASE("density matches the direct angular-reduction oracle") {
  const double K = 0.25;
  const FrequencyProfile quench(SuddenQuench{1.0, 2.0, 0.0});
  const double dt = std::numbers::pi / 1024.0;
  const double t = 256 * dt;  // pi/4
  const auto cm_traj = solve_trajectory(quench, std::numbers::pi, dt, 2.0);
  const auto mapped = rm::moshinsky_trajectory(K, quench, std::numbers::pi, dt);
  const auto rho = observables::rm_density_moshinsky(mapped, t);
  const double a = cm::cm_length(cm_traj, t);
  for (double r : {0.0, 0.8}) {
    const double direct = oracle::density_direct(r, a, rho.value, 12.0);
    CHECK_THAT(observables::density_3d(r, t, cm_traj, rho), WithinRel(direct, 1e-6));
  }
}

TEST_CASE("density quadrature is converged: doubling the nodes changes nothing") {
  const FrequencyProfile cst(Constant{1.0});
  const auto cm_traj = solve_trajectory(cst, 1.0, 1e-3, 2.0);
  const auto relaxed = rm::relax_ground_state(rm::InteractionPotential::coulomb(1.0), 1.0,
                                              rm::RadialGrid(16.0, 1600));
  const auto rho = observables::rm_density_from_grid(relaxed.state);
  for (double r : {0.0, 1.0, 3.0, 6.0}) {
    const double d200 = observables::density_3d(r, 0.5, cm_traj, rho, 200);
    const double d400 = observables::density_3d(r, 0.5, cm_traj, rho, 400);
    CHECK(std::abs(d200 - d400) < 1e-8);
  }
}

TEST_CASE("density survives far-field evaluation without overflow") {
  const FrequencyProfile cst(Constant{1.0});
  const auto cm_traj = solve_trajectory(cst, 1.0, 1e-3, 2.0);
  const auto mapped = rm::moshinsky_trajectory(0.0, cst, 1.0, 1e-3);
  const auto rho = observables::rm_density_moshinsky(mapped, 0.5);
  for (double r : {25.0, 40.0, 60.0}) {
    const double n = observables::density_3d(r, 0.5, cm_traj, rho);
    CHECK(std::isfinite(n));
    CHECK(n >= 0.0);
    CHECK(n < 1e-100);
  }
}

TEST_CASE("grid density provider refuses a leaking state") {
  rm::RadialGrid grid(6.0, 300);
  rm::RMState bad{grid, 0.0, std::vector<std::complex<double>>(grid.n_points, {0.0, 0.0})};
  for (int j = 0; j < grid.n_points; ++j)
    bad.g[j] = grid.node(j) * std::exp(-0.05 * grid.node(j));  // fat tail
  const double nrm = std::sqrt(bad.norm_sq());
  for (auto& v : bad.g) v /= nrm;
  CHECK_THROWS_AS(observables::rm_density_from_grid(bad), numerical_error);
}

TEST_CASE("closed 2D structure factor: Gaussian ground state and normalization") {
  for (double c_coef : {0.5, 2.0, 8.0}) {
    for (double k : {0.0, 0.5, 3.0, 10.0})
      CHECK_THAT(observables::structure_factor_cm(0, 0, c_coef, k),
                 WithinAbs(std::exp(-k * k / (4.0 * c_coef)), 1e-12));
    for (int n = 0; n <= 3; ++n)
      for (int m = 0; m <= 3; ++m)
        CHECK_THAT(observables::structure_factor_cm(n, m, c_coef, 0.0), WithinAbs(1.0, 1e-10));
  }
  CHECK_THROWS_AS(observables::structure_factor_cm(20, 11, 1.0, 1.0), argument_error);
  CHECK_THROWS_AS(observables::structure_factor_cm(0, 0, 0.0, 1.0), argument_error);
  CHECK_THROWS_AS(observables::structure_factor_cm(-1, 0, 1.0, 1.0), argument_error);
}

TEST_CASE("closed 2D structure factor against the Hankel oracle") {
  // frozen spot value, oracle-derived: (n, m) = (1, 0), c_coef = 2, k = 1
  CHECK_THAT(observables::structure_factor_cm(1, 0, 2.0, 1.0),
             WithinAbs(hankel_oracle(1, 0, 2.0, 1.0), 1e-10));
  for (int n = 0; n <= 2; ++n)
    for (int m = 0; m <= 2; ++m)
      for (double c_coef : {0.5, 2.0})
        for (double k : {0.3, 1.0, 4.0, 9.0}) {
          const double closed = observables::structure_factor_cm(n, m, c_coef, k);
          CHECK_THAT(closed, WithinAbs(hankel_oracle(n, m, c_coef, k), 1e-8));
          CHECK(std::abs(closed) <= 1.0 + 1e-12);  // |f| <= f(0)
        }
}

TEST_CASE("numeric relative-motion factor") {
  const auto relaxed = rm::relax_ground_state(rm::InteractionPotential::none(), 1.0,
                                              rm::RadialGrid(16.0, 1600));
  CHECK_THAT(observables::structure_factor_rm_numeric(relaxed.state, 0.0),
             WithinAbs(1.0, 1e-9));
  // Gaussian transform: f_rm(k/2) = exp(-k^2/(16 m_rm omega));
  // tolerance covers the O(h^2) relaxation offset at h = 0.01
  for (double k : {0.7, 2.0, 4.0})
    CHECK_THAT(observables::structure_factor_rm_numeric(relaxed.state, k),
               WithinAbs(std::exp(-k * k / 8.0), 1e-5));
  // Moshinsky: same with the effective frequency
  const double omega_eff = std::sqrt(0.5);
  const auto relaxed_m = rm::relax_ground_state(rm::InteractionPotential::moshinsky(0.25), 1.0,
                                                rm::RadialGrid(16.0, 1600));
  for (double k : {0.7, 2.0})
    CHECK_THAT(observables::structure_factor_rm_numeric(relaxed_m.state, k),
               WithinAbs(std::exp(-k * k / (8.0 * omega_eff)), 1e-5));
}

TEST_CASE("total factor combination and sum rule at k = 0") {
  CHECK(observables::structure_factor_total(1.0, 1.0) == 2.0);
  CHECK_THAT(observables::structure_factor_total(0.3, 0.5), WithinRel(0.3, 1e-15));
}

TEST_CASE("static ground-state total factor decays monotonically") {
  const FrequencyProfile cst(Constant{1.0});
  const auto cm_traj = solve_trajectory(cst, 1.0, 1e-3, 2.0);
  const auto mapped = rm::moshinsky_trajectory(0.25, cst, 1.0, 1e-3);
  double prev = 2.0 + 1e-12;
  for (double k = 0.0; k <= 12.0; k += 0.2) {
    const double f = observables::moshinsky_structure_factor_total(cm_traj, mapped, k, 0.5);
    CHECK(f < prev);
    prev = f;
  }
  CHECK(prev < 1e-6);  // f_tot(k -> infinity) -> 0
}

TEST_CASE("property sweep: factor bounds on random inputs") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> c_dist(0.2, 9.0);
  std::uniform_real_distribution<double> k_dist(0.0, 12.0);
  std::uniform_int_distribution<int> n_dist(0, 4);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = n_dist(rng);
    const int m = n_dist(rng);
    const double c_coef = c_dist(rng);
    const double k = k_dist(rng);
    const double f_cm = observables::structure_factor_cm(n, m, c_coef, k);
    CHECK(std::abs(f_cm) <= 1.0 + 1e-10);  // |f| <= f(0) = 1
    const double f_rm = observables::structure_factor_cm_ground(c_dist(rng), 0.5 * k);
    const double f_tot = observables::structure_factor_total(f_cm, f_rm);
    CHECK(std::abs(f_tot) <= 2.0 + 1e-10);
  }
}

TEST_CASE("analytic Moshinsky total: static identity and k = 0 limit") {
  const double K = 0.25;
  const double omega_eff = std::sqrt(0.5);
  const FrequencyProfile cst(Constant{1.0});
  const auto cm_traj = solve_trajectory(cst, 1.0, 1e-3, 2.0);
  const auto mapped = rm::moshinsky_trajectory(K, cst, 1.0, 1e-3);
  CHECK_THAT(observables::moshinsky_structure_factor_total(cm_traj, mapped, 0.0, 0.5),
             WithinAbs(2.0, 1e-12));
  for (double k : {0.6, 1.7, 4.0}) {
    const double expected =
        2.0 * std::exp(-k * k / 8.0) * std::exp(-k * k / (8.0 * omega_eff));
    CHECK_THAT(observables::moshinsky_structure_factor_total(cm_traj, mapped, k, 0.5),
               WithinRel(expected, 1e-10));
    CHECK(observables::moshinsky_structure_factor_total(cm_traj, mapped, k, 0.5) <= 2.0);
  }
}

TEST_CASE("moshinsky total equals the grid pipeline under the quench") {
  const double K = 0.25;
  const FrequencyProfile quench(SuddenQuench{1.0, 2.0, 0.0});
  const double dt = 1e-3, t_end = 1.0;
  const rm::RadialGrid grid(12.0, 3000);
  const auto interaction = rm::InteractionPotential::moshinsky(K);
  const auto cm_traj = solve_trajectory(quench, t_end, dt, 2.0);
  const auto mapped = rm::moshinsky_trajectory(K, quench, t_end, dt);
  auto relaxed = rm::relax_ground_state(interaction, 1.0, grid);
  const auto numeric =
      rm::propagate(relaxed.state, interaction, quench, dt, static_cast<int>(t_end / dt));
  const std::size_t i = cm_traj.index_of(t_end);
  // dominated by the dt^2 propagation phase error (~2.5e-5 at dt = 1e-3, t = 1)
  for (double k : {0.0, 1.0, 2.5, 6.0}) {
    const double f_cm =
        observables::structure_factor_cm_ground(2.0 * cm_traj.phi_dot[i], k);
    const double f_rm = observables::structure_factor_rm_numeric(numeric, k);
    CHECK_THAT(observables::structure_factor_total(f_cm, f_rm),
               WithinAbs(observables::moshinsky_structure_factor_total(cm_traj, mapped, k,
                                                                       t_end),
                         5e-5));
  }
}

TEST_CASE("2D and 3D ground-state centre-of-mass factors coincide") {
  const FrequencyProfile quench(SuddenQuench{1.0, 2.0, 0.0});
  const auto traj = solve_trajectory(quench, 1.0, 1e-3, 2.0);
  for (double t : {0.0, 0.5, 1.0}) {
    const double c_coef = 2.0 * traj.phi_dot[traj.index_of(t)];
    for (double k : {0.5, 2.0, 7.0})
      CHECK_THAT(observables::structure_factor_cm(0, 0, c_coef, k),
                 WithinAbs(observables::structure_factor_cm_ground(c_coef, k), 1e-12));
  }
}

TEST_CASE("consistency triangle at a static point") {
  // radial Fourier transform of the density equals the total factor
  const double K = 0.25;
  const FrequencyProfile cst(Constant{1.0});
  const auto cm_traj = solve_trajectory(cst, 1.0, 1e-3, 2.0);
  const auto mapped = rm::moshinsky_trajectory(K, cst, 1.0, 1e-3);
  const auto rho = observables::rm_density_moshinsky(mapped, 0.5);
  for (double k : {0.5, 2.0}) {
    const double transform = oracle::simpson(
        [&](double r) {
          return observables::density_3d(r, 0.5, cm_traj, rho) *
                 specfun::sph_bessel_j0(k * r) * 4.0 * pi * r * r;
        },
        0.0, 10.0, 800);
    CHECK_THAT(transform,
               WithinAbs(observables::moshinsky_structure_factor_total(cm_traj, mapped, k, 0.5),
                         1e-6));
  }
}

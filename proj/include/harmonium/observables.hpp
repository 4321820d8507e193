#pragma once
// Physical outputs: the time-dependent electron density n(r, t) via the
// reduced radial quadrature, and centre-of-mass / relative-motion / total
// atomic scattering factors, including the closed Kummer-M form for 2D
// centre-of-mass eigenstates and the fully analytic Moshinsky total.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

#include "harmonium/cm.hpp"
#include "harmonium/errors.hpp"
#include "harmonium/oscillator.hpp"
#include "harmonium/quadrature.hpp"
#include "harmonium/rm.hpp"
#include "harmonium/specfun.hpp"

namespace harmonium::observables {

/// |psi_RM(b)|^2 at one instant; the value is assumed to vanish beyond
/// `support` (infinite for analytic states).
struct RMRadialDensity {
  std::function<double(double)> value;
  double support = std::numeric_limits<double>::infinity();
};

namespace detail {

// cubic Lagrange weights at offset u from the second of four equispaced nodes
inline void cubic_weights(double u, double w[4]) {
  w[0] = -u * (u - 1.0) * (u - 2.0) / 6.0;
  w[1] = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  w[2] = -(u + 1.0) * u * (u - 2.0) / 2.0;
  w[3] = (u + 1.0) * u * (u - 1.0) / 6.0;
}

// y^2 exp(-y^2/4 - rho^2) sinhc(rho y), combined so that no factor
// overflows: equals (y/(2 rho)) [exp(-(y/2-rho)^2) - exp(-(y/2+rho)^2)].
inline double gauss_sinh_weight(double y, double rho) {
  const double z = rho * y;
  if (z < 1e-4) {
    const double z2 = z * z;
    const double taylor = 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    return y * y * std::exp(-0.25 * y * y - rho * rho) * taylor;
  }
  const double dm = 0.5 * y - rho;
  const double dp = 0.5 * y + rho;
  return 0.5 * (y / rho) * (std::exp(-dm * dm) - std::exp(-dp * dp));
}

}  // namespace detail

/// |psi_RM|^2 provider from a propagated grid state (cubic interpolation of
/// the reduced wavefunction). Requires the state to be confined:
/// |g(b_max)| < 1e-6, else psi cannot be treated as zero beyond the grid.
inline RMRadialDensity rm_density_from_grid(const rm::RMState& state) {
  if (!(state.boundary_amplitude() < 1e-6))
    throw numerical_error(
        "rm density: state reaches the grid edge (|g(b_max)| >= 1e-6), refusing to extrapolate");
  auto g = std::make_shared<std::vector<std::complex<double>>>(state.g);
  const double h = state.grid.spacing();
  const double b_max = state.grid.b_max;
  const int n = state.grid.n_points;
  auto value = [g, h, b_max, n](double b) -> double {
    if (b >= b_max) return 0.0;
    b = std::max(b, 1e-10);
    // extended equispaced grid: index 0 is the Dirichlet zero at b = 0,
    // index i >= 1 holds g[i-1]
    const double s = b / h;
    int p = static_cast<int>(std::floor(s));
    p = std::max(1, std::min(p, n - 2));
    const double u = s - p;
    double w[4];
    detail::cubic_weights(u, w);
    std::complex<double> acc = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int idx = p - 1 + k;  // extended index
      if (idx >= 1 && idx <= n) acc += w[k] * (*g)[idx - 1];
    }
    const double radial = std::abs(acc) / b;  // R(b) = g(b)/b
    return radial * radial / (4.0 * std::numbers::pi);
  };
  return {value, b_max};
}

/// |psi_RM|^2 of the analytic Moshinsky ground state on its mapped
/// trajectory: (m pd / pi)^{3/2} exp(-m pd b^2) with m = 1/2.
inline RMRadialDensity rm_density_moshinsky(const OscillatorTrajectory& mapped, double t) {
  if (mapped.effective_mass != rm::rm_effective_mass)
    throw argument_error("rm density: trajectory must carry effective mass 1/2");
  const std::size_t i = mapped.index_of(t);
  const double z = mapped.effective_mass * mapped.phi_dot[i];
  const double amp = std::pow(z / std::numbers::pi, 1.5);
  return {[amp, z](double b) { return amp * std::exp(-z * b * b); },
          std::numeric_limits<double>::infinity()};
}

/// Electron density n(r, t) for a system started in its ground state:
///   (8/sqrt(pi)) exp(-r^2/a^2) Int_0^inf y^2 e^{-y^2/4} |psi_RM(a y, t)|^2
///   sinhc(r y / a) dy,  a = a_cm(t),
/// by Gauss-Legendre quadrature with the Gaussian and sinh factors combined
/// in log form. The cutoff tracks the kernel peak at y = 2 r/a.
inline double density_3d(double r, double t, const OscillatorTrajectory& cm_traj,
                         const RMRadialDensity& rm_density, int quad_points = 200) {
  if (!(r >= 0.0)) throw argument_error("density_3d: r must be nonnegative");
  const double a = cm::cm_length(cm_traj, t);
  const double rho = r / a;
  double y_hi = std::max(12.0, 2.0 * rho + 12.0);
  if (std::isfinite(rm_density.support)) y_hi = std::min(y_hi, rm_density.support / a);
  const auto& rule = quadrature::gauss_legendre(quad_points);
  const double half = 0.5 * y_hi;
  double acc = 0.0;
  for (int i = 0; i < quad_points; ++i) {
    const double y = half * (rule.nodes[i] + 1.0);
    acc += half * rule.weights[i] * detail::gauss_sinh_weight(y, rho) * rm_density.value(a * y);
  }
  return 8.0 / std::sqrt(std::numbers::pi) * acc;
}

/// Closed centre-of-mass scattering factor of the 2D eigenstate (n, m):
///   f_cm(k) = n!/(n+m)! sum_{s,t} C(n+m,n-s) C(n+m,n-t) (-1)^{s+t}
///             Gamma(m+s+t+1)/(s! t!) M(m+s+t+1, 1, -k^2/(4 c_coef)),
/// with c_coef = effective_mass * phi_dot(t). Combinatorial prefactors are
/// accumulated in log space, signs tracked separately.
inline double structure_factor_cm(int n, int m, double c_coef, double k) {
  if (n < 0 || m < 0) throw argument_error("structure_factor_cm: quantum numbers must be >= 0");
  if (n + m > 30)
    throw argument_error("structure_factor_cm: n + m > 30 exceeds the supported range");
  if (!(c_coef > 0.0)) throw argument_error("structure_factor_cm: needs mass*phi_dot > 0");
  const double x = -k * k / (4.0 * c_coef);
  const double log_nm =
      specfun::log_gamma(n + 1.0) - specfun::log_gamma(n + m + 1.0);
  long double acc = 0.0L;
  for (int s = 0; s <= n; ++s) {
    for (int t = 0; t <= n; ++t) {
      const double lg = log_nm + specfun::log_gamma(n + m + 1.0) -
                        specfun::log_gamma(n - s + 1.0) - specfun::log_gamma(m + s + 1.0) +
                        specfun::log_gamma(n + m + 1.0) - specfun::log_gamma(n - t + 1.0) -
                        specfun::log_gamma(m + t + 1.0) + specfun::log_gamma(m + s + t + 1.0) -
                        specfun::log_gamma(s + 1.0) - specfun::log_gamma(t + 1.0);
      const double sign = ((s + t) % 2 == 0) ? 1.0 : -1.0;
      acc += static_cast<long double>(sign * std::exp(lg)) *
             static_cast<long double>(specfun::kummer_m(m + s + t + 1.0, 1.0, x));
    }
  }
  return static_cast<double>(acc);
}

/// Ground-state factor, the Gaussian limit of the closed form.
inline double structure_factor_cm_ground(double c_coef, double k) {
  if (!(c_coef > 0.0)) throw argument_error("structure_factor_cm_ground: needs mass*phi_dot > 0");
  return std::exp(-k * k / (4.0 * c_coef));
}

/// f_rm(k/2) = Int |g(b)|^2 j0(k b/2) db, trapezoid on the propagation grid
/// (both boundary values vanish, so the plain Riemann sum is the trapezoid).
inline double structure_factor_rm_numeric(const rm::RMState& state, double k) {
  const double h = state.grid.spacing();
  double acc = 0.0;
  for (int j = 0; j < state.grid.n_points; ++j)
    acc += std::norm(state.g[j]) * specfun::sph_bessel_j0(0.5 * k * state.grid.node(j));
  return acc * h;
}

/// f_tot = 2 f_cm(k) f_rm(k/2).
inline double structure_factor_total(double f_cm, double f_rm) { return 2.0 * f_cm * f_rm; }

/// Fully analytic total scattering factor of the Moshinsky atom started in
/// its ground state: 2 f_cm(k; m_cm phi_dot) f_cm(k/2; m~ phi~_dot), both
/// factors Gaussian.
inline double moshinsky_structure_factor_total(const OscillatorTrajectory& cm_traj,
                                               const OscillatorTrajectory& mapped, double k,
                                               double t) {
  if (cm_traj.effective_mass != cm::cm_effective_mass)
    throw argument_error("moshinsky total: first trajectory must carry effective mass 2");
  if (mapped.effective_mass != rm::rm_effective_mass)
    throw argument_error("moshinsky total: mapped trajectory must carry effective mass 1/2");
  const std::size_t i = cm_traj.index_of(t);
  const std::size_t j = mapped.index_of(t);
  const double f_cm =
      structure_factor_cm_ground(cm_traj.effective_mass * cm_traj.phi_dot[i], k);
  const double f_rm =
      structure_factor_cm_ground(mapped.effective_mass * mapped.phi_dot[j], 0.5 * k);
  return 2.0 * f_cm * f_rm;
}

struct DensitySeries {
  std::vector<double> times;
  std::vector<double> r_nodes;
  std::vector<std::vector<double>> values;  // [time][r]
};

struct StructureFactorSeries {
  std::vector<double> times;
  std::vector<double> k_nodes;
  std::vector<std::vector<double>> f_cm;   // [time][k]
  std::vector<std::vector<double>> f_rm;
  std::vector<std::vector<double>> f_tot;
};

}  // namespace harmonium::observables

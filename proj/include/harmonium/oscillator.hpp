#pragma once
// Classical complex oscillator trajectory X(t) with Xdd = -omega0^2(t) X,
// and the phase quantities that drive the quantum closed forms. phi_dot is
// computed from the conserved Wronskian Im(conj(X) Xdot) rather than by
// differentiating arg X, so it is positive by construction and free of
// unwrapping noise.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

#include "harmonium/errors.hpp"
#include "harmonium/frequency_profile.hpp"

namespace harmonium {

struct OscillatorTrajectory {
  double effective_mass = 2.0;
  double dt = 0.0;
  double wronskian = 0.0;  // Im(conj(X) Xdot) at t = 0, conserved by the flow
  std::vector<double> times;
  std::vector<std::complex<double>> x;
  std::vector<std::complex<double>> x_dot;
  std::vector<double> phi;       // unwrapped phase, phi(0) = 0
  std::vector<double> phi_dot;   // wronskian / |X|^2 > 0
  std::vector<double> dlnx_dt;   // d ln|X|/dt = Re(conj(X) Xdot)/|X|^2

  std::size_t size() const { return times.size(); }

  /// Index of a grid time; temporal interpolation is not allowed.
  std::size_t index_of(double t) const {
    const long long i = std::llround(t / dt);
    if (i < 0 || static_cast<std::size_t>(i) >= times.size() ||
        std::abs(t - static_cast<double>(i) * dt) > 1e-9 * std::max(1.0, std::abs(t)))
      throw argument_error("time is not on the trajectory grid");
    return static_cast<std::size_t>(i);
  }

  /// max_i |Im(conj X_i Xdot_i) - W| / W over all samples.
  double wronskian_drift() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double w = std::imag(std::conj(x[i]) * x_dot[i]);
      worst = std::max(worst, std::abs(w - wronskian));
    }
    return worst / wronskian;
  }
};

enum class SubstepPolicy {
  automatic,    // power-of-two subdivision of the output step to meet tolerance
  output_step,  // integrate exactly one RK4 step per output step
};

namespace detail {

struct OscDerivState {
  double xr, xi, vr, vi, phase;
};

template <class OmegaSq>
inline OscDerivState osc_rhs(const OscDerivState& s, double t, double wronskian,
                             const OmegaSq& omega_sq) {
  const double w2 = omega_sq(t);
  const double r2 = s.xr * s.xr + s.xi * s.xi;
  return {s.vr, s.vi, -w2 * s.xr, -w2 * s.xi, wronskian / r2};
}

template <class OmegaSq>
inline void rk4_advance(OscDerivState& s, double t, double h, double wronskian,
                        const OmegaSq& omega_sq) {
  auto add = [](const OscDerivState& a, double f, const OscDerivState& b) {
    return OscDerivState{a.xr + f * b.xr, a.xi + f * b.xi, a.vr + f * b.vr,
                         a.vi + f * b.vi, a.phase + f * b.phase};
  };
  const OscDerivState k1 = osc_rhs(s, t, wronskian, omega_sq);
  const OscDerivState k2 = osc_rhs(add(s, 0.5 * h, k1), t + 0.5 * h, wronskian, omega_sq);
  const OscDerivState k3 = osc_rhs(add(s, 0.5 * h, k2), t + 0.5 * h, wronskian, omega_sq);
  const OscDerivState k4 = osc_rhs(add(s, h, k3), t + h, wronskian, omega_sq);
  s.xr += h / 6.0 * (k1.xr + 2.0 * k2.xr + 2.0 * k3.xr + k4.xr);
  s.xi += h / 6.0 * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi);
  s.vr += h / 6.0 * (k1.vr + 2.0 * k2.vr + 2.0 * k3.vr + k4.vr);
  s.vi += h / 6.0 * (k1.vi + 2.0 * k2.vi + 2.0 * k3.vi + k4.vi);
  s.phase += h / 6.0 * (k1.phase + 2.0 * k2.phase + 2.0 * k3.phase + k4.phase);
}

template <class OmegaSq>
inline void integrate_segment(OscDerivState& s, double t0, double t1, int substeps,
                              double wronskian, const OmegaSq& omega_sq) {
  const double h = (t1 - t0) / substeps;
  for (int i = 0; i < substeps; ++i) rk4_advance(s, t0 + i * h, h, wronskian, omega_sq);
}

inline OscillatorTrajectory solve_with_initial_conditions(
    const FrequencyProfile& profile, double t_end, double dt, double effective_mass,
    std::complex<double> x0, std::complex<double> v0, SubstepPolicy policy) {
  if (!(dt > 0.0)) throw argument_error("solve_trajectory: dt must be positive");
  if (!(t_end > 0.0)) throw argument_error("solve_trajectory: t_end must be positive");
  if (!(effective_mass > 0.0)) throw argument_error("solve_trajectory: mass must be positive");
  const long long n_steps = std::llround(t_end / dt);
  if (n_steps < 1 || std::abs(n_steps * dt - t_end) > 1e-9 * std::max(1.0, t_end))
    throw argument_error("solve_trajectory: t_end must be an integer multiple of dt");

  const double wronskian = std::imag(std::conj(x0) * v0);
  if (!(wronskian > 0.0))
    throw argument_error("solve_trajectory: initial conditions must have Im(conj(X) Xdot) > 0");

  int n_sub = 1;
  if (policy == SubstepPolicy::automatic) {
    const double scale = std::max(1.0, std::sqrt(profile.max_abs_omega_sq(0.0, t_end)));
    while (dt / n_sub * scale > 1.0 / 256.0 && n_sub < (1 << 20)) n_sub *= 2;
  }

  OscillatorTrajectory traj;
  traj.effective_mass = effective_mass;
  traj.dt = dt;
  traj.wronskian = wronskian;
  traj.times.reserve(n_steps + 1);
  traj.x.reserve(n_steps + 1);
  traj.x_dot.reserve(n_steps + 1);
  traj.phi.reserve(n_steps + 1);
  traj.phi_dot.reserve(n_steps + 1);
  traj.dlnx_dt.reserve(n_steps + 1);

  auto omega_sq = [&profile](double t) { return profile.omega_sq(t); };
  // for the segment ending at the switch, stay on the pre-switch branch
  auto omega_sq_pre = [&profile](double t) {
    if (const auto* q = std::get_if<SuddenQuench>(&profile.variant());
        q != nullptr && t >= q->t_switch)
      return q->omega_initial * q->omega_initial;
    return profile.omega_sq(t);
  };
  const auto ts = profile.switch_time();

  OscDerivState s{x0.real(), x0.imag(), v0.real(), v0.imag(), 0.0};
  auto push_sample = [&](double t) {
    const double r2 = s.xr * s.xr + s.xi * s.xi;
    if (!(r2 > 1e-250)) throw numerical_error("solve_trajectory: |X| underflow");
    traj.times.push_back(t);
    traj.x.emplace_back(s.xr, s.xi);
    traj.x_dot.emplace_back(s.vr, s.vi);
    traj.phi.push_back(s.phase);
    traj.phi_dot.push_back(wronskian / r2);
    traj.dlnx_dt.push_back((s.xr * s.vr + s.xi * s.vi) / r2);
    const std::size_t n = traj.phi.size();
    if (n >= 2 && !(std::abs(traj.phi[n - 1] - traj.phi[n - 2]) < std::numbers::pi))
      throw numerical_error("solve_trajectory: dt too coarse, phase advances >= pi per step");
  };

  push_sample(0.0);
  for (long long i = 0; i < n_steps; ++i) {
    const double ta = i * dt;
    const double tb = (i + 1) * dt;
    if (ts && *ts > ta + 1e-12 * std::max(1.0, std::abs(ta)) && *ts < tb - 1e-12) {
      // split the step at the discontinuity; never integrate across it
      const double frac = (*ts - ta) / dt;
      const int na = std::max(1, static_cast<int>(std::ceil(n_sub * frac)));
      const int nb = std::max(1, static_cast<int>(std::ceil(n_sub * (1.0 - frac))));
      integrate_segment(s, ta, *ts, na, wronskian, omega_sq_pre);
      integrate_segment(s, *ts, tb, nb, wronskian, omega_sq);
    } else {
      integrate_segment(s, ta, tb, n_sub, wronskian, omega_sq);
    }
    push_sample(tb);
  }
  return traj;
}

}  // namespace detail

/// Solve Xdd = -omega0^2(t) X on t in [0, t_end] sampled every dt.
/// Initial conditions: X(0) = 1, Xdot(0) = i nu with nu = omega0(0) when the
/// trap is initially on, else nu = 1 (free start), so that phi_dot(0) = nu
/// and d ln|X|/dt (0) = 0.
inline OscillatorTrajectory solve_trajectory(const FrequencyProfile& profile, double t_end,
                                             double dt, double effective_mass,
                                             SubstepPolicy policy = SubstepPolicy::automatic) {
  const double w0 = profile.initial_omega();
  const double nu = w0 > 0.0 ? w0 : 1.0;
  return detail::solve_with_initial_conditions(profile, t_end, dt, effective_mass,
                                               {1.0, 0.0}, {0.0, nu}, policy);
}

}  // namespace harmonium

#pragma once
// Closed-form centre-of-mass channel: 2D eigenstate radial functions
// chi_nm, the 3D radial solution chi_nl, the ground-state Gaussian density
// and the characteristic oscillator length a_cm(t). Evaluation is locked to
// the trajectory time grid; no temporal interpolation.
//
// Normalization conventions: 2D radial functions integrate to one with
// weight c dc (the angular factor exp(-im theta)/sqrt(2 pi) carries the
// 1/(2 pi)); 3D radial functions integrate to one with weight c^2 dc.

#include <cmath>
#include <complex>
#include <numbers>

#include "harmonium/errors.hpp"
#include "harmonium/oscillator.hpp"
#include "harmonium/specfun.hpp"

namespace harmonium::cm {

inline constexpr double cm_effective_mass = 2.0;

struct CMQuantumNumbers {
  int dimension;  // 2 or 3
  int n;          // main quantum number
  int angular;    // m in 2D, l in 3D

  static CMQuantumNumbers two_d(int n, int m) {
    if (n < 0 || m < 0)
      throw argument_error("quantum numbers: 2D requires n >= 0 and m >= 0");
    return {2, n, m};
  }

  // (n - l)/2 must be a valid Laguerre degree
  static CMQuantumNumbers three_d(int n, int l) {
    if (l < 0 || n < l) throw argument_error("quantum numbers: 3D requires n >= l >= 0");
    if ((n - l) % 2 != 0) throw argument_error("quantum numbers: 3D requires n - l even");
    return {3, n, l};
  }
};

struct TimeDependentCoefficients {
  std::complex<double> a;  // amplitude and accumulated phase
  std::complex<double> b;  // Gaussian exponent; Re(b) < 0
  double c;                // Laguerre argument scale, effective_mass * phi_dot > 0
};

/// A(t), B(t), C(t) of the 2D radial eigenstate on any trajectory (the
/// trajectory supplies the effective mass).
inline TimeDependentCoefficients coefficients_2d(const CMQuantumNumbers& qn,
                                                 const OscillatorTrajectory& traj, double t) {
  if (qn.dimension != 2) throw argument_error("coefficients_2d: needs 2D quantum numbers");
  const std::size_t i = traj.index_of(t);
  const double mass = traj.effective_mass;
  const double pd = traj.phi_dot[i];
  const double dln = traj.dlnx_dt[i];
  const double dphi = traj.phi[i] - traj.phi[0];
  const int n = qn.n;
  const int m = qn.angular;
  const double log_amp = 0.5 * (std::log(2.0) + specfun::log_gamma(n + 1.0) -
                                specfun::log_gamma(n + m + 1.0)) +
                         0.5 * (m + 1.0) * std::log(mass * pd);
  return {std::polar(std::exp(log_amp), -(2.0 * n + m + 1.0) * dphi),
          {-0.5 * mass * pd, 0.5 * mass * dln},
          mass * pd};
}

/// 2D radial eigenstate chi_nm(c, t) = A c^m exp(B c^2) L_n^m(C c^2).
inline std::complex<double> chi_2d(const CMQuantumNumbers& qn, const OscillatorTrajectory& traj,
                                   double c, double t) {
  if (!(c >= 0.0)) throw argument_error("chi_2d: radius must be nonnegative");
  const auto coef = coefficients_2d(qn, traj, t);
  const double c2 = c * c;
  return coef.a * std::pow(c, qn.angular) * std::exp(coef.b * c2) *
         specfun::laguerre(qn.n, qn.angular, coef.c * c2);
}

/// 3D radial solution chi_nl(c, t); phase advances as (n + 3/2)[phi - phi(0)].
inline std::complex<double> chi_3d(const CMQuantumNumbers& qn, const OscillatorTrajectory& traj,
                                   double c, double t) {
  if (qn.dimension != 3) throw argument_error("chi_3d: needs 3D quantum numbers");
  if (!(c >= 0.0)) throw argument_error("chi_3d: radius must be nonnegative");
  const std::size_t i = traj.index_of(t);
  const double mass = traj.effective_mass;
  const double pd = traj.phi_dot[i];
  const double dln = traj.dlnx_dt[i];
  const double dphi = traj.phi[i] - traj.phi[0];
  const int n = qn.n;
  const int l = qn.angular;
  const int j = (n - l) / 2;
  const double log_pref =
      0.5 * ((n + l + 2) * std::log(2.0) + (l + 1.5) * std::log(mass) +
             specfun::log_gamma(j + 1.0) + specfun::log_gamma((n + l) / 2 + 1.0) -
             0.5 * std::log(std::numbers::pi) - specfun::log_gamma(n + l + 2.0));
  const double amp = std::exp(log_pref + 0.25 * (2.0 * l + 3.0) * std::log(pd));
  const std::complex<double> bcoef{-0.5 * mass * pd, 0.5 * mass * dln};
  const double c2 = c * c;
  return std::polar(amp, -(n + 1.5) * dphi) * std::pow(c, l) * std::exp(bcoef * c2) *
         specfun::laguerre(j, l + 0.5, mass * pd * c2);
}

/// Characteristic oscillator length a(t) = [m phi_dot(t)]^{-1/2}.
inline double cm_length(const OscillatorTrajectory& traj, double t) {
  const std::size_t i = traj.index_of(t);
  return 1.0 / std::sqrt(traj.effective_mass * traj.phi_dot[i]);
}

/// Ground-state probability density |psi_000(c, t)|^2 =
/// exp(-c^2/a^2) / (a^3 pi^{3/2}), spherical harmonics included.
inline double cm_ground_density(const OscillatorTrajectory& traj, double c, double t) {
  const double a = cm_length(traj, t);
  const double u = c / a;
  return std::exp(-u * u) / (a * a * a * std::pow(std::numbers::pi, 1.5));
}

/// Centre-of-mass eigenstate bound to a mass-2 trajectory.
class CMState {
 public:
  CMState(CMQuantumNumbers qn, const OscillatorTrajectory& traj) : qn_(qn), traj_(&traj) {
    if (traj.effective_mass != cm_effective_mass)
      throw argument_error("CMState: trajectory must carry effective mass 2");
  }

  const CMQuantumNumbers& quantum_numbers() const { return qn_; }
  const OscillatorTrajectory& trajectory() const { return *traj_; }

 private:
  CMQuantumNumbers qn_;
  const OscillatorTrajectory* traj_;
};

inline TimeDependentCoefficients coefficients_2d(const CMState& state, double t) {
  return coefficients_2d(state.quantum_numbers(), state.trajectory(), t);
}

inline std::complex<double> chi_2d(const CMState& state, double c, double t) {
  return chi_2d(state.quantum_numbers(), state.trajectory(), c, t);
}

inline std::complex<double> chi_3d(const CMState& state, double c, double t) {
  return chi_3d(state.quantum_numbers(), state.trajectory(), c, t);
}

}  // namespace harmonium::cm

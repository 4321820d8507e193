#pragma once
// Relative-motion channel: interaction catalogue u(b), effective potential,
// imaginary-time ground-state relaxation, Crank-Nicolson real-time radial
// propagation, and the analytic Moshinsky mapping onto an effective
// centre-of-mass problem with mass 1/2 and force constant omega0^2(t) - 2K.
//
// The propagated object is the reduced radial wavefunction g(b) = b R(b) on
// off-origin nodes b_j = j h, j = 1..N, with Dirichlet zeros at b = 0 and one
// node beyond b_max; sum |g_j|^2 h = 1. The full wavefunction is
// psi(b) = R(b) Y_00 = g(b) / (b sqrt(4 pi)).

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "harmonium/cm.hpp"
#include "harmonium/errors.hpp"
#include "harmonium/frequency_profile.hpp"
#include "harmonium/oscillator.hpp"

namespace harmonium::rm {

inline constexpr double rm_effective_mass = 0.5;

class InteractionPotential {
 public:
  enum class Kind { none, moshinsky, coulomb, inverse_square };

  static InteractionPotential none() { return {Kind::none, 0.0}; }

  // u(b) = -K b^2 / 2
  static InteractionPotential moshinsky(double force_constant) {
    if (!(force_constant >= 0.0))
      throw argument_error("interaction: Moshinsky force constant must be >= 0");
    return {Kind::moshinsky, force_constant};
  }

  // u(b) = lambda / b
  static InteractionPotential coulomb(double lambda) {
    if (!(lambda >= 0.0))
      throw argument_error("interaction: Coulomb coupling must be >= 0 (repulsive)");
    return {Kind::coulomb, lambda};
  }

  // u(b) = lambda / b^2
  static InteractionPotential inverse_square(double lambda) {
    if (!(lambda >= 0.0))
      throw argument_error("interaction: inverse-square coupling must be >= 0 (repulsive)");
    return {Kind::inverse_square, lambda};
  }

  Kind kind() const { return kind_; }
  double strength() const { return strength_; }

  /// Interparticle pair energy u(b), b > 0.
  double pair_energy(double b) const {
    switch (kind_) {
      case Kind::none: return 0.0;
      case Kind::moshinsky: return -0.5 * strength_ * b * b;
      case Kind::coulomb: return strength_ / b;
      case Kind::inverse_square: return strength_ / (b * b);
    }
    return 0.0;
  }

  const char* name() const {
    switch (kind_) {
      case Kind::none: return "none";
      case Kind::moshinsky: return "moshinsky";
      case Kind::coulomb: return "coulomb";
      case Kind::inverse_square: return "inverse_square";
    }
    return "?";
  }

 private:
  InteractionPotential(Kind k, double s) : kind_(k), strength_(s) {}

  Kind kind_;
  double strength_;
};

/// V_eff(b) = (m_rm/2) omega0^2(t) b^2 + u(b).
inline double effective_potential(const InteractionPotential& u, double omega_sq, double b) {
  if (!(b > 0.0)) throw argument_error("effective_potential: requires b > 0");
  return 0.5 * rm_effective_mass * omega_sq * b * b + u.pair_energy(b);
}

struct RadialGrid {
  double b_max = 20.0;
  int n_points = 2000;

  RadialGrid() = default;
  RadialGrid(double bmax, int n) : b_max(bmax), n_points(n) {
    if (!(bmax > 0.0)) throw argument_error("radial grid: b_max must be positive");
    if (n < 8) throw argument_error("radial grid: needs at least 8 points");
  }

  double spacing() const { return b_max / n_points; }
  double node(int j) const { return (j + 1) * spacing(); }  // j = 0 .. n_points-1
};

struct RMState {
  RadialGrid grid;
  double time = 0.0;
  std::vector<std::complex<double>> g;

  double norm_sq() const {
    double s = 0.0;
    for (const auto& v : g) s += std::norm(v);
    return s * grid.spacing();
  }

  double boundary_amplitude() const { return g.empty() ? 0.0 : std::abs(g.back()); }
};

/// <g1|g2> h on a shared grid.
inline std::complex<double> overlap(const RMState& a, const RMState& b) {
  if (a.g.size() != b.g.size()) throw argument_error("overlap: grids differ");
  std::complex<double> s = 0.0;
  for (std::size_t j = 0; j < a.g.size(); ++j) s += std::conj(a.g[j]) * b.g[j];
  return s * a.grid.spacing();
}

namespace detail {

// (1 - z H) g -> rhs, H tridiagonal with Dirichlet ghosts.
inline void cn_rhs(const std::vector<double>& vpot, double kinetic, std::complex<double> z,
                   const std::vector<std::complex<double>>& g,
                   std::vector<std::complex<double>>& rhs) {
  const std::size_t n = g.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<double> hg = (2.0 * kinetic + vpot[j]) * g[j];
    if (j > 0) hg -= kinetic * g[j - 1];
    if (j + 1 < n) hg -= kinetic * g[j + 1];
    rhs[j] = g[j] - z * hg;
  }
}

// Thomas solve of (1 + z H) out = rhs; constant off-diagonal -z*kinetic.
inline void cn_solve(const std::vector<double>& vpot, double kinetic, std::complex<double> z,
                     const std::vector<std::complex<double>>& rhs,
                     std::vector<std::complex<double>>& out,
                     std::vector<std::complex<double>>& work) {
  const std::size_t n = rhs.size();
  const std::complex<double> off = -z * kinetic;
  work.resize(n);
  out.resize(n);
  std::complex<double> d = 1.0 + z * (2.0 * kinetic + vpot[0]);
  work[0] = off / d;
  out[0] = rhs[0] / d;
  for (std::size_t j = 1; j < n; ++j) {
    d = 1.0 + z * (2.0 * kinetic + vpot[j]) - off * work[j - 1];
    work[j] = off / d;
    out[j] = (rhs[j] - off * out[j - 1]) / d;
  }
  for (std::size_t j = n - 1; j-- > 0;) out[j] -= work[j] * out[j + 1];
}

// <g|H|g>/<g|g>; the grid spacing cancels.
inline double rayleigh_quotient(const std::vector<double>& vpot, double kinetic,
                                const std::vector<std::complex<double>>& g) {
  const std::size_t n = g.size();
  double e = 0.0;
  double nn = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<double> hg = (2.0 * kinetic + vpot[j]) * g[j];
    if (j > 0) hg -= kinetic * g[j - 1];
    if (j + 1 < n) hg -= kinetic * g[j + 1];
    e += std::real(std::conj(g[j]) * hg);
    nn += std::norm(g[j]);
  }
  return e / nn;
}

inline void normalize(std::vector<std::complex<double>>& g, double h) {
  double s = 0.0;
  for (const auto& v : g) s += std::norm(v);
  const double f = 1.0 / std::sqrt(s * h);
  for (auto& v : g) v *= f;
}

}  // namespace detail

struct RelaxationResult {
  RMState state;
  double energy = 0.0;
  int iterations = 0;
  double final_dtau = 0.0;
};

/// l = 0 ground state of -(1/(2 m_rm)) g'' + V_eff g = E g by imaginary-time
/// Crank-Nicolson with per-step renormalization. Converged when the relative
/// energy change drops below 1e-12 and the per-step state change below
/// 1e-13 (the energy is quadratically insensitive to the residual excited
/// weight; the state criterion is the binding one).
inline RelaxationResult relax_ground_state(const InteractionPotential& u, double omega0,
                                           const RadialGrid& grid) {
  if (!(omega0 > 0.0)) throw argument_error("relax_ground_state: omega0 must be positive");
  if (u.kind() == InteractionPotential::Kind::moshinsky &&
      !(omega0 * omega0 - 2.0 * u.strength() > 0.0))
    throw domain_error("unbound relative-motion channel: omega0^2 <= 2 K");

  const int n = grid.n_points;
  const double h = grid.spacing();
  const double kinetic = 1.0 / (2.0 * rm_effective_mass * h * h);
  std::vector<double> vpot(n);
  for (int j = 0; j < n; ++j) vpot[j] = effective_potential(u, omega0 * omega0, grid.node(j));

  // seed with the correct small-b exponent (b^s with s(s-1) = 2 m_rm lambda
  // for the inverse-square case, s = 1 otherwise)
  double s_exp = 1.0;
  if (u.kind() == InteractionPotential::Kind::inverse_square)
    s_exp = 0.5 * (1.0 + std::sqrt(1.0 + 8.0 * rm_effective_mass * u.strength()));
  std::vector<std::complex<double>> g(n);
  for (int j = 0; j < n; ++j) {
    const double b = grid.node(j);
    g[j] = std::pow(b, s_exp) * std::exp(-0.5 * rm_effective_mass * omega0 * b * b);
  }
  detail::normalize(g, h);

  double dtau = 1e-3;
  double energy = detail::rayleigh_quotient(vpot, kinetic, g);
  std::vector<std::complex<double>> rhs(n), next(n), work(n);
  const int cap = 100000;
  int it = 0;
  for (; it < cap; ++it) {
    detail::cn_rhs(vpot, kinetic, {0.5 * dtau, 0.0}, g, rhs);
    detail::cn_solve(vpot, kinetic, {0.5 * dtau, 0.0}, rhs, next, work);
    detail::normalize(next, h);
    const double e_next = detail::rayleigh_quotient(vpot, kinetic, next);
    double delta2 = 0.0;
    for (int j = 0; j < n; ++j) delta2 += std::norm(next[j] - g[j]);
    const double state_delta = std::sqrt(delta2 * h);
    const double scale = std::max(1.0, std::abs(e_next));
    if (e_next > energy + 1e-10 * scale) {
      dtau *= 0.5;  // energy oscillation
      if (dtau < 1e-9)
        throw numerical_error("relax_ground_state: imaginary-time step collapsed");
    }
    g.swap(next);
    const bool converged =
        std::abs(e_next - energy) < 1e-12 * scale && state_delta < 1e-13 && it > 10;
    energy = e_next;
    if (converged) break;
  }
  if (it >= cap)
    throw numerical_error("relax_ground_state: no convergence within 100000 iterations");

  RMState state{grid, 0.0, std::move(g)};
  return {std::move(state), energy, it + 1, dtau};
}

struct PropagationReport {
  double max_step_norm_drift = 0.0;  // max |norm^2(after) - norm^2(before)| per step
  double total_norm_drift = 0.0;     // |norm^2(final) - norm^2(initial)|
  double max_boundary_amplitude = 0.0;
};

using StateObserver = std::function<void(const RMState&)>;

/// Crank-Nicolson propagation with the midpoint-time potential
/// V_eff(t + dt/2). Unitary to round-off; aborts when the wavefunction
/// reaches the outer grid edge. A step must not straddle a quench switch.
inline RMState propagate(RMState state, const InteractionPotential& u,
                         const FrequencyProfile& profile, double dt, int n_steps,
                         const StateObserver& on_step = {},
                         PropagationReport* report = nullptr) {
  if (!(dt > 0.0)) throw argument_error("propagate: dt must be positive");
  if (n_steps < 0) throw argument_error("propagate: n_steps must be nonnegative");
  const double norm0 = state.norm_sq();
  if (std::abs(norm0 - 1.0) > 1e-6)
    throw argument_error("propagate: initial state is not normalized");
  if (const auto ts = profile.switch_time()) {
    const double local = (*ts - state.time) / dt;
    if (local > 1e-9 && local < n_steps - 1e-9 &&
        std::abs(local - std::round(local)) > 1e-9)
      throw argument_error(
          "propagate: a step would straddle t_switch; choose dt so the switch lies on the step grid");
  }

  const int n = state.grid.n_points;
  const double h = state.grid.spacing();
  const double kinetic = 1.0 / (2.0 * rm_effective_mass * h * h);
  const std::complex<double> z{0.0, 0.5 * dt};
  std::vector<double> vpot(n);
  std::vector<std::complex<double>> rhs(n), work(n);
  PropagationReport rep;
  double prev_norm = norm0;

  for (int k = 0; k < n_steps; ++k) {
    const double wsq = profile.omega_sq(state.time + 0.5 * dt);
    for (int j = 0; j < n; ++j) vpot[j] = effective_potential(u, wsq, state.grid.node(j));
    detail::cn_rhs(vpot, kinetic, z, state.g, rhs);
    detail::cn_solve(vpot, kinetic, z, rhs, state.g, work);
    state.time += dt;

    const double nn = state.norm_sq();
    rep.max_step_norm_drift = std::max(rep.max_step_norm_drift, std::abs(nn - prev_norm));
    prev_norm = nn;
    const double edge = state.boundary_amplitude();
    rep.max_boundary_amplitude = std::max(rep.max_boundary_amplitude, edge);
    if (edge > 1e-4)
      throw numerical_error(
          "propagate: radial grid too small, wavefunction reached b_max (|g_N| > 1e-4)");
    if (on_step) on_step(state);
  }
  rep.total_norm_drift = std::abs(prev_norm - norm0);
  if (report) *report = rep;
  return state;
}

/// Snapshots every `stride` steps (the initial state included).
inline std::vector<RMState> propagate_series(const RMState& initial,
                                             const InteractionPotential& u,
                                             const FrequencyProfile& profile, double dt,
                                             int n_steps, int stride,
                                             PropagationReport* report = nullptr) {
  if (stride < 1) throw argument_error("propagate_series: stride must be >= 1");
  std::vector<RMState> out;
  out.push_back(initial);
  int count = 0;
  propagate(
      initial, u, profile, dt, n_steps,
      [&](const RMState& s) {
        if (++count % stride == 0) out.push_back(s);
      },
      report);
  return out;
}

/// Frequency-squared profile of the mapped problem, omega0^2(t) - K/m_rm.
inline FrequencyProfile moshinsky_mapped_profile(double force_constant,
                                                 const FrequencyProfile& profile) {
  return profile.shifted(-force_constant / rm_effective_mass);
}

/// Classical trajectory of the Moshinsky-mapped relative channel (effective
/// mass 1/2). Throws domain_error when the channel is unbound anywhere in
/// the run interval.
inline OscillatorTrajectory moshinsky_trajectory(double force_constant,
                                                 const FrequencyProfile& profile,
                                                 double t_end, double dt) {
  if (!(force_constant >= 0.0))
    throw argument_error("moshinsky_trajectory: force constant must be >= 0");
  const FrequencyProfile mapped = moshinsky_mapped_profile(force_constant, profile);
  if (!(mapped.min_omega_sq(0.0, t_end) > 0.0))
    throw domain_error("unbound relative-motion channel: omega0^2(t) - 2 K <= 0 in the run");
  return solve_trajectory(mapped, t_end, dt, rm_effective_mass);
}

/// Analytic relative-motion wavefunction psi(b, t) of a Moshinsky atom
/// started in its ground state; the 1/sqrt(4 pi) angular factor is included.
inline std::complex<double> moshinsky_rm_state(const OscillatorTrajectory& mapped, double b,
                                               double t) {
  if (mapped.effective_mass != rm_effective_mass)
    throw argument_error("moshinsky_rm_state: trajectory must carry effective mass 1/2");
  return cm::chi_3d(cm::CMQuantumNumbers::three_d(0, 0), mapped, b, t) /
         std::sqrt(4.0 * std::numbers::pi);
}

/// Same state sampled as a reduced grid state, g_j = b_j R(b_j).
inline RMState moshinsky_rm_grid_state(const OscillatorTrajectory& mapped,
                                       const RadialGrid& grid, double t) {
  if (mapped.effective_mass != rm_effective_mass)
    throw argument_error("moshinsky_rm_grid_state: trajectory must carry effective mass 1/2");
  const auto qn = cm::CMQuantumNumbers::three_d(0, 0);
  RMState s{grid, t, std::vector<std::complex<double>>(grid.n_points)};
  for (int j = 0; j < grid.n_points; ++j) {
    const double b = grid.node(j);
    s.g[j] = b * cm::chi_3d(qn, mapped, b, t);
  }
  return s;
}

}  // namespace harmonium::rm

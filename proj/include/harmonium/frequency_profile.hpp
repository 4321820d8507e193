#pragma once
// Declarative descriptions of the confinement frequency omega0^2(t):
// constant trap, sudden quench, periodic drive and tabulated profiles.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "harmonium/errors.hpp"

namespace harmonium {

struct Constant {
  double omega0;
};

struct SuddenQuench {
  double omega_initial;
  double omega_final;
  double t_switch;
};

// omega0^2(t) = omega_base^2 (1 + amplitude cos(omega_drive t))
struct PeriodicDrive {
  double omega_base;
  double amplitude;
  double omega_drive;
};

// piecewise-linear omega0^2 between strictly ascending knots
struct Tabulated {
  std::vector<double> times;
  std::vector<double> omega_sq;
};

class FrequencyProfile {
 public:
  using Variant = std::variant<Constant, SuddenQuench, PeriodicDrive, Tabulated>;

  FrequencyProfile(Constant c) : v_(c) {  // NOLINT: implicit by design
    if (!(c.omega0 > 0.0))
      throw argument_error("frequency profile: constant omega0 must be positive");
  }

  FrequencyProfile(SuddenQuench q) : v_(q) {
    if (!(q.omega_initial > 0.0) || !(q.omega_final > 0.0))
      throw argument_error("frequency profile: quench frequencies must be positive");
    if (!std::isfinite(q.t_switch))
      throw argument_error("frequency profile: t_switch must be finite");
  }

  FrequencyProfile(PeriodicDrive d) : v_(d) {
    if (!(d.omega_base > 0.0))
      throw argument_error("frequency profile: drive base frequency must be positive");
    if (!(d.omega_drive > 0.0))
      throw argument_error("frequency profile: drive frequency must be positive");
    if (!std::isfinite(d.amplitude))
      throw argument_error("frequency profile: drive amplitude must be finite");
  }

  FrequencyProfile(Tabulated t) : v_(std::move(t)) {
    const auto& tab = std::get<Tabulated>(v_);
    if (tab.times.size() < 2 || tab.times.size() != tab.omega_sq.size())
      throw argument_error("frequency profile: tabulated needs >= 2 matching knots");
    for (std::size_t i = 0; i + 1 < tab.times.size(); ++i)
      if (!(tab.times[i] < tab.times[i + 1]))
        throw argument_error("frequency profile: tabulated times must be strictly ascending");
    for (double v : tab.omega_sq)
      if (!std::isfinite(v))
        throw argument_error("frequency profile: tabulated omega_sq must be finite");
  }

  double omega_sq(double t) const {
    return std::visit(
        [t](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Constant>) {
            return p.omega0 * p.omega0;
          } else if constexpr (std::is_same_v<T, SuddenQuench>) {
            const double w = t < p.t_switch ? p.omega_initial : p.omega_final;
            return w * w;
          } else if constexpr (std::is_same_v<T, PeriodicDrive>) {
            return p.omega_base * p.omega_base *
                   (1.0 + p.amplitude * std::cos(p.omega_drive * t));
          } else {
            if (t < p.times.front() || t > p.times.back())
              throw std::out_of_range("frequency profile: t outside tabulated range");
            auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
            if (it == p.times.end()) return p.omega_sq.back();
            const std::size_t hi = static_cast<std::size_t>(it - p.times.begin());
            const std::size_t lo = hi - 1;
            const double f = (t - p.times[lo]) / (p.times[hi] - p.times[lo]);
            return p.omega_sq[lo] + f * (p.omega_sq[hi] - p.omega_sq[lo]);
          }
        },
        v_);
  }

  /// Frequency whose ground state the system occupies at t = 0. For a
  /// quench with t_switch >= 0 this is the pre-switch frequency; for the
  /// drive it is the undriven base (the modulation switches on at t = 0).
  /// Returns 0 when the trap is initially off (tabulated zeros).
  double initial_omega() const {
    return std::visit(
        [this](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Constant>) {
            return p.omega0;
          } else if constexpr (std::is_same_v<T, SuddenQuench>) {
            return p.t_switch >= 0.0 ? p.omega_initial : p.omega_final;
          } else if constexpr (std::is_same_v<T, PeriodicDrive>) {
            return p.omega_base;
          } else {
            return std::sqrt(std::max(0.0, omega_sq(0.0)));
          }
        },
        v_);
  }

  /// Discontinuity instant, if the profile has one.
  std::optional<double> switch_time() const {
    if (const auto* q = std::get_if<SuddenQuench>(&v_)) return q->t_switch;
    return std::nullopt;
  }

  double min_omega_sq(double t0, double t1) const { return extremum(t0, t1, false); }
  double max_omega_sq(double t0, double t1) const { return extremum(t0, t1, true); }
  double max_abs_omega_sq(double t0, double t1) const {
    return std::max(std::abs(extremum(t0, t1, false)), std::abs(extremum(t0, t1, true)));
  }

  /// Profile with omega0^2(t) shifted by a constant, staying in the same
  /// family. Used by the Moshinsky mapping (shift = -K / m_rm). Throws
  /// domain_error when the shifted profile cannot remain confining.
  FrequencyProfile shifted(double delta) const {
    return std::visit(
        [delta](const auto& p) -> FrequencyProfile {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Constant>) {
            const double w2 = p.omega0 * p.omega0 + delta;
            if (!(w2 > 0.0))
              throw domain_error("shifted constant profile is no longer confining");
            return FrequencyProfile(Constant{std::sqrt(w2)});
          } else if constexpr (std::is_same_v<T, SuddenQuench>) {
            const double wi2 = p.omega_initial * p.omega_initial + delta;
            const double wf2 = p.omega_final * p.omega_final + delta;
            if (!(wi2 > 0.0) || !(wf2 > 0.0))
              throw domain_error("shifted quench profile is no longer confining");
            return FrequencyProfile(
                SuddenQuench{std::sqrt(wi2), std::sqrt(wf2), p.t_switch});
          } else if constexpr (std::is_same_v<T, PeriodicDrive>) {
            const double wb2 = p.omega_base * p.omega_base + delta;
            if (!(wb2 > 0.0))
              throw domain_error("shifted drive profile is no longer confining");
            // omega_base^2 (1 + a cos) + delta = wb2 (1 + a' cos)
            const double a_new = p.amplitude * p.omega_base * p.omega_base / wb2;
            return FrequencyProfile(PeriodicDrive{std::sqrt(wb2), a_new, p.omega_drive});
          } else {
            Tabulated shiftedTab = p;
            for (double& v : shiftedTab.omega_sq) v += delta;
            return FrequencyProfile(std::move(shiftedTab));
          }
        },
        v_);
  }

  const Variant& variant() const { return v_; }

  std::string describe() const {
    std::ostringstream os;
    std::visit(
        [&os](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Constant>) {
            os << "constant(omega0=" << p.omega0 << ")";
          } else if constexpr (std::is_same_v<T, SuddenQuench>) {
            os << "sudden_quench(omega_initial=" << p.omega_initial
               << ", omega_final=" << p.omega_final << ", t_switch=" << p.t_switch << ")";
          } else if constexpr (std::is_same_v<T, PeriodicDrive>) {
            os << "periodic_drive(omega_base=" << p.omega_base
               << ", amplitude=" << p.amplitude << ", omega_drive=" << p.omega_drive << ")";
          } else {
            os << "tabulated(" << p.times.size() << " knots, t in [" << p.times.front()
               << ", " << p.times.back() << "])";
          }
        },
        v_);
    return os.str();
  }

 private:
  double extremum(double t0, double t1, bool want_max) const {
    if (!(t1 >= t0)) throw argument_error("frequency profile: empty interval");
    const double sign = want_max ? -1.0 : 1.0;
    auto better = [&](double a, double b) { return sign * a < sign * b ? a : b; };
    return std::visit(
        [&](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Constant>) {
            return p.omega0 * p.omega0;
          } else if constexpr (std::is_same_v<T, SuddenQuench>) {
            const double wi2 = p.omega_initial * p.omega_initial;
            const double wf2 = p.omega_final * p.omega_final;
            if (t1 < p.t_switch) return wi2;
            if (t0 >= p.t_switch) return wf2;
            return better(wi2, wf2);
          } else if constexpr (std::is_same_v<T, PeriodicDrive>) {
            // candidate phases: endpoints and the cos extrema in between
            const double wb2 = p.omega_base * p.omega_base;
            double best = wb2 * (1.0 + p.amplitude * std::cos(p.omega_drive * t0));
            best = better(best, wb2 * (1.0 + p.amplitude * std::cos(p.omega_drive * t1)));
            const double half_period = std::numbers::pi / p.omega_drive;
            const long k0 = static_cast<long>(std::ceil(t0 / half_period - 1e-12));
            const long k1 = static_cast<long>(std::floor(t1 / half_period + 1e-12));
            for (long k = k0; k <= k1 && k <= k0 + 3; ++k) {
              const double c = (k % 2 != 0) ? -1.0 : 1.0;
              best = better(best, wb2 * (1.0 + p.amplitude * c));
            }
            return best;
          } else {
            if (t0 < p.times.front() || t1 > p.times.back())
              throw std::out_of_range("frequency profile: interval outside tabulated range");
            double best = omega_sq(t0);
            best = better(best, omega_sq(t1));
            for (std::size_t i = 0; i < p.times.size(); ++i)
              if (p.times[i] > t0 && p.times[i] < t1) best = better(best, p.omega_sq[i]);
            return best;
          }
        },
        v_);
  }

  Variant v_;
};

/// omega0^2(t) for a profile; SuddenQuench returns the final branch at
/// t = t_switch.
inline double evaluate_omega_sq(const FrequencyProfile& profile, double t) {
  return profile.omega_sq(t);
}

}  // namespace harmonium

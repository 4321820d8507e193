#pragma once
// Self-contained special functions backing the closed-form solutions:
// log-Gamma, binomial coefficients, generalized Laguerre polynomials,
// Bessel J0, spherical j0, sinh(x)/x and the Kummer confluent
// hypergeometric function M(a, b, x).

#include <cmath>
#include <limits>
#include <numbers>

#include "harmonium/errors.hpp"

namespace harmonium::specfun {

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients.
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,  676.5203681218851,      -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,    12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6,  1.5056327351493116e-7};

}  // namespace detail

/// ln Gamma(x) for x > 0, accurate to better than 1e-13 relative.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw argument_error("log_gamma: requires x > 0");
  if (x < 0.5) {
    // reflection keeps the series argument away from the poles
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
           log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double acc = detail::lanczos_c[0];
  for (int i = 1; i < 9; ++i) acc += detail::lanczos_c[i] / (z + i);
  const double t = z + detail::lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(acc);
}

/// Binomial coefficient C(n, k); exact while the value is representable
/// (the running product stays integer-valued at every step).
inline double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw argument_error("binomial: requires 0 <= k <= n");
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / i;
  return static_cast<double>(r);
}

/// Generalized Laguerre polynomial L_n^alpha(x) by the three-term
/// recurrence in the degree. alpha > -1 keeps the weight integrable.
inline double laguerre(int n, double alpha, double x) {
  if (n < 0) throw argument_error("laguerre: degree must be nonnegative");
  if (!(alpha > -1.0)) throw argument_error("laguerre: requires alpha > -1");
  if (n == 0) return 1.0;
  double lkm1 = 1.0;
  double lk = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double lkp1 = ((2.0 * k + 1.0 + alpha - x) * lk - (k + alpha) * lkm1) / (k + 1.0);
    lkm1 = lk;
    lk = lkp1;
  }
  return lk;
}

/// Bessel function of the first kind J0(x), x >= 0. Ascending series in
/// extended precision up to x = 16, Hankel asymptotic expansion beyond.
inline double bessel_j0(double x) {
  if (!(x >= 0.0)) throw argument_error("bessel_j0: requires x >= 0");
  if (x <= 16.0) {
    const long double q = static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int m = 1; m < 120; ++m) {
      term *= -q / (static_cast<long double>(m) * m);
      sum += term;
      if (std::abs(term) < 1e-21L * std::abs(sum) + 1e-40L) break;
    }
    return static_cast<double>(sum);
  }
  // J0 = sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)] with
  // P = 1 - a2 + a4 - ..., Q = -a1 + a3 - ..., a_m = a_{m-1} (2m-1)^2/(8 m x),
  // truncated at the smallest term.
  const double inv8x = 1.0 / (8.0 * x);
  double p = 1.0, q = 0.0;
  double a = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int m = 1; m < 40; ++m) {
    const double odd = 2.0 * m - 1.0;
    a *= odd * odd * inv8x / m;
    if (a >= prev) break;
    prev = a;
    switch (m % 4) {
      case 1: q -= a; break;
      case 2: p -= a; break;
      case 3: q += a; break;
      default: p += a; break;
    }
    if (a < 1e-18) break;
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

/// Spherical Bessel j0(x) = sin(x)/x.
inline double sph_bessel_j0(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

/// sinh(x)/x with a Taylor branch near zero; overflow is flagged, not
/// returned as infinity.
inline double sinhc(double x) {
  const double ax = std::abs(x);
  if (ax > 700.0) throw numerical_error("sinhc: |x| > 700 overflows");
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

namespace detail {

inline bool is_nonpositive_integer(double v) {
  return v <= 0.0 && std::abs(v - std::round(v)) < 1e-12;
}

// Taylor series sum_k (a)_k x^k / ((b)_k k!); terminates when three
// consecutive terms contribute < 1e-16 relative, hard cap 500 terms.
inline double kummer_series(double a, double b, double x) {
  long double sum = 1.0L;
  long double term = 1.0L;
  int quiet = 0;
  for (int k = 0; k < 500; ++k) {
    term *= (static_cast<long double>(a) + k) * x /
            ((static_cast<long double>(b) + k) * (k + 1.0L));
    sum += term;
    if (term == 0.0L) return static_cast<double>(sum);  // terminating polynomial
    if (std::abs(term) < 1e-16L * std::abs(sum)) {
      if (++quiet >= 3) return static_cast<double>(sum);
    } else {
      quiet = 0;
    }
  }
  throw numerical_error("kummer_m: series did not converge within 500 terms");
}

}  // namespace detail

/// Kummer confluent hypergeometric M(a, b, x), real arguments, b not a
/// nonpositive integer. Negative x is routed through the transformation
/// M(a,b,x) = e^x M(b-a,b,-x); the direct series alternates there and
/// cancels catastrophically.
inline double kummer_m(double a, double b, double x) {
  if (detail::is_nonpositive_integer(b))
    throw argument_error("kummer_m: b must not be a nonpositive integer");
  if (x == 0.0) return 1.0;
  if (x > 0.0) return detail::kummer_series(a, b, x);
  const double an = std::round(a);
  if (std::abs(b - 1.0) < 1e-14 && a >= 0.5 && std::abs(a - an) < 1e-12 && an < 1e6) {
    // integer a, b = 1: M(a,1,x) = e^x L_{a-1}(-x)
    return std::exp(x) * laguerre(static_cast<int>(an) - 1, 0.0, -x);
  }
  return std::exp(x) * detail::kummer_series(b - a, b, -x);
}

}  // namespace harmonium::specfun

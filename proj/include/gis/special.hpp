#pragma once

// Confluent hypergeometric series 1F1(a; b; z) and 0F1(; b; z) by direct
// Taylor summation with a rigorous geometric tail bound.
//
// Stopping rule: after term n the remaining tail is bounded by
// |t_{n+1}| / (1 - rho), where rho bounds every later term ratio
//   |t_{m+1}/t_m| = |f(m)| |z| / (m+1),   m >= n+1,
// with f(m) = (a+m)/(b+m) for 1F1 and 1/(b+m) for 0F1. For m > |b|:
//   |(a+m)/(b+m)| <= 1 + |a-b|/(m-|b|),   |1/(b+m)| <= 1/(m-|b|).
// Summation stops once the tail bound is below 1e-15 |partial sum|. The
// reported bound adds a rounding estimate eps * sum|t_n|.
//
// Contiguous relation used in the tests (any solution of Kummer's equation):
//   (b-a) M(a-1,b,z) + (2a-b+z) M(a,b,z) - a M(a+1,b,z) = 0.

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "gis/core.hpp"

namespace gis::special {

struct SeriesResult {
  cplx value;
  long terms_used = 0;
  double bound = 0.0;  // estimated absolute error
};

inline constexpr long kMaxTerms = 1'000'000;
inline constexpr double kRelTol = 1e-15;

inline bool is_nonpositive_integer(cplx x) {
  return x.imag() == 0.0 && x.real() <= 0.0 && x.real() == std::round(x.real());
}

/// log((x)_n) = sum_{i<n} log(x + i), for x > 0.
inline double ln_pochhammer(double x, unsigned long n) {
  double acc = 0.0;
  for (unsigned long i = 0; i < n; ++i) acc += std::log(x + static_cast<double>(i));
  return acc;
}

namespace detail {

// factor(m) is the parameter part of t_{m+1}/t_m (without z/(m+1)); it may
// vanish, which terminates the series. factor_bound(n) bounds |factor(m)|
// for all m >= n+1, or returns +inf when no bound is available yet.
template <class Factor, class FactorBound>
SeriesResult sum_hypergeometric(cplx z, Factor factor, FactorBound factor_bound, const char* name) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  SeriesResult r{cplx(1.0), 1, 0.0};
  if (z == cplx(0.0)) return r;

  cplx term(1.0);
  double abs_sum = 1.0;
  const double zabs = std::abs(z);
  for (long n = 0; n < kMaxTerms; ++n) {
    const cplx f = factor(n);
    if (f == cplx(0.0)) {  // polynomial case: every later term is zero
      r.bound = eps * abs_sum;
      return r;
    }
    const cplx next = term * f * z / static_cast<double>(n + 1);
    if (!is_finite(next)) throw Error(ErrorKind::NoConvergence, std::string(name) + ": term overflow");

    double tail = std::numeric_limits<double>::infinity();
    const double rho = factor_bound(n) * zabs / (static_cast<double>(n) + 2.0);
    if (rho < 1.0) tail = std::abs(next) / (1.0 - rho);
    if (tail <= kRelTol * std::abs(r.value) || tail == 0.0) {
      r.bound = tail + eps * abs_sum;
      return r;
    }
    term = next;
    r.value += term;
    abs_sum += std::abs(term);
    ++r.terms_used;
  }
  throw Error(ErrorKind::NoConvergence, std::string(name) + ": term cap reached");
}

}  // namespace detail

/// Kummer's function M(a, b, z) = 1F1(a; b; z).
inline SeriesResult hyp1f1(cplx a, cplx b, cplx z) {
  require_finite(a, "a");
  require_finite(b, "b");
  require_finite(z, "z");
  if (is_nonpositive_integer(b)) {
    const bool polynomial = is_nonpositive_integer(a) && a.real() >= b.real();
    if (!polynomial) throw Error(ErrorKind::PoleAtB, "b is a non-positive integer");
  }
  const double amb = std::abs(a - b), babs = std::abs(b);
  return detail::sum_hypergeometric(
      z,
      [a, b](long n) {
        const cplx num = a + static_cast<double>(n);
        return num == cplx(0.0) ? num : num / (b + static_cast<double>(n));
      },
      [amb, babs](long n) {
        const double gap = static_cast<double>(n) + 1.0 - babs;
        return gap > 0.0 ? 1.0 + amb / gap : std::numeric_limits<double>::infinity();
      },
      "hyp1f1");
}

/// 0F1(; b; z).
inline SeriesResult hyp0f1(cplx b, cplx z) {
  require_finite(b, "b");
  require_finite(z, "z");
  if (is_nonpositive_integer(b)) throw Error(ErrorKind::PoleAtB, "b is a non-positive integer");
  const double babs = std::abs(b);
  return detail::sum_hypergeometric(
      z, [b](long n) { return cplx(1.0) / (b + static_cast<double>(n)); },
      [babs](long n) {
        const double gap = static_cast<double>(n) + 1.0 - babs;
        return gap > 0.0 ? 1.0 / gap : std::numeric_limits<double>::infinity();
      },
      "hyp0f1");
}

}  // namespace gis::special

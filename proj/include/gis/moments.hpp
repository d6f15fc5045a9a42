#pragma once

// First and second moments of (A, B, C), both sides of the
// Robertson-Schroedinger relation
//   var_A var_B >= (<C>^2 + 4 cov_AB^2) / 4,
// the squeezing parameters q = (<C>/2 - var)/(<C>/2), and the closed-form
// moment predictions for GIS and coherent states.

#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include "gis/core.hpp"
#include "gis/repkit.hpp"

namespace gis {

inline constexpr double kImagTol = 1e-10;
inline constexpr double kUndefinedQTol = 1e-10;
inline constexpr double kMomentTailTol = 1e-8;

struct MomentReport {
  double mean_a = 0.0, mean_b = 0.0, mean_c = 0.0;
  double var_a = 0.0, var_b = 0.0;
  double cov_ab = 0.0;
  double ur_lhs = 0.0;    // var_A var_B
  double ur_rhs = 0.0;    // (<C>^2 + 4 cov^2) / 4
  double residual = 0.0;  // lhs - rhs, >= 0 up to rounding
  std::optional<double> q_a, q_b;
};

namespace detail {

inline double real_expectation(cplx value, const char* what) {
  if (std::abs(value.imag()) > kImagTol)
    throw Error(ErrorKind::HermiticityViolation,
                std::string(what) + " has imaginary part " + std::to_string(value.imag()));
  return value.real();
}

inline std::optional<double> q_from(double mean_c, double var) {
  if (!(std::abs(mean_c) > kUndefinedQTol)) return std::nullopt;
  const double half = mean_c / 2.0;
  return (half - var) / half;
}

}  // namespace detail

/// q_A and q_B of a report; nullopt when <C> vanishes.
inline std::pair<std::optional<double>, std::optional<double>> squeezing_q(const MomentReport& r) {
  return {detail::q_from(r.mean_c, r.var_a), detail::q_from(r.mean_c, r.var_b)};
}

inline MomentReport compute_moments(const Representation& rep, const StateVector& psi) {
  if (psi.dim() != rep.dim())
    throw Error(ErrorKind::DimensionMismatch, "state dimension " + std::to_string(psi.dim()) +
                                                   " vs representation " + std::to_string(rep.dim()));
  if (rep.truncated() && psi.tail_mass() >= kMomentTailTol)
    throw Error(ErrorKind::TailMassTooLarge, "tail mass " + std::to_string(psi.tail_mass()));

  const CVector& v = psi.amps();
  const CVector av = rep.a.apply(v), bv = rep.b.apply(v), cv = rep.c.apply(v);

  MomentReport r;
  r.mean_a = detail::real_expectation(v.dot(av), "<A>");
  r.mean_b = detail::real_expectation(v.dot(bv), "<B>");
  r.mean_c = detail::real_expectation(v.dot(cv), "<C>");
  // <A^2> = ||A psi||^2 and <AB + BA> = 2 Re <A psi|B psi> for Hermitian A, B.
  const double a2 = av.squaredNorm(), b2 = bv.squaredNorm();
  const double sym = detail::real_expectation(av.dot(bv) + bv.dot(av), "<AB+BA>");
  r.var_a = a2 - r.mean_a * r.mean_a;
  r.var_b = b2 - r.mean_b * r.mean_b;
  r.cov_ab = 0.5 * sym - r.mean_a * r.mean_b;
  r.ur_lhs = r.var_a * r.var_b;
  r.ur_rhs = 0.25 * (r.mean_c * r.mean_c + 4.0 * r.cov_ab * r.cov_ab);
  r.residual = r.ur_lhs - r.ur_rhs;
  std::tie(r.q_a, r.q_b) = squeezing_q(r);
  return r;
}

struct PredictedMoments {
  double var_a, var_b, cov_ab;
};

/// Second moments of any eigenstate of L(lambda) with Re(lambda) != 0:
/// (<C>/(2 Re l), |l|^2 <C>/(2 Re l), -<C> Im l/(2 Re l)).
inline PredictedMoments predicted_gis_moments(cplx lambda, double mean_c) {
  if (lambda.real() == 0.0) throw Error(ErrorKind::ZeroRealPart, "Re(lambda) = 0");
  const double denom = 2.0 * lambda.real();
  return {mean_c / denom, std::norm(lambda) * mean_c / denom, -mean_c * lambda.imag() / denom};
}

/// q values every GIS must show: substituting the predicted variances into
/// q gives 1 - 1/Re(l) and 1 - |l|^2/Re(l).
inline std::pair<double, double> gis_q_closed_form(cplx lambda) {
  if (lambda.real() == 0.0) throw Error(ErrorKind::ZeroRealPart, "Re(lambda) = 0");
  return {1.0 - 1.0 / lambda.real(), 1.0 - std::norm(lambda) / lambda.real()};
}

/// The alternative form 1 - 1/(2 Re l), 1 - |l|^2/(2 Re l) that appears in
/// the literature; it disagrees with the moments (at lambda = 1 it gives 1/2
/// instead of 0) and is only emitted for comparison.
inline std::pair<double, double> gis_q_printed_form(cplx lambda) {
  if (lambda.real() == 0.0) throw Error(ErrorKind::ZeroRealPart, "Re(lambda) = 0");
  return {1.0 - 1.0 / (2.0 * lambda.real()), 1.0 - std::norm(lambda) / (2.0 * lambda.real())};
}

/// Variances of K1, K2 and their covariance in the Perelomov state |zeta;k>.
struct PerelomovMoments {
  double var_k1, var_k2, cov_k1k2;
};

inline PerelomovMoments perelomov_moments_analytic(double k, cplx zeta) {
  if (!(std::abs(zeta) < 1.0)) throw Error(ErrorKind::OutsideDisk, "|zeta| must be below 1");
  const double d = 1.0 - std::norm(zeta);
  const double d2 = d * d;
  const cplx z2 = zeta * zeta;
  return {0.5 * k * std::norm(1.0 + z2) / d2, 0.5 * k * std::norm(1.0 - z2) / d2,
          -2.0 * k * zeta.real() * zeta.imag() / d2};
}

/// Variance of J1 and covariance of (J1, J2) in the Bloch state |tau;-j>.
/// No closed form for var(J2) is used; take it from compute_moments.
struct BlochMoments {
  double var_j1, cov_j1j2;
};

inline BlochMoments bloch_moments_analytic(double j, cplx tau) {
  require_finite(tau, "tau");
  const double d = 1.0 + std::norm(tau);
  const double d2 = d * d;
  return {0.5 * j * std::norm(1.0 - tau * tau) / d2, 2.0 * j * tau.real() * tau.imag() / d2};
}

}  // namespace gis

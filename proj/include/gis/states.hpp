#pragma once

// State constructors: SU(2) and SU(1,1) generalized intelligent states
// (eigenstates of L(lambda) = lambda*A + i*B), the canonical Q-P squeezed
// states, and the Perelomov, Bloch and Barut-Girardello coherent states.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "gis/core.hpp"
#include "gis/linalg.hpp"
#include "gis/repkit.hpp"
#include "gis/special.hpp"

namespace gis {

inline constexpr std::size_t kInitialTruncation = 128;
inline constexpr std::size_t kTruncationCap = 8192;
inline constexpr double kGisTailTol = 1e-10;
inline constexpr double kGisResidualTol = 1e-9;
inline constexpr double kCoherentTailTol = 1e-12;

struct GisSpec {
  cplx lambda;
  cplx z;
  RepPtr rep;
};

/// A GIS together with its numerical certificate.
struct GisSolution {
  GisSpec spec;
  StateVector state;
  double residual = 0.0;   // ||L(lambda) psi - z psi||
  double tail_mass = 0.0;  // weight in the last 10% of the basis
};

/// u = (lambda+1)/2, v = (lambda-1)/2, so that L(lambda) = u L + v L^dagger.
struct LambdaSplit {
  cplx u, v;
  explicit LambdaSplit(cplx lambda) : u((lambda + 1.0) / 2.0), v((lambda - 1.0) / 2.0) {}
};

inline double eigen_residual(const Representation& rep, cplx lambda, cplx z, const StateVector& psi) {
  if (psi.dim() != rep.dim()) throw Error(ErrorKind::DimensionMismatch, "state and representation differ in dimension");
  const CVector r = lambda_operator(rep, lambda).apply(psi.amps()) - z * psi.amps();
  return r.norm();
}

// ---------------------------------------------------------------------------
// SU(2)

struct Su2Eigenpair {
  int n = 0;  // index N in z_N = (j - N) sqrt(lambda^2 - 1)
  cplx z;
  StateVector state;
};

struct Su2Spectrum {
  std::vector<Su2Eigenpair> pairs;
  bool defective = false;  // lambda = +-1: one eigenvector only
};

/// All eigenpairs of L(lambda) = lambda J1 - i J2, sorted by N.
inline Su2Spectrum solve_su2_gis(const Representation& rep, cplx lambda) {
  if (rep.kind != Algebra::SU2) throw Error(ErrorKind::WrongAlgebra, "solve_su2_gis needs an SU2 representation");
  require_finite(lambda, "lambda");
  const LambdaSplit uv(lambda);
  const DenseMatrix l = lambda_operator(rep, lambda).dense();
  Su2Spectrum out;

  constexpr double kDefectTol = 1e-12;
  if (std::abs(uv.u) < kDefectTol || std::abs(uv.v) < kDefectTol) {
    // L is a single Jordan block (pure J- or J+); its kernel is the one eigenvector.
    const DenseMatrix kernel = linalg::null_space(l, 1e-10);
    out.defective = true;
    const int n = std::abs(uv.v) < kDefectTol ? 0 : static_cast<int>(rep.dim()) - 1;  // |-j> or |+j>
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) out.pairs.push_back({n, cplx(0.0), StateVector(kernel.col(c))});
    return out;
  }

  const linalg::EigenPairs ep = linalg::eig(l);
  const cplx s = principal_sqrt(lambda * lambda - 1.0);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(ep.values.size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  // z_N / s = j - N decreases with N.
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return (ep.values[x] / s).real() > (ep.values[y] / s).real();
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Eigen::Index c = order[i];
    out.pairs.push_back({static_cast<int>(i), ep.values[c], StateVector(ep.vectors.col(c))});
  }
  return out;
}

/// Eigenpairs of the Hermitian operator r A + B (= r J1 - J2), ascending.
inline std::vector<std::pair<double, StateVector>> hermitian_limit_states(const Representation& rep, double r) {
  if (rep.kind != Algebra::SU2)
    throw Error(ErrorKind::WrongAlgebra, "r A + B has no normalizable eigenstates when C is positive");
  const DenseMatrix f = DenseMatrix(rep.a.m * cplx(r) + rep.b.m);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(f);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "Hermitian eigensolver failed");
  std::vector<std::pair<double, StateVector>> out;
  for (Eigen::Index c = 0; c < f.cols(); ++c)
    out.emplace_back(solver.eigenvalues()[c], StateVector(solver.eigenvectors().col(c)));
  return out;
}

/// Bloch coherent state (1+|tau|^2)^{-j} exp(tau J+)|-j>.
inline StateVector bloch_cs(Spin spin, cplx tau) {
  require_finite(tau, "tau");
  const int two_j = spin.twice();
  CVector amps(two_j + 1);
  if (tau == cplx(0.0)) {
    amps.setZero();
    amps[0] = 1.0;
    return StateVector(std::move(amps));
  }
  // log of (1+|tau|^2)^{-j} |tau|^N sqrt(binomial(2j, N)), phase N arg(tau)
  const double j = spin.value();
  const double pre = -j * std::log1p(std::norm(tau));
  const double ltau = std::log(std::abs(tau));
  const double phase = std::arg(tau);
  const double lg2j = std::lgamma(two_j + 1.0);
  for (int n = 0; n <= two_j; ++n) {
    const double lbin = lg2j - std::lgamma(n + 1.0) - std::lgamma(two_j - n + 1.0);
    amps[n] = std::polar(std::exp(pre + n * ltau + 0.5 * lbin), n * phase);
  }
  return StateVector(std::move(amps));
}

inline StateVector bloch_cs(double j, cplx tau) { return bloch_cs(Spin::from_double(j), tau); }

// ---------------------------------------------------------------------------
// Tridiagonal eigen-recurrences (SU(1,1) and oscillator)

namespace detail {

/// Solves u*ell(m)*c[m+1] + v*ell(m-1)*c[m-1] = z*c[m] forward from c[0] = 1,
/// where ell(m) = <m|A+iB|m+1>. Amplitudes are rescaled on the fly so that
/// non-normalizable runs do not overflow.
template <class Ladder>
CVector ladder_recurrence(Ladder ell, cplx u, cplx v, cplx z, std::size_t n) {
  CVector c = CVector::Zero(static_cast<Eigen::Index>(n));
  c[0] = 1.0;
  if (n > 1) c[1] = z / (u * ell(0));
  for (std::size_t m = 1; m + 1 < n; ++m) {
    const auto i = static_cast<Eigen::Index>(m);
    c[i + 1] = (z * c[i] - v * ell(m - 1) * c[i - 1]) / (u * ell(m));
    if (std::abs(c[i + 1]) > 1e150) c.head(i + 2) *= 1e-150;
  }
  return c;
}

inline double su11_ladder(double k, std::size_t m) {
  const double md = static_cast<double>(m);
  return std::sqrt((md + 1.0) * (2.0 * k + md));
}

/// Q + iP = sqrt(2) a.
inline double qp_ladder(std::size_t m) { return std::sqrt(2.0 * static_cast<double>(m + 1)); }

template <class Ladder>
GisSolution solve_ladder_gis(const Representation& rep, cplx lambda, cplx z, Ladder ell,
                             const std::function<Representation(std::size_t)>& rebuild, std::size_t cap) {
  require_finite(lambda, "lambda");
  require_finite(z, "z");
  if (!(lambda.real() > 0.0))
    throw Error(ErrorKind::PreconditionReLambda, "Re(lambda) must be positive for a positive commutator");
  const LambdaSplit uv(lambda);

  std::size_t n = rep.dim();
  RepPtr current = std::make_shared<const Representation>(rep);
  double last_tail = 1.0, last_residual = 0.0;
  while (true) {
    if (current->dim() != n) current = std::make_shared<const Representation>(rebuild(n));
    StateVector psi(ladder_recurrence(ell, uv.u, uv.v, z, n));
    last_tail = psi.tail_mass();
    if (last_tail < kGisTailTol) {
      last_residual = eigen_residual(*current, lambda, z, psi);
      if (last_residual < kGisResidualTol)
        return GisSolution{GisSpec{lambda, z, current}, std::move(psi), last_residual, last_tail};
    }
    if (2 * n > cap) break;
    n *= 2;
  }
  if (last_tail >= kGisTailTol)
    throw Error(ErrorKind::NonNormalizable, "tail mass " + std::to_string(last_tail) + " at truncation cap");
  throw Error(ErrorKind::NoConvergence, "eigen-residual " + std::to_string(last_residual) + " at truncation cap");
}

}  // namespace detail

/// SU(1,1) GIS by forward three-term recurrence, doubling the truncation
/// until the tail mass and eigen-residual certificates pass.
inline GisSolution solve_su11_gis(const Representation& rep, cplx lambda, cplx z, std::size_t cap = kTruncationCap) {
  if (rep.kind != Algebra::SU11) throw Error(ErrorKind::WrongAlgebra, "solve_su11_gis needs an SU11 representation");
  const double k = rep.k;
  return detail::solve_ladder_gis(
      rep, lambda, z, [k](std::size_t m) { return detail::su11_ladder(k, m); },
      [k](std::size_t n) { return build_su11_rep(k, n); }, cap);
}

/// Canonical Q-P GIS (squeezed coherent states): eigenstates of lambda Q + i P.
inline GisSolution solve_qp_gis(const Representation& rep, cplx lambda, cplx z, std::size_t cap = kTruncationCap) {
  if (rep.kind != Algebra::CanonicalQP || rep.k != 0.0)
    throw Error(ErrorKind::WrongAlgebra, "solve_qp_gis needs the canonical Q-P representation");
  return detail::solve_ladder_gis(
      rep, lambda, z, [](std::size_t m) { return detail::qp_ladder(m); },
      [](std::size_t n) { return build_qp_realization(n + n % 2).canonical; }, cap);
}

// ---------------------------------------------------------------------------
// Coherent states

namespace detail {

/// Perelomov amplitudes (1-|zeta|^2)^k zeta^m sqrt((2k)_m / m!), m < n.
inline CVector perelomov_amplitudes(double k, cplx zeta, std::size_t n) {
  CVector c = CVector::Zero(static_cast<Eigen::Index>(n));
  c[0] = 1.0;
  if (zeta == cplx(0.0)) return c;
  const double pre = k * std::log1p(-std::norm(zeta));
  const double lz = std::log(std::abs(zeta)), ph = std::arg(zeta);
  double lw = 0.0;  // log sqrt((2k)_m / m!)
  for (std::size_t m = 0; m < n; ++m) {
    const double md = static_cast<double>(m);
    if (m > 0) lw += 0.5 * (std::log(2.0 * k + md - 1.0) - std::log(md));
    c[static_cast<Eigen::Index>(m)] = std::polar(std::exp(pre + md * lz + lw), md * ph);
  }
  return c;
}

/// Barut-Girardello amplitudes z^m / sqrt(m! (2k)_m), m < n (unnormalized).
inline CVector bg_amplitudes(double k, cplx z, std::size_t n) {
  CVector c = CVector::Zero(static_cast<Eigen::Index>(n));
  c[0] = 1.0;
  if (z == cplx(0.0)) return c;
  const double lz = std::log(std::abs(z)), ph = std::arg(z);
  double ln = 0.0;  // log sqrt(m! (2k)_m)
  for (std::size_t m = 1; m < n; ++m) {
    const double md = static_cast<double>(m);
    ln += 0.5 * (std::log(md) + std::log(2.0 * k + md - 1.0));
    c[static_cast<Eigen::Index>(m)] = std::polar(std::exp(md * lz - ln), md * ph);
  }
  return c;
}

}  // namespace detail

/// Perelomov SU(1,1) coherent state (1-|zeta|^2)^k exp(zeta K+)|k;k>.
inline StateVector perelomov_cs(double k, cplx zeta, std::size_t truncation = kInitialTruncation,
                                std::size_t cap = kTruncationCap) {
  require_finite(zeta, "zeta");
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidBargmannIndex, "k must be positive");
  if (!(std::abs(zeta) < 1.0)) throw Error(ErrorKind::OutsideDisk, "|zeta| must be below 1");
  for (std::size_t n = std::max<std::size_t>(truncation, 4);; n *= 2) {
    StateVector psi(detail::perelomov_amplitudes(k, zeta, n));
    if (psi.tail_mass() < kCoherentTailTol) return psi;
    if (2 * n > cap) throw Error(ErrorKind::TruncationCap, "Perelomov state does not fit the truncation cap");
  }
}

/// Barut-Girardello coherent state: eigenstate of K- with eigenvalue z.
inline StateVector bg_cs(double k, cplx z, std::size_t truncation = kInitialTruncation,
                         std::size_t cap = kTruncationCap) {
  require_finite(z, "z");
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidBargmannIndex, "k must be positive");
  for (std::size_t n = std::max<std::size_t>(truncation, 4);; n *= 2) {
    StateVector psi(detail::bg_amplitudes(k, z, n));
    if (psi.tail_mass() < kCoherentTailTol) {
      const Representation rep = build_su11_rep(k, n);
      const double res = (rep.lower.apply(psi.amps()) - z * psi.amps()).norm();
      if (res < kGisResidualTol) return psi;
    }
    if (2 * n > cap) throw Error(ErrorKind::TruncationCap, "|z| too large for the truncation cap");
  }
}

// ---------------------------------------------------------------------------
// SU(1,1) GIS via the confluent hypergeometric solution
//
// In the analytic (Barut-Girardello) realization K+ = x, K- = 2k d/dx +
// x d^2/dx^2, so the monomial x^m is the unnormalized basis vector |m> with
// norm N_m = sqrt(m! (2k)_m). The eigen-equation of L(lambda) becomes
// Kummer's equation with solution
//   Phi(x) = exp(c x) 1F1(a; 2k; -2 c x),  a = k - z/(2 u c),  c^2 = -v/u,
// and the ket amplitudes are psi_m = phi_m N_m for Phi(x) = sum phi_m x^m.
// (The bra-side function <psi|x;k> carries the conjugate coefficients.)
//
// phi_m = c^m / m! * sum_{n<=m} binom(m, n) (a)_n / (2k)_n (-2)^n. The
// alternating sum loses about m*log10(3) digits, so it is accumulated in
// 100-digit arithmetic and the coefficient run is cut where the estimated
// error reaches the amplitude scale.

struct AnalyticBranch {
  cplx c;                  // branch of sqrt(-v/u)
  CVector amps;            // unnormalized, zero past `computed`
  std::size_t computed = 0;
  double interior_residual = 0.0;  // relative, rows clear of the truncation edge
  double series_check = 0.0;       // |sum phi_m x0^m - Phi(x0)| / |Phi(x0)|
};

namespace detail {

using mp_real = boost::multiprecision::cpp_bin_float_100;
using mp_cplx = boost::multiprecision::cpp_complex_100;

inline mp_cplx to_mp(cplx x) { return mp_cplx(mp_real(x.real()), mp_real(x.imag())); }
inline cplx from_mp(const mp_cplx& x) { return {x.real().convert_to<double>(), x.imag().convert_to<double>()}; }
inline mp_real mp_abs1(const mp_cplx& x) { return abs(x.real()) + abs(x.imag()); }

inline constexpr double kMpEps = 1e-97;
inline constexpr double kAmplitudeFloor = 1e-20;

inline double relative_interior_residual(double k, cplx lambda, cplx z, const CVector& amps) {
  const Representation rep = build_su11_rep(k, static_cast<std::size_t>(amps.size()));
  const LambdaSplit uv(lambda);
  const CVector lo = uv.u * rep.lower.apply(amps), hi = uv.v * rep.raise.apply(amps);
  const CVector l = lo + hi;
  const Eigen::Index rows = amps.size() - static_cast<Eigen::Index>(rep.boundary_rows);
  // Scale by the separate terms: at z = 0, L psi itself is the residual.
  const double scale = lo.head(rows).norm() + hi.head(rows).norm() + std::abs(z) * amps.head(rows).norm();
  return (l.head(rows) - z * amps.head(rows)).norm() / std::max(scale, 1e-300);
}

/// phi_m * N_m for one branch of c, m < n.
inline AnalyticBranch analytic_branch(double k, cplx lambda, cplx z, std::size_t n, cplx c) {
  const LambdaSplit uv(lambda);
  const cplx a = k - z / (2.0 * uv.u * c);
  const double b = 2.0 * k;
  AnalyticBranch out{c, CVector::Zero(static_cast<Eigen::Index>(n)), 0, 0.0, 0.0};

  std::vector<mp_cplx> ratio;  // (a+j)/(b+j) * (-2)
  ratio.reserve(n);
  const mp_cplx ma = to_mp(a);
  const mp_cplx mc = to_mp(c);
  mp_cplx cpow(1);
  double peak = 0.0, lw = 0.0;  // lw = log sqrt((2k)_m / m!)
  std::size_t quiet = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const double md = static_cast<double>(m);
    ratio.push_back((ma + mp_real(md)) / mp_real(b + md) * mp_real(-2));
    if (m > 0) {
      cpow *= mc;
      lw += 0.5 * (std::log(b + md - 1.0) - std::log(md));
    }
    mp_cplx sum(0), term(1);
    mp_real abs_sum(0);
    for (std::size_t j = 0; j <= m; ++j) {
      sum += term;
      abs_sum += mp_abs1(term);
      term *= ratio[j] * (mp_real(static_cast<double>(m - j)) / mp_real(static_cast<double>(j + 1)));
    }
    const double w = std::exp(lw);
    const mp_cplx prod = cpow * sum;
    const cplx amp = from_mp(prod) * w;
    const double err = static_cast<double>(abs(cpow) * abs_sum) * w * kMpEps;
    peak = std::max(peak, std::abs(amp));
    if (err > 1e-14 * peak) break;
    out.amps[static_cast<Eigen::Index>(m)] = amp;
    out.computed = m + 1;
    quiet = std::abs(amp) < kAmplitudeFloor * peak ? quiet + 1 : 0;
    if (quiet >= 10) break;
  }
  return out;
}

inline void check_branch(double k, cplx lambda, cplx z, AnalyticBranch& br, const std::function<cplx(cplx)>& phi) {
  br.interior_residual = relative_interior_residual(k, lambda, z, br.amps);
  // Re-sum the monomial series at a small x0 and compare with the
  // special-function value of the closed form.
  const cplx x0(0.3, 0.2);
  cplx series(0.0), xp(1.0);
  double ln = 0.0;  // log N_m
  for (Eigen::Index m = 0; m < br.amps.size() && static_cast<std::size_t>(m) < br.computed; ++m) {
    if (m > 0) ln += 0.5 * (std::log(static_cast<double>(m)) + std::log(2.0 * k + static_cast<double>(m) - 1.0));
    series += br.amps[m] * std::exp(-ln) * xp;
    xp *= x0;
  }
  const cplx exact = phi(x0);
  br.series_check = std::abs(series - exact) / std::max(std::abs(exact), 1e-300);
}

}  // namespace detail

inline constexpr double kBranchResidualTol = 1e-8;
inline constexpr double kSeriesCheckTol = 1e-10;

/// Both branches c = +-sqrt(-v/u) of the closed-form solution (one entry
/// when c = 0, i.e. lambda = 1, where the 0F1 form is used).
inline std::vector<AnalyticBranch> su11_gis_analytic_branches(double k, cplx lambda, cplx z, std::size_t truncation) {
  require_finite(lambda, "lambda");
  require_finite(z, "z");
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidBargmannIndex, "k must be positive");
  if (!(lambda.real() > 0.0)) throw Error(ErrorKind::PreconditionReLambda, "Re(lambda) must be positive");
  if (truncation < 4) throw Error(ErrorKind::InvalidTruncation, "truncation must be >= 4");
  const LambdaSplit uv(lambda);
  const cplx c = principal_sqrt(-uv.v / uv.u);
  if (!(std::abs(c) < 1.0)) throw Error(ErrorKind::OutsideDisk, "|c| must be below 1");

  std::vector<AnalyticBranch> out;
  if (std::abs(c) < 1e-12) {
    // lambda = 1: Phi(x) = 0F1(; 2k; z x), the Barut-Girardello state.
    AnalyticBranch br{cplx(0.0), detail::bg_amplitudes(k, z, truncation), truncation, 0.0, 0.0};
    detail::check_branch(k, lambda, z, br, [&](cplx x) { return special::hyp0f1(2.0 * k, z * x).value; });
    out.push_back(std::move(br));
    return out;
  }
  for (const cplx branch : {c, -c}) {
    AnalyticBranch br = detail::analytic_branch(k, lambda, z, truncation, branch);
    const cplx a = k - z / (2.0 * uv.u * branch);
    detail::check_branch(k, lambda, z, br, [&](cplx x) {
      return std::exp(branch * x) * special::hyp1f1(a, 2.0 * k, -2.0 * branch * x).value;
    });
    out.push_back(std::move(br));
  }
  return out;
}

/// SU(1,1) GIS from the confluent hypergeometric closed form. Returns the
/// principal branch when it satisfies the eigen-equation, else the other.
inline StateVector su11_gis_analytic(double k, cplx lambda, cplx z, std::size_t truncation) {
  const auto branches = su11_gis_analytic_branches(k, lambda, z, truncation);
  for (const auto& br : branches) {
    if (br.series_check < kSeriesCheckTol && br.interior_residual < kBranchResidualTol) {
      const std::size_t head = br.computed;
      if (head < truncation) {
        // The unresolved remainder must carry negligible weight.
        const double total = br.amps.squaredNorm();
        const auto start = static_cast<Eigen::Index>(tail_start(head));
        const double edge = br.amps.segment(start, static_cast<Eigen::Index>(head) - start).squaredNorm();
        if (edge > 1e-14 * total)
          throw Error(ErrorKind::NoConvergence, "precision exhausted before the amplitudes decayed");
      }
      return StateVector(br.amps);
    }
  }
  throw Error(ErrorKind::BranchMismatch, "no branch of sqrt(-v/u) satisfies the eigen-equation");
}

}  // namespace gis

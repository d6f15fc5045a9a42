#pragma once

// Executable checks: non-existence of eigenstates of r A + B for positive C
// (as non-convergence of tail mass), eigenvalue multiplicity of L(lambda),
// the Perelomov embedding at z = k sqrt(1 - lambda^2), and the quadrature
// squeezing of the k = 1/4 oscillator states.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gis/core.hpp"
#include "gis/linalg.hpp"
#include "gis/moments.hpp"
#include "gis/repkit.hpp"
#include "gis/states.hpp"

namespace gis {

enum class Verdict { Converges, Diverges, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converges: return "Converges";
    case Verdict::Diverges: return "Diverges";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct DivergenceEvidence {
  std::vector<std::size_t> truncations;
  std::vector<double> tail_masses;
  Verdict verdict = Verdict::Inconclusive;
};

inline constexpr double kConvergedTail = 1e-10;
inline constexpr double kDivergedTail = 1e-6;
inline constexpr double kDivergenceSlack = 0.9;  // "non-decreasing within 10%"

/// Verdict from a tail-mass ladder: Converges once the last tail is below
/// 1e-10; Diverges when no doubling shrinks the tail by more than 10% and
/// the tail stays macroscopic.
inline Verdict classify_tails(const std::vector<double>& tails) {
  if (tails.back() < kConvergedTail) return Verdict::Converges;
  bool flat = tails.back() >= kDivergedTail;
  for (std::size_t i = 1; i < tails.size(); ++i) flat = flat && tails[i] >= kDivergenceSlack * tails[i - 1];
  return flat ? Verdict::Diverges : Verdict::Inconclusive;
}

/// Runs the SU(1,1) eigen-recurrence of L(lambda) on a truncation ladder,
/// without the Re(lambda) > 0 precondition.
inline DivergenceEvidence divergence_probe(double k, cplx lambda, cplx z, const std::vector<std::size_t>& truncations) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidBargmannIndex, "k must be positive");
  if (truncations.size() < 3) throw Error(ErrorKind::InvalidTruncation, "need at least three truncations");
  for (std::size_t i = 0; i < truncations.size(); ++i)
    if (truncations[i] < 4 || (i > 0 && truncations[i] <= truncations[i - 1]))
      throw Error(ErrorKind::InvalidTruncation, "truncations must be strictly increasing and >= 4");

  const LambdaSplit uv(lambda);
  DivergenceEvidence ev;
  ev.truncations = truncations;
  for (const std::size_t n : truncations) {
    const StateVector psi(detail::ladder_recurrence([k](std::size_t m) { return detail::su11_ladder(k, m); }, uv.u,
                                                    uv.v, z, n));
    ev.tail_masses.push_back(psi.tail_mass());
  }
  ev.verdict = classify_tails(ev.tail_masses);
  return ev;
}

/// Probe at lambda = i r. The default z = 1 is generic: at z = 0 the
/// amplitudes decay like m^{-1/2} and the divergence is only logarithmic.
inline DivergenceEvidence axis_divergence_probe(double k, double r, const std::vector<std::size_t>& truncations,
                                                cplx z = 1.0) {
  return divergence_probe(k, cplx(0.0, r), z, truncations);
}

struct MultiplicityReport {
  cplx lambda, z;
  int algebraic_count = 0;
  int geometric_count = 0;
  double tol = 0.0;
  std::vector<std::size_t> truncations;  // SU11: ladder the counts were checked on
};

inline constexpr double kMultiplicityTol = 1e-7;
inline constexpr double kRankTol = 1e-8;

namespace detail {

/// SU(2): eigenvalues of L(lambda) within tol of z, and the rank of their
/// eigenvectors.
inline MultiplicityReport su2_multiplicity(const Representation& rep, cplx lambda, cplx z, double tol) {
  const DenseMatrix l = lambda_operator(rep, lambda).dense();
  const linalg::EigenPairs ep = linalg::eig(l);
  MultiplicityReport r{lambda, z, 0, 0, tol, {rep.dim()}};
  std::vector<Eigen::Index> hits;
  for (Eigen::Index i = 0; i < ep.values.size(); ++i)
    if (std::abs(ep.values[i] - z) < tol) hits.push_back(i);
  r.algebraic_count = static_cast<int>(hits.size());
  if (!hits.empty()) {
    DenseMatrix stack(l.rows(), static_cast<Eigen::Index>(hits.size()));
    for (std::size_t c = 0; c < hits.size(); ++c) stack.col(static_cast<Eigen::Index>(c)) = ep.vectors.col(hits[c]);
    r.geometric_count = linalg::numerical_rank(stack, kRankTol);
  }
  return r;
}

/// SU(1,1) at one truncation n. The truncated matrix has no eigenvalue near
/// a generic z, so the counts come from the eigen-equation itself:
///   algebraic: independent solutions of (L - z) psi = 0 on the rows clear
///              of the truncation edge (null space of that block);
///   geometric: rank of the normalizable ones together with both branches
///              of the closed-form solution.
inline std::pair<int, int> su11_counts(double k, cplx lambda, cplx z, std::size_t n) {
  const Representation rep = build_su11_rep(k, n);
  const DenseMatrix l = lambda_operator(rep, lambda).dense() - z * DenseMatrix::Identity(n, n);
  const Eigen::Index rows = static_cast<Eigen::Index>(n - rep.boundary_rows);
  const DenseMatrix kernel = linalg::null_space(l.topRows(rows), kRankTol);

  std::vector<CVector> candidates;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    const StateVector s(kernel.col(c));
    if (s.tail_mass() < kGisTailTol) candidates.push_back(s.amps());
  }
  for (const auto& br : su11_gis_analytic_branches(k, lambda, z, n)) {
    if (br.interior_residual < kBranchResidualTol) candidates.push_back(StateVector(br.amps).amps());
  }
  int geometric = 0;
  if (!candidates.empty()) {
    DenseMatrix stack(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(candidates.size()));
    for (std::size_t c = 0; c < candidates.size(); ++c) stack.col(static_cast<Eigen::Index>(c)) = candidates[c];
    geometric = linalg::numerical_rank(stack, kRankTol);
  }
  return {static_cast<int>(kernel.cols()), geometric};
}

}  // namespace detail

/// Multiplicity of z as an eigenvalue of L(lambda). For SU11 the counts must
/// agree at the representation's truncation M and at 2M and 4M.
inline MultiplicityReport multiplicity_probe(const Representation& rep, cplx lambda, cplx z,
                                             double tol = kMultiplicityTol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::ConfigError, "tolerance must be positive");
  require_finite(lambda, "lambda");
  require_finite(z, "z");
  if (rep.kind == Algebra::SU2) return detail::su2_multiplicity(rep, lambda, z, tol);
  if (rep.kind != Algebra::SU11) throw Error(ErrorKind::WrongAlgebra, "multiplicity probe supports su2 and su11");
  if (!(lambda.real() > 0.0)) throw Error(ErrorKind::PreconditionReLambda, "Re(lambda) must be positive");

  MultiplicityReport r{lambda, z, 0, 0, tol, {}};
  std::pair<int, int> first{-1, -1};
  for (std::size_t n = rep.dim(), step = 0; step < 3; ++step, n *= 2) {
    const auto counts = detail::su11_counts(rep.k, lambda, z, n);
    r.truncations.push_back(n);
    if (step == 0) first = counts;
    else if (counts != first)
      throw Error(ErrorKind::InconclusiveTruncation, "multiplicity counts change with truncation");
  }
  r.algebraic_count = first.first;
  r.geometric_count = first.second;
  return r;
}

struct PerelomovEmbeddingCheck {
  double fidelity_plus = 0.0;   // z' = +k sqrt(1 - lambda^2)
  double fidelity_minus = 0.0;  // z' = -k sqrt(1 - lambda^2)
  int zeta_sign_plus = 0;       // sign of zeta = +-sqrt(-v/u) that matched
  int zeta_sign_minus = 0;
};

/// Compares the GIS at z' = +-k sqrt(1 - lambda^2) with the Perelomov states
/// at zeta = +-sqrt(-v/u), keeping the best pairing for each sign of z'.
inline PerelomovEmbeddingCheck perelomov_embedding_check(double k, cplx lambda) {
  if (!(lambda.real() > 0.0)) throw Error(ErrorKind::PreconditionReLambda, "Re(lambda) must be positive");
  const LambdaSplit uv(lambda);
  const cplx zeta = principal_sqrt(-uv.v / uv.u);
  if (!(std::abs(zeta) < 1.0)) throw Error(ErrorKind::OutsideDisk, "|sqrt(-v/u)| must be below 1");
  const cplx zp = k * principal_sqrt(1.0 - lambda * lambda);

  PerelomovEmbeddingCheck out;
  for (const int zsign : {+1, -1}) {
    const GisSolution gis = solve_su11_gis(build_su11_rep(k, kInitialTruncation), lambda, double(zsign) * zp);
    double best = -1.0;
    int best_sign = 0;
    for (const int s : {+1, -1}) {
      const StateVector cs(detail::perelomov_amplitudes(k, double(s) * zeta, gis.state.dim()));
      const double f = fidelity(gis.state, cs);
      if (f > best) best = f, best_sign = s;
    }
    (zsign > 0 ? out.fidelity_plus : out.fidelity_minus) = best;
    (zsign > 0 ? out.zeta_sign_plus : out.zeta_sign_minus) = best_sign;
  }
  return out;
}

enum class QpFamily { BG_k14, Perelomov_k14 };

inline const char* to_string(QpFamily f) { return f == QpFamily::BG_k14 ? "bg" : "perelomov"; }

struct SqueezeRow {
  cplx param;
  double var_q = 0.0, var_p = 0.0;
  double percent_squeeze = 0.0;  // 100 (1/2 - min var) / (1/2)
};

inline constexpr double kVacuumVariance = 0.5;

/// k = 1/4 states live on the even Fock states of the oscillator; returns
/// their Q and P variances against the vacuum value 1/2.
inline std::vector<SqueezeRow> qp_squeezing_scan(QpFamily family, const std::vector<cplx>& grid, std::size_t truncation) {
  if (truncation < 256 || truncation % 2 != 0)
    throw Error(ErrorKind::InvalidTruncation, "scan truncation must be even and >= 256");
  const QpRealization qp = build_qp_realization(truncation);
  const std::size_t half = truncation / 2;
  std::vector<SqueezeRow> rows;
  rows.reserve(grid.size());
  for (const cplx param : grid) {
    require_finite(param, "scan parameter");
    CVector even;
    if (family == QpFamily::Perelomov_k14) {
      if (!(std::abs(param) < 1.0)) throw Error(ErrorKind::OutsideDisk, "|zeta| must be below 1");
      even = detail::perelomov_amplitudes(0.25, param, half);
    } else {
      even = detail::bg_amplitudes(0.25, param, half);
    }
    CVector full = CVector::Zero(static_cast<Eigen::Index>(truncation));
    for (std::size_t m = 0; m < half; ++m) full[static_cast<Eigen::Index>(2 * m)] = even[static_cast<Eigen::Index>(m)];
    const MomentReport mom = compute_moments(qp.canonical, StateVector(full));
    const double vmin = std::min(mom.var_a, mom.var_b);
    rows.push_back({param, mom.var_a, mom.var_b, 100.0 * (kVacuumVariance - vmin) / kVacuumVariance});
  }
  return rows;
}

inline const SqueezeRow& max_squeeze(const std::vector<SqueezeRow>& rows) {
  if (rows.empty()) throw Error(ErrorKind::ConfigError, "empty scan");
  return *std::max_element(rows.begin(), rows.end(), [](const SqueezeRow& a, const SqueezeRow& b) {
    return a.percent_squeeze < b.percent_squeeze;
  });
}

}  // namespace gis

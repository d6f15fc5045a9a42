#pragma once

// Matrix representations of su(2), su(1,1) (discrete series D+(k)) and the
// canonical Q-P pair, plus assembly of L(lambda) = lambda*A + i*B.
//
// Conventions: basis ordered by ascending eigenvalue of the diagonal
// generator; A, B, C satisfy [A, B] = iC.
//   SU2:  A = J1, B = -J2, C = -J3 (basis m = -j..j)
//   SU11: A = K1, B = -K2, C = K3  (basis m = 0..truncation-1)
//   QP:   A = Q,  B = P,   C = 1   (Fock basis n = 0..truncation-1)

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "gis/core.hpp"

namespace gis {

enum class Algebra { SU2, SU11, CanonicalQP };

inline const char* to_string(Algebra a) {
  switch (a) {
    case Algebra::SU2: return "su2";
    case Algebra::SU11: return "su11";
    case Algebra::CanonicalQP: return "qp";
  }
  return "?";
}

/// Spin quantum number stored as the integer 2j.
class Spin {
 public:
  static Spin from_double(double j) {
    const double twice = 2.0 * j;
    if (!std::isfinite(j) || twice < 1.0 || std::abs(twice - std::round(twice)) > 1e-12)
      throw Error(ErrorKind::InvalidSpin, "2j must be a positive integer, got j = " + std::to_string(j));
    return Spin(static_cast<int>(std::lround(twice)));
  }
  static Spin from_twice(int two_j) {
    if (two_j < 1) throw Error(ErrorKind::InvalidSpin, "2j must be a positive integer");
    return Spin(two_j);
  }

  int twice() const { return two_j_; }
  double value() const { return 0.5 * two_j_; }
  std::size_t dim() const { return static_cast<std::size_t>(two_j_) + 1; }

 private:
  explicit Spin(int two_j) : two_j_(two_j) {}
  int two_j_;
};

struct Representation {
  Algebra kind = Algebra::SU2;
  double j = 0.0;               // SU2 only
  double k = 0.0;               // SU11 (and the k = 1/4 oscillator view)
  std::size_t truncation = 0;   // SU11 / QP; equals dim for SU2
  OperatorMatrix a, b, c;
  OperatorMatrix raise, lower;  // J+/J-, K+/K-, a^dagger/a
  /// Trailing rows where [A, B] = iC fails because of truncation.
  std::size_t boundary_rows = 0;

  std::size_t dim() const { return a.dim(); }
  bool truncated() const { return kind != Algebra::SU2; }
};

using RepPtr = std::shared_ptr<const Representation>;

namespace detail {

inline OperatorMatrix labelled(SparseMatrix m, OpLabel label) { return OperatorMatrix{std::move(m), label}; }

/// Fills A = (X+ + X-)/2, B = -(X+ - X-)/(2i) given the raising operator.
inline void set_from_ladder(Representation& rep, const SparseMatrix& up) {
  SparseMatrix down = up.adjoint();
  SparseMatrix gen1 = (up + down) * cplx(0.5);
  SparseMatrix gen2 = (up - down) * cplx(0.0, -0.5);
  rep.a = labelled(gen1, OpLabel::A);
  rep.b = labelled(-gen2, OpLabel::B);
  rep.raise = labelled(up, OpLabel::Ladder);
  rep.lower = labelled(down, OpLabel::Ladder);
}

inline void require_truncation(std::size_t n, std::size_t min, const char* what) {
  if (n < min)
    throw Error(ErrorKind::InvalidTruncation,
                std::string(what) + " truncation must be >= " + std::to_string(min));
}

}  // namespace detail

inline constexpr std::size_t kMaxSu2Dim = 10000;

inline Representation build_su2_rep(Spin spin) {
  const std::size_t n = spin.dim();
  if (n > kMaxSu2Dim) throw Error(ErrorKind::InvalidSpin, "2j+1 exceeds 10000");
  const double j = spin.value();
  Representation rep;
  rep.kind = Algebra::SU2;
  rep.j = j;
  rep.truncation = n;

  std::vector<Eigen::Triplet<cplx>> up, diag;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = -j + static_cast<double>(i);
    diag.emplace_back(i, i, cplx(-m));  // C = -J3
    if (i + 1 < n) up.emplace_back(i + 1, i, cplx(std::sqrt(j * (j + 1) - m * (m + 1))));
  }
  detail::set_from_ladder(rep, sparse_from_triplets(n, up));
  rep.c = detail::labelled(sparse_from_triplets(n, diag), OpLabel::C);
  return rep;
}

inline Representation build_su2_rep(double j) { return build_su2_rep(Spin::from_double(j)); }

/// J3 in the ascending basis (the negative of C).
inline OperatorMatrix su2_j3(const Representation& rep) { return OperatorMatrix{-rep.c.m, OpLabel::Custom}; }

inline Representation build_su11_rep(double k, std::size_t truncation) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw Error(ErrorKind::InvalidBargmannIndex, "Bargmann index must be positive, got " + std::to_string(k));
  detail::require_truncation(truncation, 4, "su(1,1)");
  Representation rep;
  rep.kind = Algebra::SU11;
  rep.k = k;
  rep.truncation = truncation;
  rep.boundary_rows = 1;

  std::vector<Eigen::Triplet<cplx>> up, diag;
  for (std::size_t m = 0; m < truncation; ++m) {
    const double md = static_cast<double>(m);
    diag.emplace_back(m, m, cplx(k + md));
    if (m + 1 < truncation) up.emplace_back(m + 1, m, cplx(std::sqrt((md + 1.0) * (2.0 * k + md))));
  }
  detail::set_from_ladder(rep, sparse_from_triplets(truncation, up));
  rep.c = detail::labelled(sparse_from_triplets(truncation, diag), OpLabel::C);
  return rep;
}

/// Oscillator realization: the canonical pair itself plus the quadratic
/// su(1,1) generators K1 = (Q^2-P^2)/4, K2 = -(QP+PQ)/4, K3 = (Q^2+P^2)/4.
struct QpRealization {
  Representation canonical;  // A = Q, B = P, C = 1
  Representation su11_view;  // A = K1, B = -K2, C = K3 on the full Fock space, k = 1/4
  OperatorMatrix q, p, k1, k2, k3;

  /// Selects Fock states n = 0, 2, 4, ... (rows of the returned matrix).
  SparseMatrix even_projector() const {
    const std::size_t n = canonical.dim();
    std::vector<Eigen::Triplet<cplx>> t;
    for (std::size_t i = 0; 2 * i < n; ++i) t.emplace_back(i, 2 * i, cplx(1.0));
    SparseMatrix s(static_cast<Eigen::Index>((n + 1) / 2), static_cast<Eigen::Index>(n));
    s.setFromTriplets(t.begin(), t.end());
    return s;
  }

  /// Restriction of an operator to the even-index subspace.
  DenseMatrix even_block(const OperatorMatrix& op) const {
    const SparseMatrix proj = even_projector();
    return DenseMatrix(proj * op.m * SparseMatrix(proj.adjoint()));
  }
};

inline QpRealization build_qp_realization(std::size_t truncation) {
  detail::require_truncation(truncation, 8, "oscillator");
  if (truncation % 2 != 0) throw Error(ErrorKind::InvalidTruncation, "oscillator truncation must be even");

  std::vector<Eigen::Triplet<cplx>> up;
  for (std::size_t n = 0; n + 1 < truncation; ++n)
    up.emplace_back(n + 1, n, cplx(std::sqrt(static_cast<double>(n + 1))));
  const SparseMatrix adag = sparse_from_triplets(truncation, up);
  const SparseMatrix a = adag.adjoint();

  QpRealization out;
  const double r = 1.0 / std::sqrt(2.0);
  SparseMatrix q = (a + adag) * cplx(r);
  SparseMatrix p = (a - adag) * cplx(0.0, -r);
  out.q = detail::labelled(q, OpLabel::A);
  out.p = detail::labelled(p, OpLabel::B);

  Representation& can = out.canonical;
  can.kind = Algebra::CanonicalQP;
  can.truncation = truncation;
  can.boundary_rows = 1;
  can.a = out.q;
  can.b = out.p;
  can.c = detail::labelled(sparse_identity(truncation), OpLabel::C);
  can.raise = detail::labelled(adag, OpLabel::Ladder);
  can.lower = detail::labelled(a, OpLabel::Ladder);

  const SparseMatrix qq = q * q, pp = p * p;
  const SparseMatrix qp = q * p, pq = p * q;
  out.k1 = detail::labelled((qq - pp) * cplx(0.25), OpLabel::Custom);
  out.k2 = detail::labelled((qp + pq) * cplx(-0.25), OpLabel::Custom);
  out.k3 = detail::labelled((qq + pp) * cplx(0.25), OpLabel::Custom);

  Representation& view = out.su11_view;
  view.kind = Algebra::CanonicalQP;
  view.k = 0.25;
  view.truncation = truncation;
  view.boundary_rows = 3;
  view.a = detail::labelled(out.k1.m, OpLabel::A);
  view.b = detail::labelled(-out.k2.m, OpLabel::B);
  view.c = detail::labelled(out.k3.m, OpLabel::C);
  SparseMatrix kplus = (adag * adag) * cplx(0.5);
  view.raise = detail::labelled(kplus, OpLabel::Ladder);
  view.lower = detail::labelled(SparseMatrix(kplus.adjoint()), OpLabel::Ladder);
  return out;
}

/// L(lambda) = lambda*A + i*B.
inline OperatorMatrix lambda_operator(const Representation& rep, cplx lambda) {
  require_finite(lambda, "lambda");
  SparseMatrix l = rep.a.m * lambda + rep.b.m * I;
  return OperatorMatrix{std::move(l), OpLabel::L};
}

/// Per-row maximum of |([A,B] - iC)_{row, col}|.
inline std::vector<double> commutator_defect_by_row(const Representation& rep) {
  const SparseMatrix comm = rep.a.m * rep.b.m - rep.b.m * rep.a.m - rep.c.m * I;
  std::vector<double> rows(rep.dim(), 0.0);
  for (int col = 0; col < comm.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(comm, col); it; ++it)
      rows[static_cast<std::size_t>(it.row())] = std::max(rows[static_cast<std::size_t>(it.row())], std::abs(it.value()));
  return rows;
}

/// Largest commutator defect outside the flagged boundary rows.
inline double interior_commutator_defect(const Representation& rep) {
  const auto rows = commutator_defect_by_row(rep);
  double worst = 0.0;
  for (std::size_t i = 0; i + rep.boundary_rows < rows.size(); ++i) worst = std::max(worst, rows[i]);
  return worst;
}

}  // namespace gis

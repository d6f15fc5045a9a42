#pragma once

// Dense eigen/SVD helpers for the small non-Hermitian problems in this
// library. L(lambda) is a diagonal similarity away from a normal matrix, so
// diagonal balancing before the Schur step is what keeps eigenvalues
// accurate when |u/v| is large.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gis/core.hpp"

namespace gis::linalg {

struct Balanced {
  DenseMatrix matrix;     // D^{-1} M D
  Eigen::VectorXd scale;  // diagonal of D
};

/// Osborne iteration: rescale so each row and column (off-diagonal part)
/// have equal 2-norm. Rows/columns that are entirely zero are left alone.
inline Balanced balance(const DenseMatrix& m, int max_sweeps = 500, double tol = 1e-3) {
  const Eigen::Index n = m.rows();
  Balanced out{m, Eigen::VectorXd::Ones(n)};
  DenseMatrix& b = out.matrix;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double col = std::sqrt(std::max(0.0, b.col(i).squaredNorm() - std::norm(b(i, i))));
      const double row = std::sqrt(std::max(0.0, b.row(i).squaredNorm() - std::norm(b(i, i))));
      if (col == 0.0 || row == 0.0) continue;
      const double f = std::sqrt(row / col);
      if (std::abs(f - 1.0) > tol) converged = false;
      b.col(i) *= f;
      b.row(i) /= f;
      out.scale[i] *= f;
    }
    if (converged) break;
  }
  return out;
}

inline bool is_triangular(const DenseMatrix& m) {
  bool upper = true, lower = true;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r > c && m(r, c) != cplx(0.0)) upper = false;
      if (r < c && m(r, c) != cplx(0.0)) lower = false;
    }
  return upper || lower;
}

struct EigenPairs {
  CVector values;
  DenseMatrix vectors;  // unit-norm columns in the original basis
};

/// Eigenpairs of a general complex matrix: balance, Schur, back-transform.
inline EigenPairs eig(const DenseMatrix& m) {
  // Triangular input (Jordan-type L at lambda = +-1): the spectrum is the
  // diagonal, and Osborne scaling would drift without converging.
  const bool triangular = is_triangular(m);
  const Balanced bal = triangular ? Balanced{m, Eigen::VectorXd::Ones(m.rows())} : balance(m);
  Eigen::ComplexEigenSolver<DenseMatrix> solver(bal.matrix, true);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "complex eigensolver failed");
  EigenPairs out{solver.eigenvalues(), solver.eigenvectors()};
  if (triangular) out.values = m.diagonal();
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    out.vectors.col(c) = bal.scale.cast<cplx>().asDiagonal() * out.vectors.col(c);
    const double nrm = out.vectors.col(c).norm();
    if (nrm > 0.0) out.vectors.col(c) /= nrm;
  }
  return out;
}

inline Eigen::VectorXd singular_values(const DenseMatrix& m) {
  Eigen::BDCSVD<DenseMatrix> svd(m);
  return svd.singularValues();
}

/// Number of singular values above rel_tol * sigma_max.
inline int numerical_rank(const DenseMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  const Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++rank;
  return rank;
}

/// Orthonormal basis of the right null space, singular values below
/// rel_tol * sigma_max counted as zero.
inline DenseMatrix null_space(const DenseMatrix& m, double rel_tol) {
  Eigen::BDCSVD<DenseMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const double smax = s.size() > 0 ? s[0] : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * smax && smax > 0.0) ++rank;
  const Eigen::Index nullity = m.cols() - rank;
  return svd.matrixV().rightCols(nullity);
}

}  // namespace gis::linalg

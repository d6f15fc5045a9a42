#pragma once

// Core value types shared by every module: complex scalars, operator
// matrices, normalized state vectors and the library error type.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gis {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr cplx I{0.0, 1.0};

enum class ErrorKind {
  InvalidSpin,
  InvalidBargmannIndex,
  InvalidTruncation,
  PoleAtB,
  NoConvergence,
  NonNormalizable,
  PreconditionReLambda,
  BranchMismatch,
  OutsideDisk,
  TruncationCap,
  WrongAlgebra,
  DimensionMismatch,
  TailMassTooLarge,
  HermiticityViolation,
  ZeroRealPart,
  InconclusiveTruncation,
  NonFinite,
  ConfigError,
  IoError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpin: return "InvalidSpin";
    case ErrorKind::InvalidBargmannIndex: return "InvalidBargmannIndex";
    case ErrorKind::InvalidTruncation: return "InvalidTruncation";
    case ErrorKind::PoleAtB: return "PoleAtB";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NonNormalizable: return "NonNormalizable";
    case ErrorKind::PreconditionReLambda: return "PreconditionReLambda";
    case ErrorKind::BranchMismatch: return "BranchMismatch";
    case ErrorKind::OutsideDisk: return "OutsideDisk";
    case ErrorKind::TruncationCap: return "TruncationCap";
    case ErrorKind::WrongAlgebra: return "WrongAlgebra";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TailMassTooLarge: return "TailMassTooLarge";
    case ErrorKind::HermiticityViolation: return "HermiticityViolation";
    case ErrorKind::ZeroRealPart: return "ZeroRealPart";
    case ErrorKind::InconclusiveTruncation: return "InconclusiveTruncation";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool is_finite(cplx x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

inline cplx require_finite(cplx x, const char* name) {
  if (!is_finite(x)) throw Error(ErrorKind::NonFinite, std::string(name) + " is not finite");
  return x;
}

/// Role tag carried by every operator matrix.
enum class OpLabel { A, B, C, L, Lplus, Lminus, Ladder, Custom };

/// Square operator in sparse storage. Representations are banded (at most
/// pentadiagonal), so sparse storage keeps truncations of several thousand
/// basis states cheap; `dense()` materializes for eigensolvers.
struct OperatorMatrix {
  SparseMatrix m;
  OpLabel label = OpLabel::Custom;

  std::size_t dim() const { return static_cast<std::size_t>(m.rows()); }
  DenseMatrix dense() const { return DenseMatrix(m); }
  CVector apply(const CVector& v) const { return m * v; }

  /// Largest |m_ij - conj(m_ji)|.
  double hermiticity_defect() const {
    SparseMatrix d = m - SparseMatrix(m.adjoint());
    double worst = 0.0;
    for (int col = 0; col < d.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(d, col); it; ++it)
        worst = std::max(worst, std::abs(it.value()));
    return worst;
  }
};

inline SparseMatrix sparse_from_triplets(std::size_t n, const std::vector<Eigen::Triplet<cplx>>& t) {
  SparseMatrix s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  s.setFromTriplets(t.begin(), t.end());
  s.makeCompressed();
  return s;
}

inline SparseMatrix sparse_identity(std::size_t n) {
  SparseMatrix s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  s.setIdentity();
  return s;
}

/// Fraction of the basis counted as "tail" by tail_mass().
inline constexpr double kTailFraction = 0.1;

inline std::size_t tail_start(std::size_t dim) {
  const auto count = static_cast<std::size_t>(std::ceil(kTailFraction * static_cast<double>(dim)));
  return dim - std::min(count, dim);
}

/// Normalized amplitude vector. The global phase is fixed so that the first
/// amplitude with modulus above 1e-12 is real and positive.
class StateVector {
 public:
  StateVector() = default;

  explicit StateVector(CVector amps) : amps_(std::move(amps)) {
    if (amps_.size() == 0) throw Error(ErrorKind::DimensionMismatch, "empty state vector");
    for (Eigen::Index i = 0; i < amps_.size(); ++i)
      if (!is_finite(amps_[i])) throw Error(ErrorKind::NonFinite, "non-finite amplitude");
    const double norm = amps_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw Error(ErrorKind::NonFinite, "state vector has zero or non-finite norm");
    amps_ /= norm;
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i]) > 1e-12) {
        amps_ *= std::conj(amps_[i]) / std::abs(amps_[i]);
        amps_[i] = cplx(amps_[i].real(), 0.0);
        break;
      }
    }
  }

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amps() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  double tail_mass() const {
    double mass = 0.0;
    for (std::size_t i = tail_start(dim()); i < dim(); ++i) mass += std::norm(amps_[static_cast<Eigen::Index>(i)]);
    return mass;
  }

  /// Zero-padded (or cropped and renormalized) copy in dimension `n`.
  StateVector resized(std::size_t n) const {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
    const auto keep = static_cast<Eigen::Index>(std::min(n, dim()));
    v.head(keep) = amps_.head(keep);
    return StateVector(std::move(v));
  }

 private:
  CVector amps_;
};

inline cplx inner(const StateVector& a, const StateVector& b) {
  const auto n = static_cast<Eigen::Index>(std::min(a.dim(), b.dim()));
  return a.amps().head(n).dot(b.amps().head(n));  // conjugates the first argument
}

/// |<a|b>|^2, comparing over the common leading basis states.
inline double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

/// Principal square root; kept as a named helper so branch choices are greppable.
inline cplx principal_sqrt(cplx x) { return std::sqrt(x); }

}  // namespace gis

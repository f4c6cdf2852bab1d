#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstddef>
#include <optional>
#include <vector>

#include "netsync/errors.hpp"

namespace netsync::linalg {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;
/// perm[new_position] = original index.
using Permutation = std::vector<Index>;

/// Raised when a symmetric factorization meets a pivot below tolerance.
/// `pivot` is the offending row in the caller's (original) numbering.
class FactorizationFailure : public Error {
 public:
  FactorizationFailure(const std::string& what, Index pivot) : Error(what), pivot_(pivot) {}
  Index pivot() const noexcept { return pivot_; }

 private:
  Index pivot_;
};

/// Half-bandwidth max |p^-1(i) - p^-1(j)| over nonzeros of a under perm.
Index bandwidth(const SparseMatrix& a, const Permutation& perm);
Permutation identity_permutation(Index n);
/// Reverse Cuthill-McKee ordering of the symmetric pattern of a.
Permutation reverse_cuthill_mckee(const SparseMatrix& a);
/// Order indices by ascending key (stable).
Permutation sort_permutation(const std::vector<double>& keys);

/// Cholesky factor of a symmetric positive definite band matrix, rows stored
/// contiguously. Exposes solves and the diagonal of the inverse through
/// Takahashi's recurrences (selected inversion restricted to the band).
class BandCholesky {
 public:
  /// Factors P a P^T. Throws FactorizationFailure when a pivot falls below
  /// pivot_tol * |a_ii| of its own row, ResourceLimit when the band would not fit.
  BandCholesky(const SparseMatrix& a, Permutation perm, double pivot_tol = 1e-12);

  Index size() const noexcept { return n_; }
  Index half_bandwidth() const noexcept { return w_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// diag(a^{-1}) in the original numbering.
  Eigen::VectorXd inverse_diagonal() const;

 private:
  double& at(Index i, Index j) { return l_[static_cast<std::size_t>(i * (w_ + 1) + (j - i + w_))]; }
  double at(Index i, Index j) const { return l_[static_cast<std::size_t>(i * (w_ + 1) + (j - i + w_))]; }

  Index n_ = 0;
  Index w_ = 0;
  Permutation perm_;
  std::vector<double> l_;
};

/// SPD solver that picks dense LLT or band Cholesky by estimated cost.
class SpdSolver {
 public:
  /// `orderings` are extra candidate permutations (e.g. coordinate sorts);
  /// RCM and the natural order are always tried.
  explicit SpdSolver(const SparseMatrix& a, const std::vector<Permutation>& orderings = {},
                     double pivot_tol = 1e-12);

  bool uses_band() const noexcept { return band_.has_value(); }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::VectorXd inverse_diagonal() const;

 private:
  std::optional<BandCholesky> band_;
  Eigen::MatrixXd dense_l_;
};

/// Dense LLT with the same pivot tolerance; returns diag(a^{-1}).
Eigen::VectorXd dense_inverse_diagonal(const Eigen::MatrixXd& a, double pivot_tol = 1e-12);
/// Dense LLT inverse with the pivot tolerance check.
Eigen::MatrixXd dense_spd_inverse(const Eigen::MatrixXd& a, double pivot_tol = 1e-12);

}  // namespace netsync::linalg

#pragma once

#include <Eigen/Dense>

namespace onlinecp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A pivot below this fraction of the largest pivot marks a rank deficiency.
inline constexpr double kRankTolerance = 1e-10;

/// Ridge coefficients c = (U'U + aI)^{-1} U'y.
///
/// With a > 0 the system is always SPD and solved by Cholesky. With a = 0 the
/// problem is ordinary least squares on U and a rank-deficient U throws
/// NumericalError.
Vector ridge_solve(const Matrix& U, const Vector& y, double a);

/// Least-squares estimate (Z'Z)^{-1} Z'y via column-pivoted QR.
/// Throws NumericalError when Z is rank deficient or has fewer rows than columns.
Vector least_squares(const Matrix& Z, const Vector& y);

/// Unbiased residual variance (y - Z g)'(y - Z g) / (rows - cols).
double hat_sigma2(const Matrix& Z, const Vector& y, const Vector& gamma_hat);

/// Quadratic form z'(Z'Z)^{-1} z.
double leverage(const Matrix& Zprev, const Vector& z);

// Pivoted LDL' factorization of a symmetric positive semidefinite matrix that
// remembers whether the matrix was numerically nonsingular.
class SpdFactor {
 public:
  SpdFactor() = default;
  explicit SpdFactor(const Matrix& A);

  bool full_rank() const { return full_rank_; }
  Eigen::Index size() const { return size_; }

  // Both throw NumericalError unless full_rank().
  Vector solve(const Vector& b) const;
  double inverse_quadratic_form(const Vector& z) const;

 private:
  Eigen::LDLT<Matrix> ldlt_;
  Eigen::Index size_ = 0;
  bool full_rank_ = false;
};

// True when every entry is finite.
bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

}  // namespace onlinecp

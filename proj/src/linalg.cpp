#include "onlinecp/linalg.hpp"

#include <cmath>
#include <string>

#include "onlinecp/error.hpp"

namespace onlinecp {

namespace {

Eigen::ColPivHouseholderQR<Matrix> pivoted_qr(const Matrix& A) {
  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(kRankTolerance);
  qr.compute(A);
  return qr;
}

void require_full_column_rank(const Eigen::ColPivHouseholderQR<Matrix>& qr,
                              const char* what) {
  if (qr.rank() < qr.cols()) {
    throw NumericalError(std::string(what) + ": rank-deficient design (rank " +
                         std::to_string(qr.rank()) + " < " +
                         std::to_string(qr.cols()) + ")");
  }
}

}  // namespace

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

Vector ridge_solve(const Matrix& U, const Vector& y, double a) {
  if (U.rows() != y.size()) {
    throw UsageError("ridge_solve: U has " + std::to_string(U.rows()) +
                     " rows but y has " + std::to_string(y.size()));
  }
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw UsageError("ridge_solve: ridge coefficient must be finite and >= 0");
  }
  if (a == 0.0) {
    if (U.rows() < U.cols()) {
      throw NumericalError("ridge_solve: singular system with a = 0");
    }
    const auto qr = pivoted_qr(U);
    require_full_column_rank(qr, "ridge_solve");
    return qr.solve(y);
  }
  Matrix M = U.transpose() * U;
  M.diagonal().array() += a;
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("ridge_solve: Cholesky failed");
  }
  return llt.solve(U.transpose() * y);
}

Vector least_squares(const Matrix& Z, const Vector& y) {
  if (Z.rows() != y.size()) {
    throw UsageError("least_squares: dimension mismatch");
  }
  if (Z.rows() < Z.cols()) {
    throw NumericalError("least_squares: fewer observations than parameters");
  }
  const auto qr = pivoted_qr(Z);
  require_full_column_rank(qr, "least_squares");
  return qr.solve(y);
}

double hat_sigma2(const Matrix& Z, const Vector& y, const Vector& gamma_hat) {
  if (Z.rows() != y.size() || Z.cols() != gamma_hat.size()) {
    throw UsageError("hat_sigma2: dimension mismatch");
  }
  const Eigen::Index df = Z.rows() - Z.cols();
  if (df <= 0) {
    throw NumericalError("hat_sigma2: nonpositive degrees of freedom");
  }
  const Vector r = y - Z * gamma_hat;
  return r.squaredNorm() / static_cast<double>(df);
}

double leverage(const Matrix& Zprev, const Vector& z) {
  if (Zprev.cols() != z.size()) {
    throw UsageError("leverage: dimension mismatch");
  }
  if (Zprev.rows() < Zprev.cols()) {
    throw NumericalError("leverage: Z'Z is singular");
  }
  const auto qr = pivoted_qr(Zprev);
  require_full_column_rank(qr, "leverage");
  // Z P = Q R  =>  z'(Z'Z)^{-1} z = |R^{-T} P' z|^2
  const Eigen::Index p = Zprev.cols();
  const Vector pz = qr.colsPermutation().transpose() * z;
  const Vector w = qr.matrixR()
                       .topLeftCorner(p, p)
                       .triangularView<Eigen::Upper>()
                       .transpose()
                       .solve(pz);
  return w.squaredNorm();
}

SpdFactor::SpdFactor(const Matrix& A) : ldlt_(A), size_(A.rows()) {
  if (ldlt_.info() != Eigen::Success) {
    full_rank_ = false;
    return;
  }
  const auto d = ldlt_.vectorD().cwiseAbs();
  if (d.size() == 0) {
    full_rank_ = true;
    return;
  }
  const double largest = d.maxCoeff();
  full_rank_ = largest > 0.0 && d.minCoeff() > kRankTolerance * largest &&
               (ldlt_.vectorD().array() > 0.0).all();
}

Vector SpdFactor::solve(const Vector& b) const {
  if (!full_rank_) throw NumericalError("singular normal-equations matrix");
  return ldlt_.solve(b);
}

double SpdFactor::inverse_quadratic_form(const Vector& z) const {
  if (!full_rank_) throw NumericalError("singular normal-equations matrix");
  const double q = z.dot(ldlt_.solve(z));
  return q < 0.0 ? 0.0 : q;
}

}  // namespace onlinecp

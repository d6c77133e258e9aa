#include "onlinecp/random.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "onlinecp/error.hpp"

namespace onlinecp {

double RngStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u;
  double v;
  double s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  return u * scale;
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw UsageError("RngStream::below: bound must be positive");
  // Rejection on the top multiple of bound.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw UsageError("RngStream::gamma: shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) U^{1/a}
    const double u = uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector sample_gaussian(RngStream& rng, std::size_t count) {
  Vector out(static_cast<Eigen::Index>(count));
  for (auto& v : out) v = rng.gaussian();
  return out;
}

double sample_uniform01(RngStream& rng) { return rng.uniform01(); }

std::vector<std::size_t> sample_permutation(RngStream& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

AffineSliceSphere::AffineSliceSphere(const Matrix& Z, const Vector& b, double r2,
                                     bool allow_redundant) {
  const Eigen::Index n = Z.rows();
  const Eigen::Index m = Z.cols();
  if (b.size() != m) throw UsageError("AffineSliceSphere: b must have Z.cols() entries");
  if (!(r2 >= 0.0) || !std::isfinite(r2)) {
    throw UsageError("AffineSliceSphere: squared radius must be finite and >= 0");
  }
  if (m == 0) {
    center_ = Vector::Zero(n);
    null_basis_ = Matrix::Identity(n, n);
    radius_ = std::sqrt(r2);
    return;
  }

  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(kRankTolerance);
  qr.compute(Z);
  const Eigen::Index r = qr.rank();
  if (r < m && !allow_redundant) {
    throw NumericalError("AffineSliceSphere: rank-deficient constraint matrix");
  }
  // Z P = Q [R11 R12], so Z'v = b  <=>  R11' Q1'v = (P'b)_head (plus the
  // redundant rows when r < m); the minimum-norm solution is v0 = Q1 w.
  const Matrix Q = qr.householderQ();
  const Vector pb = qr.colsPermutation().transpose() * b;
  const Vector w = qr.matrixR()
                       .topLeftCorner(r, r)
                       .triangularView<Eigen::Upper>()
                       .transpose()
                       .solve(pb.head(r));
  center_ = Q.leftCols(r) * w;
  null_basis_ = Q.rightCols(n - r);

  if (r < m) {
    const double mismatch = (Z.transpose() * center_ - b).norm();
    if (mismatch > 1e-9 * std::fmax(1.0, b.norm())) {
      throw NumericalError("AffineSliceSphere: inconsistent constraints");
    }
  }

  const double base = center_.squaredNorm();
  double slack = r2 - base;
  if (slack < 0.0) {
    if (slack < -1e-9 * std::fmax(1.0, std::fmax(base, r2))) {
      throw NumericalError("AffineSliceSphere: empty slice (radius^2 " +
                           std::to_string(r2) + " < " + std::to_string(base) + ")");
    }
    slack = 0.0;
  }
  radius_ = std::sqrt(slack);
}

Vector AffineSliceSphere::sample(RngStream& rng) const {
  const Eigen::Index k = null_basis_.cols();
  if (k == 0 || radius_ == 0.0) return center_;
  Vector g = sample_gaussian(rng, static_cast<std::size_t>(k));
  double norm = g.norm();
  while (norm == 0.0) {
    g = sample_gaussian(rng, static_cast<std::size_t>(k));
    norm = g.norm();
  }
  return center_ + null_basis_ * (g * (radius_ / norm));
}

Vector sample_sphere_in_affine_slice(RngStream& rng, const Matrix& Z,
                                     const Vector& b, double r2) {
  return AffineSliceSphere(Z, b, r2).sample(rng);
}

}  // namespace onlinecp

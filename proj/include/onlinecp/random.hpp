#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "onlinecp/linalg.hpp"

namespace onlinecp {

// Seeded pseudo-random stream. The engine and every transform on top of it
// are fixed here (no implementation-defined std distributions), so a seed
// reproduces the same sequence on every platform. Not thread-safe: one owner.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithmId = "mt19937_64/v1";

  explicit RngStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::string_view algorithm_id() const { return kAlgorithmId; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Standard normal, Marsaglia polar method.
  double gaussian();
  // Uniform integer in [0, bound), bound > 0, unbiased.
  std::uint64_t below(std::uint64_t bound);
  // Gamma(shape, 1), Marsaglia-Tsang squeeze; shape > 0.
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::optional<double> spare_;
};

// SplitMix64 mix of (seed, stream) for deriving independent child seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Vector sample_gaussian(RngStream& rng, std::size_t count);
double sample_uniform01(RngStream& rng);
// Uniform random permutation of 0..n-1 (Fisher-Yates).
std::vector<std::size_t> sample_permutation(RngStream& rng, std::size_t n);

// The sphere {v in R^n : Z'v = b, v'v = r2}. Construction does the
// factorization once; sample() is then cheap.
class AffineSliceSphere {
 public:
  // Throws NumericalError if Z is rank deficient or the slice is empty.
  // Squared radii short of |v0|^2 by at most 1e-9 relative are clamped to a
  // point sphere. With allow_redundant, a rank-deficient Z is accepted as long
  // as Z'v = b is consistent (redundant constraints are dropped).
  AffineSliceSphere(const Matrix& Z, const Vector& b, double r2,
                    bool allow_redundant = false);

  Vector sample(RngStream& rng) const;

  const Vector& center() const { return center_; }
  const Matrix& null_basis() const { return null_basis_; }
  double radius() const { return radius_; }

 private:
  Vector center_;
  Matrix null_basis_;
  double radius_ = 0.0;
};

Vector sample_sphere_in_affine_slice(RngStream& rng, const Matrix& Z,
                                     const Vector& b, double r2);

}  // namespace onlinecp

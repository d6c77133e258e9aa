#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "onlinecp/ledger.hpp"
#include "onlinecp/random.hpp"
#include "onlinecp/region.hpp"

namespace onlinecp {

// y = alpha + beta . x + noise, x ~ N(0, I_K), noise ~ N(0, noise_sd^2).
struct SyntheticSpec {
  std::size_t features = 100;
  std::size_t observations = 600;
  double alpha = 100.0;
  std::size_t leading_block = 10;  // clipped to features
  double leading_magnitude = 10.0;
  double tail_magnitude = 1.0;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;

  // Throws UsageError unless features >= 1 and noise_sd > 0.
  void validate() const;
};

/// beta_k = (-1)^(k-1) * magnitude, magnitude 10 on the leading block, 1 after.
Vector coefficients(const SyntheticSpec& spec);

/// Draws x_n (K Gaussians) then the noise, observation by observation.
std::vector<Observation> generate(const SyntheticSpec& spec, RngStream& rng);
std::vector<Observation> generate(const SyntheticSpec& spec);

// Observation files: header "x1,...,xK,y", one row per observation, values
// written with 17 significant digits so reading them back is exact.
void write_stream(std::ostream& out, std::span<const Observation> stream, std::size_t features);
void write_stream(const std::filesystem::path& path, std::span<const Observation> stream,
                  std::size_t features);
// Throws DataError naming the line on malformed rows.
std::vector<Observation> read_stream(std::istream& in);
std::vector<Observation> read_stream(const std::filesystem::path& path);

// Ledger files: header "n,err_<eps>,Err_<eps>,L_<eps>,M_<eps>,...", infinite
// lengths as "inf".
void write_ledger(std::ostream& out, const OnlineLedger& ledger);
void write_ledger(const std::filesystem::path& path, const OnlineLedger& ledger);
OnlineLedger read_ledger(std::istream& in, MedianConvention convention = MedianConvention::conventional);
OnlineLedger read_ledger(const std::filesystem::path& path,
                         MedianConvention convention = MedianConvention::conventional);

// Two blocks separated by a blank line: "# median-accuracy" (n, M per eps)
// and "# cumulative-errors" (n, Err per eps).
void write_plot_data(std::ostream& out, const OnlineLedger& ledger);
void write_plot_data(const std::filesystem::path& path, const OnlineLedger& ledger);

std::string format_real(double v);
std::string format_epsilon(double eps);

}  // namespace onlinecp

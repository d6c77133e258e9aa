#include "onlinecp/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "onlinecp/error.hpp"

namespace onlinecp {

void SyntheticSpec::validate() const {
  if (features < 1) throw UsageError("synthetic data needs at least one feature");
  if (!(noise_sd > 0.0) || !std::isfinite(noise_sd)) {
    throw UsageError("noise standard deviation must be positive");
  }
}

Vector coefficients(const SyntheticSpec& spec) {
  Vector beta(static_cast<Eigen::Index>(spec.features));
  const std::size_t block = std::min(spec.leading_block, spec.features);
  for (std::size_t k = 0; k < spec.features; ++k) {
    const double magnitude = k < block ? spec.leading_magnitude : spec.tail_magnitude;
    beta[static_cast<Eigen::Index>(k)] = k % 2 == 0 ? magnitude : -magnitude;
  }
  return beta;
}

std::vector<Observation> generate(const SyntheticSpec& spec, RngStream& rng) {
  spec.validate();
  const Vector beta = coefficients(spec);
  std::vector<Observation> out;
  out.reserve(spec.observations);
  for (std::size_t n = 0; n < spec.observations; ++n) {
    Observation obs;
    obs.x = sample_gaussian(rng, spec.features);
    obs.y = spec.alpha + beta.dot(obs.x) + spec.noise_sd * rng.gaussian();
    out.push_back(std::move(obs));
  }
  return out;
}

std::vector<Observation> generate(const SyntheticSpec& spec) {
  RngStream rng(spec.seed);
  return generate(spec, rng);
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_epsilon(double eps) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, eps);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_real(std::string_view field, std::size_t line, bool allow_inf = false) {
  field = trim(field);
  if (allow_inf && field == "inf") return kInf;
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || field.empty() ||
      (!allow_inf && !std::isfinite(v))) {
    throw DataError("line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

void finish(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("write to " + path.string() + " failed");
}

}  // namespace

void write_stream(std::ostream& out, std::span<const Observation> stream, std::size_t features) {
  for (std::size_t k = 1; k <= features; ++k) out << 'x' << k << ',';
  out << "y\n";
  for (const auto& obs : stream) {
    if (static_cast<std::size_t>(obs.x.size()) != features) {
      throw DataError("write_stream: observation dimension mismatch");
    }
    for (double v : obs.x) out << format_real(v) << ',';
    out << format_real(obs.y) << '\n';
  }
}

void write_stream(const std::filesystem::path& path, std::span<const Observation> stream,
                  std::size_t features) {
  auto out = open_out(path);
  write_stream(out, stream, features);
  finish(out, path);
}

std::vector<Observation> read_stream(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("line 1: missing header");
  const auto header = split(trim(line));
  if (header.empty() || trim(header.back()) != "y") {
    throw DataError("line 1: header must end with 'y'");
  }
  const std::size_t features = header.size() - 1;
  for (std::size_t k = 0; k < features; ++k) {
    if (trim(header[k]) != "x" + std::to_string(k + 1)) {
      throw DataError("line 1: expected column x" + std::to_string(k + 1));
    }
  }
  std::vector<Observation> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text);
    if (fields.size() != features + 1) {
      throw DataError("line " + std::to_string(lineno) + ": expected " +
                      std::to_string(features + 1) + " fields, got " +
                      std::to_string(fields.size()));
    }
    Observation obs;
    obs.x.resize(static_cast<Eigen::Index>(features));
    for (std::size_t k = 0; k < features; ++k) {
      obs.x[static_cast<Eigen::Index>(k)] = parse_real(fields[k], lineno);
    }
    obs.y = parse_real(fields.back(), lineno);
    out.push_back(std::move(obs));
  }
  return out;
}

std::vector<Observation> read_stream(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_stream(in);
}

void write_ledger(std::ostream& out, const OnlineLedger& ledger) {
  out << 'n';
  for (double eps : ledger.epsilons()) {
    const std::string e = format_epsilon(eps);
    out << ",err_" << e << ",Err_" << e << ",L_" << e << ",M_" << e;
  }
  out << '\n';
  for (std::size_t n = 1; n <= ledger.steps(); ++n) {
    out << n;
    for (const auto& cell : ledger.row(n)) {
      out << ',' << cell.err << ',' << cell.cumulative << ',' << format_real(cell.length) << ','
          << format_real(cell.median);
    }
    out << '\n';
  }
}

void write_ledger(const std::filesystem::path& path, const OnlineLedger& ledger) {
  auto out = open_out(path);
  write_ledger(out, ledger);
  finish(out, path);
}

OnlineLedger read_ledger(std::istream& in, MedianConvention convention) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("line 1: missing ledger header");
  const auto header = split(trim(line));
  if (header.empty() || trim(header[0]) != "n" || (header.size() - 1) % 4 != 0) {
    throw DataError("line 1: not a ledger header");
  }
  std::vector<double> epsilons;
  for (std::size_t i = 1; i < header.size(); i += 4) {
    const auto name = trim(header[i]);
    if (name.substr(0, 4) != "err_") throw DataError("line 1: expected an err_ column");
    epsilons.push_back(parse_real(name.substr(4), 1));
  }
  OnlineLedger ledger(epsilons, convention);
  std::vector<int> errs(epsilons.size());
  std::vector<double> lengths(epsilons.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " fields");
    }
    for (std::size_t j = 0; j < epsilons.size(); ++j) {
      const double err = parse_real(fields[1 + 4 * j], lineno);
      if (err != 0.0 && err != 1.0) {
        throw DataError("line " + std::to_string(lineno) + ": err must be 0 or 1");
      }
      errs[j] = static_cast<int>(err);
      lengths[j] = parse_real(fields[3 + 4 * j], lineno, true);
    }
    ledger.append(errs, lengths);
  }
  return ledger;
}

OnlineLedger read_ledger(const std::filesystem::path& path, MedianConvention convention) {
  auto in = open_in(path);
  return read_ledger(in, convention);
}

void write_plot_data(std::ostream& out, const OnlineLedger& ledger) {
  if (ledger.empty()) throw UsageError("write_plot_data: empty ledger");
  out << "# median-accuracy\nn";
  for (double eps : ledger.epsilons()) out << ",M_" << format_epsilon(eps);
  out << '\n';
  for (std::size_t n = 1; n <= ledger.steps(); ++n) {
    out << n;
    for (const auto& cell : ledger.row(n)) out << ',' << format_real(cell.median);
    out << '\n';
  }
  out << "\n# cumulative-errors\nn";
  for (double eps : ledger.epsilons()) out << ",Err_" << format_epsilon(eps);
  out << '\n';
  for (std::size_t n = 1; n <= ledger.steps(); ++n) {
    out << n;
    for (const auto& cell : ledger.row(n)) out << ',' << cell.cumulative;
    out << '\n';
  }
}

void write_plot_data(const std::filesystem::path& path, const OnlineLedger& ledger) {
  auto out = open_out(path);
  write_plot_data(out, ledger);
  finish(out, path);
}

}  // namespace onlinecp

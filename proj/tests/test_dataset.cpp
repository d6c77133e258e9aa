#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "onlinecp/dataset.hpp"
#include "onlinecp/error.hpp"
#include "onlinecp/protocol.hpp"

using namespace onlinecp;

namespace {

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("benchmark coefficients") {
  const Vector beta = coefficients(SyntheticSpec{});
  REQUIRE(beta.size() == 100);
  CHECK(beta[0] == 10.0);
  CHECK(beta[1] == -10.0);
  CHECK(beta[9] == -10.0);
  CHECK(beta[10] == 1.0);
  CHECK(beta[11] == -1.0);
  CHECK(beta.squaredNorm() == doctest::Approx(1090.0));

  SyntheticSpec small;
  small.features = 3;
  CHECK(coefficients(small) == Vector{{10.0, -10.0, 10.0}});
}

TEST_CASE("synthetic settings are validated") {
  SyntheticSpec spec;
  spec.features = 0;
  CHECK_THROWS_AS(spec.validate(), UsageError);
  spec.features = 2;
  spec.noise_sd = 0.0;
  CHECK_THROWS_AS(spec.validate(), UsageError);
}

TEST_CASE("generated responses") {
  SyntheticSpec spec;
  spec.features = 4;
  spec.noise_sd = 1e-300;
  spec.observations = 3;
  for (const auto& o : generate(spec)) {
    CHECK(o.x.size() == 4);
    CHECK(o.y == doctest::Approx(100.0 + coefficients(spec).dot(o.x)));
  }

  SyntheticSpec big;
  big.observations = 100000;
  big.seed = 3;
  const auto stream = generate(big);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& o : stream) {
    sum += o.y;
    sum2 += o.y * o.y;
  }
  const double n = static_cast<double>(stream.size());
  const double var = sum2 / n - (sum / n) * (sum / n);
  // Var of the sample variance of a Gaussian is 2 sigma^4 / n.
  CHECK(std::fabs(var - 1091.0) <= 3.0 * 1091.0 * std::sqrt(2.0 / n));

  CHECK(generate(spec).size() == 3);
  SyntheticSpec a;
  a.observations = 10;
  a.seed = 5;
  CHECK(generate(a)[7].y == generate(a)[7].y);
  SyntheticSpec b = a;
  b.seed = 6;
  CHECK(generate(a)[0].y != generate(b)[0].y);
}

TEST_CASE("stream round trip is exact") {
  const auto stream = generate(SyntheticSpec{});
  std::stringstream buf;
  write_stream(buf, stream, 100);
  const auto lines = lines_of(buf.str());
  REQUIRE(lines.size() == 601);
  CHECK(lines[0].rfind("x1,x2,", 0) == 0);
  CHECK(lines[0].substr(lines[0].size() - 6) == "x100,y");
  CHECK(count_fields(lines[1]) == 101);
  const auto back = read_stream(buf);
  REQUIRE(back.size() == stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    CHECK(back[i].y == stream[i].y);
    CHECK(back[i].x == stream[i].x);
  }

  const auto path = std::filesystem::temp_directory_path() / "onlinecp_stream_test.csv";
  write_stream(path, stream, 100);
  CHECK(read_stream(path).size() == 600);
  std::filesystem::remove(path);
}

TEST_CASE("malformed stream files") {
  std::istringstream header_only("x1,x2,y\n");
  CHECK(read_stream(header_only).empty());

  std::istringstream extra("x1,x2,y\n1,2,3\n1,2,3,4\n");
  try {
    read_stream(extra);
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream text("x1,y\n1,abc\n");
  CHECK_THROWS_AS(read_stream(text), DataError);
  std::istringstream bad_header("a,b\n1,2\n");
  CHECK_THROWS_AS(read_stream(bad_header), DataError);
  CHECK_THROWS_AS(read_stream(std::filesystem::path("/nonexistent/stream.csv")), DataError);
}

TEST_CASE("ledger serialization") {
  OnlineLedger single({0.05});
  const int err[] = {0};
  const double inf_len[] = {kInf};
  single.append(err, inf_len);
  std::ostringstream out;
  write_ledger(out, single);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "n,err_0.05,Err_0.05,L_0.05,M_0.05");
  CHECK(lines[1] == "1,0,0,inf,inf");
  CHECK(count_fields(lines[1]) == 5);

  RunConfig config;
  config.smoothed = true;
  SyntheticSpec spec;
  spec.features = 3;
  spec.observations = 60;
  const auto r = run_online(config, generate(spec));
  std::stringstream buf;
  write_ledger(buf, r.ledger);
  CHECK(read_ledger(buf) == r.ledger);

  std::istringstream broken("n,err_0.05,Err_0.05,L_0.05,M_0.05\n1,0,0,x,inf\n");
  CHECK_THROWS_AS(read_ledger(broken), DataError);
}

TEST_CASE("plot data") {
  OnlineLedger ledger({0.1});
  for (double len : {kInf, 2.0, 1.0}) {
    const int err[] = {1};
    const double l[] = {len};
    ledger.append(err, l);
  }
  std::ostringstream out;
  write_plot_data(out, ledger);
  const auto lines = lines_of(out.str());
  const auto m = std::find(lines.begin(), lines.end(), "# median-accuracy");
  const auto c = std::find(lines.begin(), lines.end(), "# cumulative-errors");
  REQUIRE(m != lines.end());
  REQUIRE(c != lines.end());
  CHECK(m < c);
  CHECK(std::find(m, c, "") != c);
  CHECK(std::find(c, lines.end(), "3,3") != lines.end());
}

TEST_CASE("number formatting") {
  CHECK(format_real(kInf) == "inf");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_epsilon(0.005) == "0.005");
}

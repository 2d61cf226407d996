#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "discos/cli.hpp"
#include "discos/errors.hpp"
#include "test_support.hpp"

using discos::testing::data_path;
namespace cli = discos::cli;

namespace {

constexpr double kPi = std::numbers::pi;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) lines.push_back(l);
  return lines;
}

std::vector<std::string> data_rows(const std::string& text) {
  std::vector<std::string> rows;
  bool header_seen = false;
  for (const auto& l : lines_of(text)) {
    if (l.empty() || l[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rows.push_back(l);
  }
  return rows;
}

std::vector<double> fields(const std::string& row) {
  std::vector<double> v;
  std::istringstream is(row);
  for (std::string f; std::getline(is, f, ',');) v.push_back(std::stod(f));
  return v;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("position literals") {
  CHECK(cli::parse_position("0.6pi") == doctest::Approx(0.6 * kPi));
  CHECK(cli::parse_position("pi") == kPi);
  CHECK(cli::parse_position("-pi/4") == doctest::Approx(-kPi / 4));
  CHECK(cli::parse_position("3pi/2") == doctest::Approx(1.5 * kPi));
  CHECK(cli::parse_position("1.25") == 1.25);
  CHECK(cli::parse_position("-2e-3") == -2e-3);
  CHECK_THROWS_AS(cli::parse_position("pie"), discos::ValidationError);
  CHECK_THROWS_AS(cli::parse_position(""), discos::ValidationError);
  CHECK_THROWS_AS(cli::parse_position("pi/0"), discos::ValidationError);
}

TEST_CASE("convergence study on the two-point law") {
  const Result r = run({"convergence", "--model", data_path("twopoint.json"), "--at", "0.6pi", "--filter", "rcos",
                        "-K", "16,32,64,128,256"});
  REQUIRE(r.status == cli::kExitOk);
  const auto lines = lines_of(r.out);
  CHECK(lines[0].rfind("# discos", 0) == 0);
  CHECK(r.out.find("filter=rcos") != std::string::npos);
  CHECK(r.out.find("seed=") != std::string::npos);
  CHECK(r.out.find("K=16,32,64,128,256") != std::string::npos);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 5);
  double prev = 1.0;
  for (const auto& row : rows) {
    const auto f = fields(row);
    CHECK(f[3] == 1.0);
    CHECK(f[4] < prev);
    prev = f[4];
  }
}

TEST_CASE("bound sweep exits cleanly for lanczos") {
  const Result r = run({"bounds", "--filter", "lanczos", "-K", "16,32,64,128,256", "--grid", "1000"});
  CHECK(r.status == cli::kExitOk);
  CHECK(r.out.find("violations=0") != std::string::npos);
  CHECK(lines_of(r.out)[3] == "K,x,abs_K1,bound,admissible");
}

TEST_CASE("validation errors name the field") {
  const std::string broken = write_temp("discos_broken.json", "{\"type\": \"discrete\", \"points\": [1, 2");
  Result r = run({"cdf", "--model", broken, "-K", "32", "--at", "1"});
  CHECK(r.status == cli::kExitValidation);
  CHECK(r.err.find("malformed JSON") != std::string::npos);

  const std::string missing = write_temp("discos_missing.json", "{\"type\": \"discrete\", \"points\": [1, 2]}");
  r = run({"cdf", "--model", missing, "-K", "32", "--at", "1"});
  CHECK(r.status == cli::kExitValidation);
  CHECK(r.err.find("model.probs") != std::string::npos);

  const std::string badp = write_temp("discos_badp.json", "{\"type\": \"pb\", \"p\": [0.5, 1.5]}");
  r = run({"gpb", "--model", badp, "-K", "32"});
  CHECK(r.status == cli::kExitValidation);
  CHECK(r.err.find("model.p[1]") != std::string::npos);

  r = run({"cdf", "--model", data_path("twopoint.json"), "-K", "0", "--at", "1"});
  CHECK(r.status == cli::kExitValidation);
  CHECK(r.err.find("K") != std::string::npos);

  r = run({"cdf", "--model", data_path("twopoint.json"), "-K", "32", "--at", "1", "--filter", "boxcar"});
  CHECK(r.status == cli::kExitValidation);
  CHECK(r.err.find("filter") != std::string::npos);
}

TEST_CASE("flags are checked per command") {
  Result r = run({"bounds", "--filter", "lanczos", "-K", "16", "--seed", "3"});
  CHECK(r.status == cli::kExitValidation);
  CHECK(r.err.find("--seed") != std::string::npos);
  r = run({"cdf", "--model", data_path("twopoint.json"), "-K", "16", "--at", "1", "--bogus", "1"});
  CHECK(r.status == cli::kExitValidation);
  r = run({});
  CHECK(r.status == cli::kExitValidation);
}

TEST_CASE("help lists every flag") {
  const Result r = run({"--help"});
  CHECK(r.status == cli::kExitOk);
  const std::string text = r.out + r.err;
  for (const char* flag : {"--model", "--charfn", "--config", "--a", "--b", "--range", "--box", "-K", "--K1", "--K2",
                           "--filter", "--alpha", "--exp-order", "--at", "--dx", "-q", "--steps", "--grid", "--x",
                           "--paths", "--seed", "--method", "--grid-tol", "--output", "DISCOS_THREADS"})
    CHECK_MESSAGE(text.find(flag) != std::string::npos, flag);
  for (const char* cmd : {"cdf", "pmf", "moment", "cdf2d", "bounds", "trace", "hawkes", "gpb", "oracle", "convergence"})
    CHECK_MESSAGE(text.find(cmd) != std::string::npos, cmd);
}

TEST_CASE("artifacts regenerate from their own header") {
  const std::vector<std::vector<std::string>> runs{
      {"cdf", "--model", data_path("twopoint.json"), "-K", "64", "--filter", "srcos", "--at", "0.6pi,1"},
      {"pmf", "--model", data_path("twopoint.json"), "-K", "128", "--filter", "exp", "--alpha", "k2", "--at", "pi/4"},
      {"moment", "--model", data_path("twopoint.json"), "-K", "256", "-q", "1,2"},
      {"gpb", "--model", data_path("gpb_n95.json"), "-K", "128", "--filter", "rcos"},
      {"oracle", "cdf", "--model", data_path("gpb_n95.json"), "--method", "mc", "--paths", "2000", "--seed", "9",
       "--at", "0,1"},
      {"trace", "--filter", "lanczos", "-K", "16,32,64", "--x", "0.5"},
  };
  for (const auto& args : runs) {
    const Result first = run(args);
    REQUIRE_MESSAGE(first.status == cli::kExitOk, first.err);
    std::string command;
    for (const auto& l : lines_of(first.out))
      if (l.rfind("# command: discos ", 0) == 0) command = l.substr(18);
    REQUIRE(!command.empty());
    std::vector<std::string> replay;
    std::istringstream is(command);
    for (std::string w; is >> w;) replay.push_back(w);
    const Result second = run(replay);
    CHECK(second.status == cli::kExitOk);
    CHECK(second.out == first.out);
  }
}

TEST_CASE("output file") {
  const auto path = (std::filesystem::temp_directory_path() / "discos_cli_out.csv").string();
  std::filesystem::remove(path);
  const Result r = run({"cdf", "--model", data_path("twopoint.json"), "-K", "32", "--at", "1", "-o", path});
  REQUIRE(r.status == cli::kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str().find("# discos") == 0);
  CHECK(data_rows(body.str()).size() == 1);
}

TEST_CASE("exact and Monte Carlo oracles") {
  Result r = run({"oracle", "cdf", "--model", data_path("twopoint.json"), "--at", "0.6pi,1"});
  REQUIRE(r.status == cli::kExitOk);
  auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(fields(rows[0])[1] == 1.0);
  CHECK(fields(rows[1])[1] == 0.4);
  r = run({"oracle", "moment", "--model", data_path("twopoint.json"), "-q", "1"});
  REQUIRE(r.status == cli::kExitOk);
  CHECK(fields(data_rows(r.out)[0])[1] == doctest::Approx(0.4 * kPi));
  r = run({"oracle", "cdf", "--model", data_path("twopoint.json"), "--method", "mc", "--paths", "100000", "--at",
           "1"});
  REQUIRE(r.status == cli::kExitOk);
  CHECK(std::abs(fields(data_rows(r.out)[0])[1] - 0.4) < 5 * 0.5 / std::sqrt(100000.0));
  r = run({"oracle", "variance", "--model", data_path("twopoint.json")});
  CHECK(r.status == cli::kExitValidation);
}

TEST_CASE("hawkes command") {
  const Result r = run({"hawkes", "--config", data_path("hawkes_reference.json"), "-K", "1024", "--filter", "srcos"});
  REQUIRE_MESSAGE(r.status == cli::kExitOk, r.err);
  CHECK(r.out.find("range=hawkes") != std::string::npos);
  double total = 0.0;
  for (const auto& row : data_rows(r.out)) total += fields(row)[2];
  CHECK(std::abs(total - 1.0) < 1e-4);
}

TEST_CASE("bivariate command") {
  const std::string model = write_temp(
      "discos_2d.json",
      "{\"type\": \"discrete2d\", \"x1\": [0.5, 2.0], \"x2\": [1.0, 2.5], \"probs\": [0.3, 0.7]}");
  const Result r = run({"cdf2d", "--model", model, "--K1", "128", "--K2", "128", "--filter", "srcos", "--at",
                        "1.2:1.7,3:3"});
  REQUIRE_MESSAGE(r.status == cli::kExitOk, r.err);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(fields(rows[0]).back() == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(fields(rows[1]).back() == doctest::Approx(1.0).epsilon(1e-4));
}

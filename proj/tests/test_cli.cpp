// End-to-end drives of the command-line binary: artifact shape, numeric
// content, determinism, environment handling, and exit codes.  The binary
// path is injected by the build as AREADIST_CLI_PATH.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
  int exit_code;
  std::string out;  // stdout only; stderr is discarded
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd =
      env_prefix + std::string(AREADIST_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), out};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Data rows of a CSV artifact: everything after the header line that is not
// a comment.  Returns rows split on commas.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  bool seen_header = false;
  for (const auto& line : lines_of(text)) {
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      seen_header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path fresh_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("areadist_cli_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("verify subcommand passes and is deterministic across reruns") {
  const auto d1 = fresh_dir("verify1");
  const auto d2 = fresh_dir("verify2");
  const std::string args = "verify --all --seed 42 --format json --output report.json";

  // Relative --output paths land in AREADIST_OUTDIR; two runs into different
  // directories therefore share an identical effective configuration.
  const RunResult r1 = run_cli(args, "AREADIST_OUTDIR=" + d1.string() + " ");
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.out.find("verification: 30/30 checks passed") != std::string::npos);
  CHECK(r1.out.find("PASS sigma_product_identity") != std::string::npos);
  CHECK(r1.out.find("FAIL") == std::string::npos);

  const RunResult r2 = run_cli(args, "AREADIST_OUTDIR=" + d2.string() + " ");
  REQUIRE(r2.exit_code == 0);
  CHECK(r1.out == r2.out);

  const std::string a1 = slurp(d1 / "report.json");
  const std::string a2 = slurp(d2 / "report.json");
  REQUIRE(!a1.empty());
  CHECK(a1 == a2);
  CHECK(a1.find("\"checks\"") != std::string::npos);
  CHECK(a1.find("\"residual\"") != std::string::npos);
}

TEST_CASE("csv artifacts are byte-identical across reruns") {
  const auto d1 = fresh_dir("scan1");
  const auto d2 = fresh_dir("scan2");
  const std::string args =
      "measure-scan --n 4 --decades 3 --samples 400 --seed 7 --output scan.csv";
  REQUIRE(run_cli(args, "AREADIST_OUTDIR=" + d1.string() + " ").exit_code == 0);
  REQUIRE(run_cli(args, "AREADIST_OUTDIR=" + d2.string() + " ").exit_code == 0);
  const std::string a1 = slurp(d1 / "scan.csv");
  REQUIRE(!a1.empty());
  CHECK(a1 == slurp(d2 / "scan.csv"));
  CHECK(a1.find("fitted_exponent[fit]") != std::string::npos);
}

TEST_CASE("moments arcsin table has seven rows with tiny route residuals") {
  const RunResult r = run_cli("moments --kind arcsin --kmax 6");
  REQUIRE(r.exit_code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 7);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 7);
    CHECK(std::stod(row[4]) < 1e-8);  // residual between the derivative routes
    CHECK(std::stod(row[6]) < 1e-6);  // stability of the fitted density constant
  }
  CHECK(r.out.find("# check moment_route_agreement") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("moments linear table reproduces the first three unit-mass moments") {
  const RunResult r = run_cli("moments --kind linear --kmax 2");
  REQUIRE(r.exit_code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  const double expected[] = {1.0, -4.5, 75.0};
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::stod(rows[k][1]) == Catch::Approx(expected[k]).epsilon(1e-12));
    CHECK(std::stod(rows[k][2]) == Catch::Approx(expected[k]).epsilon(1e-12));
    CHECK(std::stod(rows[k][3]) == Catch::Approx(expected[k]).epsilon(1e-8));
  }
}

TEST_CASE("maxima scan reports five comb peaks near the predicted spacing") {
  const RunResult r = run_cli("maxima --gamma 0.1 --region spacelike --n 5");
  REQUIRE(r.exit_code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double location = std::stod(rows[i][1]);
    const double expected = 0.2 * static_cast<double>(i + 1);
    CHECK(std::abs(location / expected - 1.0) < 0.02);
    const double ratio = std::stod(rows[i][5]);  // location / predicted spectrum
    CHECK(ratio == Catch::Approx(2.0).margin(0.04));
  }
  CHECK(r.out.find("# summary mean_location_to_predicted[fit]") != std::string::npos);
}

TEST_CASE("maxima scan at gamma one stays empty with a diagnostic") {
  const RunResult r = run_cli("maxima --gamma 1 --region spacelike --n 3");
  REQUIRE(r.exit_code == 0);
  CHECK(csv_rows(r.out).empty());
  CHECK(r.out.find("# diagnostic no maxima above prominence floor") != std::string::npos);
}

TEST_CASE("density ray has the requested grid and the exact origin value") {
  const RunResult r = run_cli("density --gamma 1 --region spacelike --tmax 2 --points 5");
  REQUIRE(r.exit_code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  const double origin = 1.0 / (4.0 * std::acos(-1.0) * std::acos(-1.0));
  CHECK(std::stod(rows[0][1]) == Catch::Approx(origin).epsilon(1e-12));
  CHECK(std::stod(rows[4][0]) == Catch::Approx(2.0));
}

TEST_CASE("invalid invocations exit with the usage code") {
  CHECK(run_cli("bogus").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("moments --kind cubic").exit_code == 2);
  CHECK(run_cli("moments --kmax 40").exit_code == 2);
  CHECK(run_cli("density --gamma -1").exit_code == 2);
  CHECK(run_cli("maxima --n -2").exit_code == 2);
  CHECK(run_cli("euclidean-density --gamma-e 0 --gamma-e-im 0").exit_code == 2);
  CHECK(run_cli("measure-scan --decades 1").exit_code == 2);
}

TEST_CASE("grid through a density pole exits with the numeric failure code") {
  const RunResult r = run_cli(
      "euclidean-density --gamma-e -0.5 --gamma-e-im -0.5 --vmin 1.9 --vmax 2.1 "
      "--points 3");
  CHECK(r.exit_code == 1);
}

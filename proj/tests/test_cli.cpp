#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "timearrow/cli/check_suite.hpp"
#include "timearrow/cli/commands.hpp"
#include "timearrow/cli/run_config.hpp"

using namespace timearrow;
using namespace timearrow::cli;
using nlohmann::json;

namespace {

using Table = std::vector<std::vector<double>>;

/// Splits command output into its "# block:" tables.
std::map<std::string, Table> blocks(const std::string& text) {
  std::map<std::string, Table> out;
  std::istringstream in(text);
  std::string line, current;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# block: ", 0) == 0) {
      current = line.substr(9);
      out[current];
      header = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    out[current].push_back(row);
  }
  return out;
}

std::string run(CommandStatus (*cmd)(const RunConfig&, std::ostream&), const RunConfig& c,
                CommandStatus* status = nullptr) {
  std::ostringstream out;
  const auto s = cmd(c, out);
  if (status) *status = s;
  return out.str();
}

std::string config_error_field(const json& j) {
  try {
    resolve(parse_config(j));
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults describe the reference packet") {
  const auto c = resolve(parse_config(json::object()));
  CHECK(c.experiment == Experiment::gaussian);
  CHECK(c.packet.p0 == 6.4);
  CHECK(c.packet.xi0 == 3.0);
  CHECK(c.packet.mass == 1.0);
  CHECK(c.time.t0 == -0.5);
  CHECK(c.time.t1 == 0.5);
  CHECK(c.time.count == 201);
  CHECK(c.frame_times == std::vector<double>{-0.3, -0.05, 0.0, 0.05, 0.3});
  CHECK(c.grid.e_min.has_value());
  CHECK(c.grid.e_max.has_value());
}

TEST_CASE("config errors name the offending field") {
  CHECK(config_error_field({{"grid", {{"nodes", 3}}}}) == "grid.nodes");
  CHECK(config_error_field({{"colour", 1}}) == "colour");
  CHECK(config_error_field({{"grid", {{"n", 4}}}}) == "grid.n");
  CHECK(config_error_field({{"grid", {{"n", "many"}}}}) == "grid.n");
  CHECK(config_error_field({{"packet", {{"xi0", -1.0}}}}) == "packet.xi0");
  CHECK(config_error_field({{"experiment", "lorentzian"}}) == "experiment");
  CHECK(config_error_field({{"grid", {{"spacing", "cubic"}}}}) == "grid.spacing");
  CHECK(config_error_field({{"grid", {{"e_max", 10.0}}}}) == "grid.e_max");
  CHECK(config_error_field({{"time", {{"t0", 1.0}, {"t1", 0.0}}}}) == "time.t1");
  CHECK(config_error_field({{"output", {{"format", "parquet"}}}}) == "output.format");
  CHECK(config_error_field({{"couplings", {1.0, -2.0}}}) == "couplings[1]");
  CHECK(config_error_field({{"frame_times", {0.3, 0.1}}}) == "frame_times");
  CHECK(config_error_field({{"experiment", "exponential"}, {"grid", {{"e_min", 1e-3}}}}) ==
        "grid.e_min");
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config survives a JSON round trip") {
  auto c = resolve(parse_config({{"experiment", "exponential"}, {"time", {{"count", 7}}}}));
  const auto again = resolve(parse_config(to_json(c)));
  CHECK(to_json(again) == to_json(c));
}

TEST_CASE("trace of the exponential state") {
  const auto c = resolve(parse_config(
      {{"experiment", "exponential"}, {"time", {{"t0", -2.0}, {"t1", 2.0}, {"count", 21}}}}));
  CommandStatus status;
  const auto text = run(cmd_trace, c, &status);
  CHECK(status.ok());
  CHECK(text.rfind("# command: trace\n# config: {", 0) == 0);
  const auto t = blocks(text).at("trace");
  REQUIRE(t.size() == 21);
  for (const auto& row : t) {
    CHECK(std::abs(row[1] - oracle::exponential_mf(row[0])) < 2e-4);
    CHECK(std::abs(row[3] - oracle::exponential_mf(row[0])) < 1e-5);
    CHECK(std::abs(row[1] + row[2] - 1.0) < 1e-12);
  }
}

TEST_CASE("trace with no samples writes only the header") {
  const auto c = resolve(parse_config({{"time", {{"count", 0}}}}));
  CommandStatus status;
  const auto text = run(cmd_trace, c, &status);
  CHECK(status.ok());
  CHECK(blocks(text).at("trace").empty());
}

TEST_CASE("default trace is monotone and output is deterministic") {
  const auto c = resolve(parse_config(json::object()));
  CommandStatus status;
  const auto a = run(cmd_trace, c, &status);
  CHECK(status.ok());
  const auto t = blocks(a).at("trace");
  REQUIRE(t.size() == 201);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) CHECK(t[k + 1][1] < t[k][1]);
  CHECK(run(cmd_trace, c) == a);
}

TEST_CASE("frames") {
  const auto c = resolve(parse_config(json::object()));
  CommandStatus status;
  const auto b = blocks(run(cmd_frames, c, &status));
  CHECK(status.ok());
  const auto& summary = b.at("summary");
  REQUIRE(summary.size() == 5);
  for (const auto& row : summary) {
    CHECK(std::abs(row[1] - row[2]) < 1e-3);
    CHECK(std::abs(row[3] - 1.0) < 1e-6);
  }
  // The mean of m moves toward small m as time increases.
  CHECK(summary.back()[2] < summary.front()[2]);
  CHECK(b.count("position t=-0.3") == 1);
  CHECK(b.at("m t=0.3").size() == c.m_grid_size);
  CHECK(b.at("position t=0").size() == c.x_samples);
}

TEST_CASE("frames need the gaussian experiment") {
  const auto c = resolve(parse_config({{"experiment", "exponential"}}));
  std::ostringstream out;
  CHECK_THROWS_AS(cmd_frames(c, out), ConfigError);
}

TEST_CASE("equivalence table") {
  const auto c = resolve(parse_config({{"couplings", {0.0, 2.0}}, {"time", {{"t0", -0.3}, {"t1", 0.3}, {"count", 11}}}}));
  CommandStatus status;
  const auto b = blocks(run(cmd_equiv, c, &status));
  CHECK(status.ok());
  const auto& eq = b.at("equivalence");
  REQUIRE(eq.size() == 2);
  CHECK(eq[0][1] == 0.0);
  CHECK(eq[0][2] == 0.0);
  CHECK(eq[0][3] == 0.0);
  CHECK(eq[1][1] < 1e-10);
  CHECK(eq[1][2] < 1e-10);
  CHECK(eq[1][3] < 1e-12);
  const auto& ov = b.at("overlap");
  REQUIRE(ov.size() == 8);
  CHECK(ov.back()[1] == -50.0);
  CHECK(ov.back()[2] > 0.99);
}

TEST_CASE("galapon witness") {
  const auto c = resolve(parse_config(
      {{"levels", {0.0, 1.0}}, {"time", {{"t0", 0.0}, {"t1", 2.0 * std::numbers::pi}, {"count", 101}}}}));
  CommandStatus status;
  const auto b = blocks(run(cmd_galapon, c, &status));
  CHECK(status.ok());
  for (const auto& row : b.at("witness")) CHECK(std::abs(row[1] + std::sin(row[0])) < 1e-12);
  CHECK(b.at("summary")[0][0] == 1.0);
  CHECK(b.at("proportionality")[0][2] < 1e-12);

  const auto bad = resolve(parse_config({{"levels", {1.0, 1.0}}}));
  std::ostringstream out;
  CHECK_THROWS_AS(cmd_galapon(bad, out), ConfigError);
}

TEST_CASE("check suite filtering and fault injection") {
  CheckOptions options;
  options.filter = "hardy";
  const auto hardy = run_check_suite(options);
  CHECK(!hardy.results.empty());
  CHECK(hardy.all_passed());
  for (const auto& r : hardy.results) CHECK(r.module == "hardy_oracle");

  options.filter = "completeness";
  options.corrupt_kernel = true;
  const auto broken = run_check_suite(options);
  REQUIRE(broken.results.size() == 1);
  CHECK(broken.results[0].name == "completeness_defect");
  CHECK_FALSE(broken.all_passed());
  std::ostringstream summary;
  print_summary(broken, summary);
  CHECK(summary.str().find("completeness_defect") != std::string::npos);
}

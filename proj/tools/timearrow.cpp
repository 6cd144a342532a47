#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "timearrow/cli/check_suite.hpp"
#include "timearrow/cli/commands.hpp"
#include "timearrow/cli/run_config.hpp"

namespace {

using namespace timearrow::cli;

struct Flags {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::string filter;
  std::optional<std::size_t> grid_n;
  std::string fault;
};

RunConfig load(const Flags& f) {
  RunConfig c = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
  if (f.grid_n) c.grid.n = *f.grid_n;
  if (!f.out_path.empty()) c.output_path = f.out_path;
  return resolve(c);
}

int report(const CommandStatus& status) {
  for (const auto& failure : status.failures) std::cerr << "invariant failed: " << failure << '\n';
  return status.ok() ? 0 : 1;
}

int run_data_command(const Flags& f, CommandStatus (*command)(const RunConfig&, std::ostream&)) {
  const RunConfig config = load(f);
  if (config.output_path == "-") return report(command(config, std::cout));
  std::ofstream out(config.output_path);
  if (!out) throw ConfigError("output.path", "cannot open " + config.output_path);
  return report(command(config, out));
}

int run_check(const Flags& f) {
  CheckOptions options;
  options.filter = f.filter;
  if (f.seed) options.seed = *f.seed;
  if (f.grid_n) {
    if (*f.grid_n < 8) throw ConfigError("--grid-n", "must be at least 8");
    options.grid_n = *f.grid_n;
  }
  if (!f.fault.empty()) options.corrupt_kernel = true;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!f.out_path.empty() && f.out_path != "-") {
    file.open(f.out_path);
    if (!file) throw ConfigError("--out", "cannot open " + f.out_path);
    out = &file;
  }
  const auto result = run_check_suite(options, out);
  print_summary(result, *out);
  if (result.results.empty()) {
    std::cerr << "no checks match filter \"" << f.filter << "\"\n";
    return 1;
  }
  for (const auto& r : result.results)
    if (!r.passed) std::cerr << "invariant failed: " << r.module << "/" << r.name << '\n';
  return result.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arrow-of-time operator: traces, frames, checks, scattering and T-operator comparisons"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config_path, "JSON run configuration");
  app.add_option("--out", f.out_path, "output file; - for stdout");
  app.add_option("--seed", f.seed, "seed for random states");
  app.add_option("--filter", f.filter, "run only checks whose module/name contains this");
  app.add_option("--grid-n", f.grid_n, "energy grid size");
  app.add_option("--inject-fault", f.fault, "test hook")
      ->check(CLI::IsMember({"kernel-antisymmetry"}))
      ->group("");
  app.fallthrough();

  auto* trace = app.add_subcommand("trace", "<M_F(t)>, <M_B(t)> and the oracle trace");
  auto* frames = app.add_subcommand("frames", "position and m-distribution frames");
  auto* check = app.add_subcommand("check", "run the invariant suite");
  auto* equiv = app.add_subcommand("equiv", "free versus delta-potential equivalence");
  auto* galapon = app.add_subcommand("galapon", "<T(t)> witness and the proportionality check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*check) return run_check(f);
    if (*trace) return run_data_command(f, cmd_trace);
    if (*frames) return run_data_command(f, cmd_frames);
    if (*equiv) return run_data_command(f, cmd_equiv);
    if (*galapon) return run_data_command(f, cmd_galapon);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

#pragma once

// Configuration of one command-line run. Every field has a default; a JSON
// file may override any subset. Unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "timearrow/spectral_core.hpp"
#include "timearrow/states.hpp"

namespace timearrow::cli {

/// Invalid configuration; `field` names the offending entry (dotted path).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Experiment { gaussian, exponential };

struct GridConfig {
  std::optional<double> e_min;  // automatic when empty
  std::optional<double> e_max;
  std::size_t n = 4096;
  Spacing spacing = Spacing::logarithmic;
};

struct TimeWindow {
  double t0 = -0.5;
  double t1 = 0.5;
  std::size_t count = 201;

  std::vector<double> samples() const;
};

struct RunConfig {
  Experiment experiment = Experiment::gaussian;
  GaussianPacketParams packet;
  GridConfig grid;
  TimeWindow time;
  std::size_t m_grid_size = 201;
  std::string output_path = "-";
  std::string output_format = "csv";
  std::vector<double> frame_times = {-0.3, -0.05, 0.0, 0.05, 0.3};
  std::vector<double> couplings = {0.0, 1.0, 2.0};
  std::vector<double> levels = {0.0, 1.0};
  std::size_t x_samples = 401;
};

/// Overrides the defaults with the keys present in `j`.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Checks module preconditions and fills in automatic grid bounds.
RunConfig resolve(RunConfig config);

nlohmann::json to_json(const RunConfig& config);

/// Energy grid described by a resolved config.
GridPtr make_grid(const RunConfig& config);
/// The experiment's initial state on make_grid(config).
ChannelState make_state(const RunConfig& config, const GridPtr& grid);

}  // namespace timearrow::cli

#include "timearrow/cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace timearrow::cli {

using nlohmann::json;

namespace {

constexpr double kExponentialEmin = 1e-16;
constexpr double kExponentialEmax = 50.0;

void reject_unknown(const json& j, const std::string& prefix, const std::set<std::string>& known) {
  if (!j.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError(prefix.empty() ? key : prefix + "." + key, "unknown field");
}

template <class T>
T read(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "wrong type");
  }
}

double read_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

std::size_t read_count(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw ConfigError(field, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<double> read_numbers(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(read_number(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

std::optional<double> read_bound(const json& j, const std::string& field) {
  if (j.is_null()) return std::nullopt;
  return read_number(j, field);
}

}  // namespace

std::vector<double> TimeWindow::samples() const {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = count == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(count - 1);
  return out;
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  reject_unknown(j, "",
                 {"experiment", "packet", "grid", "time", "m_grid_size", "output", "frame_times",
                  "couplings", "levels", "x_samples"});
  if (j.contains("experiment")) {
    const auto name = read<std::string>(j["experiment"], "experiment");
    if (name == "gaussian")
      c.experiment = Experiment::gaussian;
    else if (name == "exponential")
      c.experiment = Experiment::exponential;
    else
      throw ConfigError("experiment", "expected \"gaussian\" or \"exponential\"");
  }
  if (j.contains("packet")) {
    const auto& p = j["packet"];
    reject_unknown(p, "packet", {"mass", "p0", "xi0"});
    if (p.contains("mass")) c.packet.mass = read_number(p["mass"], "packet.mass");
    if (p.contains("p0")) c.packet.p0 = read_number(p["p0"], "packet.p0");
    if (p.contains("xi0")) c.packet.xi0 = read_number(p["xi0"], "packet.xi0");
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    reject_unknown(g, "grid", {"e_min", "e_max", "n", "spacing"});
    if (g.contains("e_min")) c.grid.e_min = read_bound(g["e_min"], "grid.e_min");
    if (g.contains("e_max")) c.grid.e_max = read_bound(g["e_max"], "grid.e_max");
    if (g.contains("n")) c.grid.n = read_count(g["n"], "grid.n");
    if (g.contains("spacing")) {
      try {
        c.grid.spacing = spacing_from_string(read<std::string>(g["spacing"], "grid.spacing"));
      } catch (const GridError&) {
        throw ConfigError("grid.spacing", "expected \"linear\" or \"logarithmic\"");
      }
    }
  }
  if (j.contains("time")) {
    const auto& t = j["time"];
    reject_unknown(t, "time", {"t0", "t1", "count"});
    if (t.contains("t0")) c.time.t0 = read_number(t["t0"], "time.t0");
    if (t.contains("t1")) c.time.t1 = read_number(t["t1"], "time.t1");
    if (t.contains("count")) c.time.count = read_count(t["count"], "time.count");
  }
  if (j.contains("m_grid_size")) c.m_grid_size = read_count(j["m_grid_size"], "m_grid_size");
  if (j.contains("output")) {
    const auto& o = j["output"];
    reject_unknown(o, "output", {"path", "format"});
    if (o.contains("path")) c.output_path = read<std::string>(o["path"], "output.path");
    if (o.contains("format")) c.output_format = read<std::string>(o["format"], "output.format");
  }
  if (j.contains("frame_times")) c.frame_times = read_numbers(j["frame_times"], "frame_times");
  if (j.contains("couplings")) c.couplings = read_numbers(j["couplings"], "couplings");
  if (j.contains("levels")) c.levels = read_numbers(j["levels"], "levels");
  if (j.contains("x_samples")) c.x_samples = read_count(j["x_samples"], "x_samples");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

RunConfig resolve(RunConfig c) {
  const auto& p = c.packet;
  if (!(p.mass > 0.0) || !std::isfinite(p.mass)) throw ConfigError("packet.mass", "must be positive");
  if (!(p.xi0 > 0.0) || !std::isfinite(p.xi0)) throw ConfigError("packet.xi0", "must be positive");
  if (!std::isfinite(p.p0)) throw ConfigError("packet.p0", "must be finite");
  if (c.grid.n < 8) throw ConfigError("grid.n", "must be at least 8");

  if (c.experiment == Experiment::exponential) {
    if (!c.grid.e_min) c.grid.e_min = kExponentialEmin;
    if (!c.grid.e_max) c.grid.e_max = kExponentialEmax;
    if (*c.grid.e_min > 1e-8) throw ConfigError("grid.e_min", "must be <= 1e-8 for the exponential state");
    if (*c.grid.e_max < 40.0) throw ConfigError("grid.e_max", "must be >= 40 for the exponential state");
  } else {
    const auto auto_grid = packet_energy_grid(p, 8);
    if (!c.grid.e_min) c.grid.e_min = auto_grid->e_min();
    if (!c.grid.e_max) c.grid.e_max = auto_grid->e_max();
    const double needed = (std::abs(p.p0) + 8.0 * p.xi0);
    if (std::sqrt(2.0 * p.mass * *c.grid.e_max) < needed * (1.0 - 1e-12))
      throw ConfigError("grid.e_max", "must cover |p0| + 8 xi0");
  }
  if (!(*c.grid.e_min > 0.0)) throw ConfigError("grid.e_min", "must be positive");
  if (!(*c.grid.e_max > *c.grid.e_min)) throw ConfigError("grid.e_max", "must exceed grid.e_min");

  if (!std::isfinite(c.time.t0) || !std::isfinite(c.time.t1))
    throw ConfigError("time", "bounds must be finite");
  if (c.time.count > 1 && !(c.time.t1 > c.time.t0))
    throw ConfigError("time.t1", "must exceed time.t0 when count > 1");
  if (c.m_grid_size < 1) throw ConfigError("m_grid_size", "must be at least 1");
  if (c.output_format != "csv") throw ConfigError("output.format", "only \"csv\" is supported");
  if (c.x_samples < 2) throw ConfigError("x_samples", "must be at least 2");
  for (std::size_t k = 0; k < c.couplings.size(); ++k)
    if (!(c.couplings[k] >= 0.0))
      throw ConfigError("couplings[" + std::to_string(k) + "]", "must be >= 0");
  for (std::size_t k = 1; k < c.frame_times.size(); ++k)
    if (!(c.frame_times[k] > c.frame_times[k - 1]))
      throw ConfigError("frame_times", "must be strictly increasing");
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["experiment"] = c.experiment == Experiment::gaussian ? "gaussian" : "exponential";
  j["packet"] = {{"mass", c.packet.mass}, {"p0", c.packet.p0}, {"xi0", c.packet.xi0}};
  j["grid"] = {{"e_min", c.grid.e_min ? json(*c.grid.e_min) : json(nullptr)},
               {"e_max", c.grid.e_max ? json(*c.grid.e_max) : json(nullptr)},
               {"n", c.grid.n},
               {"spacing", to_string(c.grid.spacing)}};
  j["time"] = {{"t0", c.time.t0}, {"t1", c.time.t1}, {"count", c.time.count}};
  j["m_grid_size"] = c.m_grid_size;
  j["output"] = {{"path", c.output_path}, {"format", c.output_format}};
  j["frame_times"] = c.frame_times;
  j["couplings"] = c.couplings;
  j["levels"] = c.levels;
  j["x_samples"] = c.x_samples;
  return j;
}

GridPtr make_grid(const RunConfig& c) {
  try {
    return make_energy_grid(c.grid.e_min.value(), c.grid.e_max.value(), c.grid.n, c.grid.spacing);
  } catch (const std::bad_optional_access&) {
    throw ConfigError("grid", "bounds not resolved");
  } catch (const GridError& e) {
    throw ConfigError("grid", e.what());
  }
}

ChannelState make_state(const RunConfig& c, const GridPtr& grid) {
  try {
    if (c.experiment == Experiment::exponential) return exponential_profile(grid);
    return gaussian_channel_state(c.packet, grid);
  } catch (const GridError& e) {
    throw ConfigError("grid", e.what());
  }
}

}  // namespace timearrow::cli

#include "timearrow/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "timearrow/arrow_operator.hpp"
#include "timearrow/galapon_bridge.hpp"
#include "timearrow/hardy_oracle.hpp"
#include "timearrow/m_transform.hpp"
#include "timearrow/scattering_equiv.hpp"
#include "timearrow/states.hpp"

namespace timearrow::cli {

namespace {

constexpr double kMonotoneTolerance = 1e-9;
constexpr double kFrameMomentTolerance = 1e-3;
constexpr double kFrameNormTolerance = 1e-6;
constexpr double kEquivalenceTolerance = 1e-10;
constexpr double kOverlapFloor = 0.99;
constexpr double kFrameHalfWidth = 10.0;  // in units of the position spread
constexpr double kProportionalityTolerance = 1e-12;
const std::vector<double> kOverlapTimes = {-5.0, -10.0, -20.0, -50.0};

void header(std::ostream& out, const char* command, const RunConfig& config) {
  out << "# command: " << command << '\n';
  out << "# config: " << to_json(config).dump() << '\n';
}

void block(std::ostream& out, const std::string& name, const std::string& columns) {
  out << "# block: " << name << '\n' << columns << '\n';
}

void row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (const double v : values) {
    if (!first) out << ',';
    out << format_number(v);
    first = false;
  }
  out << '\n';
}

std::string describe(const char* what, double value, double bound) {
  std::ostringstream s;
  s << what << " = " << value << " (bound " << bound << ")";
  return s.str();
}

void require_gaussian(const RunConfig& config, const char* command) {
  if (config.experiment != Experiment::gaussian)
    throw ConfigError("experiment", std::string(command) + " needs the gaussian experiment");
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CommandStatus cmd_trace(const RunConfig& config, std::ostream& out) {
  const auto grid = make_grid(config);
  const auto psi = make_state(config, grid);
  const auto times = config.time.samples();
  const auto kernel = build_kernel(grid, Orientation::forward);
  const auto trace = lyapunov_trace(kernel, psi, times, kMonotoneTolerance);
  const auto oracle = mf_trace_oracle(psi, times);

  header(out, "trace", config);
  block(out, "trace", "t,mf,mb,mf_oracle");
  for (std::size_t k = 0; k < times.size(); ++k)
    row(out, {times[k], trace.mf_values[k], trace.mb_values[k], oracle[k]});

  CommandStatus status;
  for (const auto& v : trace.violations) {
    std::ostringstream s;
    s << "mf increases by " << v.increase << " between t = " << times[v.step]
      << " and t = " << times[v.step + 1];
    status.failures.push_back(s.str());
  }
  return status;
}

CommandStatus cmd_frames(const RunConfig& config, std::ostream& out) {
  require_gaussian(config, "frames");
  if (config.grid.spacing != Spacing::logarithmic)
    throw ConfigError("grid.spacing", "frames need a logarithmic grid");
  const auto grid = make_grid(config);
  const auto psi = make_state(config, grid);
  const auto kernel = build_kernel(grid, Orientation::forward);
  const auto& p = config.packet;

  header(out, "frames", config);
  CommandStatus status;
  block(out, "summary", "t,mf,m_first_moment,x_norm");
  std::ostringstream frames;
  for (const double t : config.frame_times) {
    const auto evolved = evolve(psi, t);
    const double mf = mf_expectation(kernel, psi, t);
    const auto dist = to_m_representation(evolved);
    double moment = 0.0;
    for (std::size_t j = 0; j < dist.channel_count(); ++j) moment += dist.channel_first_moment(j);

    const double centre = p.centre(t), spread = p.position_width(t);
    const double lo = centre - kFrameHalfWidth * spread, hi = centre + kFrameHalfWidth * spread;
    const std::size_t nx = config.x_samples;
    const double dx = (hi - lo) / static_cast<double>(nx - 1);
    frames << "# block: position t=" << format_number(t) << '\n' << "x,density\n";
    double x_norm = 0.0;
    for (std::size_t k = 0; k < nx; ++k) {
      const double x = lo + dx * static_cast<double>(k);
      const double d = gaussian_position_density(p, x, t);
      x_norm += (k == 0 || k + 1 == nx ? 0.5 : 1.0) * d * dx;
      row(frames, {x, d});
    }

    frames << "# block: m t=" << format_number(t) << '\n'
           << "m,density,density_plus,density_minus\n";
    const std::size_t nm = config.m_grid_size;
    for (std::size_t k = 0; k < nm; ++k) {
      const double m = (static_cast<double>(k) + 0.5) / static_cast<double>(nm);
      const auto a = m_amplitude(evolved, m);
      row(frames, {m, std::norm(a[0] + a[1]), std::norm(a[0]), std::norm(a[1])});
    }

    row(out, {t, mf, moment, x_norm});
    if (std::abs(moment - mf) > kFrameMomentTolerance)
      status.failures.push_back(describe("|m first moment - <M_F>|", std::abs(moment - mf),
                                         kFrameMomentTolerance));
    if (std::abs(x_norm - 1.0) > kFrameNormTolerance)
      status.failures.push_back(describe("|x norm - 1|", std::abs(x_norm - 1.0), kFrameNormTolerance));
  }
  out << frames.str();
  return status;
}

CommandStatus cmd_equiv(const RunConfig& config, std::ostream& out) {
  require_gaussian(config, "equiv");
  const auto grid = make_grid(config);
  const auto psi = make_state(config, grid).normalized();
  const auto times = config.time.samples();

  header(out, "equiv", config);
  CommandStatus status;
  block(out, "equivalence", "coupling,mf_defect,m_defect,unitarity_defect");
  std::ostringstream overlaps;
  overlaps << "# block: overlap\ncoupling,t,overlap\n";
  for (const double lambda : config.couplings) {
    const auto model = delta_model(lambda, config.packet.mass);
    double unitarity = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i)
      unitarity = std::max(unitarity,
                           model.unitarity_defect(std::sqrt(2.0 * model.mass() * grid->node(i))));
    const double mf_defect = equivalence_defect(psi, model, times);
    const double m_defect = m_distribution_defect(psi, model, times);
    row(out, {lambda, mf_defect, m_defect, unitarity});
    if (mf_defect >= kEquivalenceTolerance)
      status.failures.push_back(describe("mf equivalence defect", mf_defect, kEquivalenceTolerance));
    if (m_defect >= kEquivalenceTolerance)
      status.failures.push_back(describe("m equivalence defect", m_defect, kEquivalenceTolerance));
    for (const double t : kOverlapTimes) {
      const double ov = asymptotic_overlap(psi, model, t);
      row(overlaps, {lambda, t, ov});
      if (t == kOverlapTimes.back() && !(ov > kOverlapFloor))
        status.failures.push_back(describe("asymptotic overlap", ov, kOverlapFloor));
    }
  }
  out << overlaps.str();
  return status;
}

CommandStatus cmd_galapon(const RunConfig& config, std::ostream& out) {
  if (config.levels.size() < 2) throw ConfigError("levels", "need at least two energies");
  DiscreteOperator t_op = [&] {
    try {
      return galapon_T(config.levels);
    } catch (const GridError& e) {
      throw ConfigError("levels", e.what());
    }
  }();
  const std::size_t n = config.levels.size();
  std::vector<complex> state(n, complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  const auto times = config.time.samples();
  const auto witness = lyapunov_violation_witness(t_op, state, times);

  header(out, "galapon", config);
  block(out, "witness", "t,T");
  for (std::size_t k = 0; k < times.size(); ++k) row(out, {times[k], witness.values[k]});

  block(out, "summary", "non_monotone,extremum_t,max_imaginary");
  row(out, {witness.non_monotone ? 1.0 : 0.0,
            witness.non_monotone ? times[witness.extremum_index] : std::nan(""),
            witness.max_imaginary});

  // 2 M_F - 1 on a uniform grid against T on the same nodes.
  const auto uniform = make_energy_grid(1.0, 2.0, 64, Spacing::linear);
  const auto symmetric = discretize_symmetric(*uniform);
  const auto t_grid = galapon_T(uniform->nodes());
  const double scale = uniform->step() / std::numbers::pi;
  const double defect = proportionality_defect(symmetric, t_grid, scale);
  block(out, "proportionality", "n,scale,defect,hermiticity_defect");
  row(out, {64.0, scale, defect, symmetric.hermiticity_defect()});

  CommandStatus status;
  if (defect > kProportionalityTolerance)
    status.failures.push_back(describe("proportionality defect", defect, kProportionalityTolerance));
  return status;
}

}  // namespace timearrow::cli

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crflow/gates.hpp"
#include "crflow/model.hpp"

namespace crflow {

inline constexpr const char* kToolVersion = "0.1.0";

struct SweepAxis {
  std::string variable;  // delta_ct, delta_st, amplitude_mhz, phase_rad, j_mhz, omega_<name>, alpha_<name>
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

SweepAxis parse_sweep_axis(const std::string& text);  // "VAR:MIN:MAX:STEP"

struct RunConfig {
  std::string command;  // params, sweep, echo-error, collisions, saturation, spectator, verify
  std::string spec_path;
  std::vector<SweepAxis> sweep;
  int order = 2;
  Basis basis = Basis::energy;
  std::string format = "csv";
  std::string out_path;  // stdout when empty
  double guard_band_mhz = 1.0;
  bool include_beta = false;
  bool no_rwa = false;
  bool kerr_mode = false;
  std::string zz_convention = "half";  // "full" doubles multi-Z rates
  std::optional<double> pole_tol_mhz;
  int threads = 0;  // 0: CRFLOW_THREADS, then hardware concurrency
};

// Applies one sweep variable to a spec; throws std::invalid_argument on an
// unknown name.
void set_variable(DeviceSpec& spec, const std::string& variable, double value);

// Executes the command; returns the process exit code (0 ok, 2 when more
// than half of the rows are masked by poles, 1 on error).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace crflow

#pragma once

#include <vector>

#include "crflow/gates.hpp"
#include "crflow/model.hpp"

namespace crflow {

struct SaturationOptions {
  int levels = 8;          // control levels kept in the driven eigenproblem
  double step_mhz = 1.0;   // continuation step in drive amplitude
  double min_overlap = 0.5;
};

// Eigenpairs of the static control Hamiltonian in the frame rotating at
// w_d, column n continued from bare level n at zero drive.
struct DrivenControl {
  double omega_mhz = 0.0;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd states;
  double worst_overlap = 1.0;  // smallest chaining overlap on the way up
  bool label_crossing = false;
};

DrivenControl driven_control_eigensystem(const DeviceSpec& spec, double omega_mhz,
                                         const SaturationOptions& opt = {});

// Level energies, lowering matrix and drive coefficient used above.
struct ControlLadder {
  Eigen::VectorXd rotating_energies;  // E_n - n w_d
  Eigen::MatrixXd lower;
  cd drive_per_mhz;                   // drive coefficient for unit amplitude
  double omega_d = 0.0;
};
ControlLadder control_ladder(const DeviceSpec& spec, const SaturationOptions& opt = {});

struct InteractionConstants {
  double a0 = 0.0;
  double a1 = 0.0;
  double ix_direct = 0.0;  // crosstalk drive seen by the target
  bool label_crossing = false;

  double zx() const { return a0 - a1; }
  double ix() const { return a0 + a1 + ix_direct; }
};

InteractionConstants interaction_constants(const DeviceSpec& spec, double omega_mhz,
                                           const SaturationOptions& opt = {});

struct SaturationCurve {
  std::vector<double> omega;
  std::vector<double> zx, ix, a0, a1;
  std::vector<bool> flagged;
  RegionLabel region;
};

// grid must be positive and ascending; one continuation pass serves it all.
SaturationCurve saturation_curve(const DeviceSpec& spec, const std::vector<double>& grid,
                                 const SaturationOptions& opt = {});

}  // namespace crflow

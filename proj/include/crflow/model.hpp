#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crflow/opalg.hpp"
#include "crflow/transmon.hpp"

namespace crflow {

enum class Role { control, target, spectator };
enum class DriveMode { bare_target, dressed_target, explicit_frequency };
enum class Topology { two_qubit, control_spectator, target_spectator };

struct QubitSpec {
  std::string name;
  Role role = Role::control;
  double omega_mhz = 0.0;
  double alpha_mhz = 0.0;
  int cutoff = 4;
};

struct Coupling {
  int a = 0;  // indices into DeviceSpec::qubits
  int b = 0;
  double j_mhz = 0.0;
};

struct DriveSpec {
  double amplitude_mhz = 0.0;  // negative values flip the drive sign
  double phase_rad = 0.0;
  DriveMode mode = DriveMode::dressed_target;
  double frequency_mhz = 0.0;  // used by explicit_frequency
};

struct Crosstalk {
  double a_c = 0.0;
  double a_t = 0.0;
  double phi_t_rad = 0.0;
};

struct ModelOptions {
  bool rwa = true;
  bool kerr_mode = false;
  bool include_beta = false;
  bool include_nu03 = false;
};

struct DeviceSpec {
  std::vector<QubitSpec> qubits;
  std::vector<Coupling> couplings;
  DriveSpec drive;
  std::optional<Crosstalk> crosstalk;
  ModelOptions options;

  int control() const;
  int target() const;
  int spectator() const;  // -1 when absent
  Topology topology() const;
  double coupling(int a, int b) const;  // 0 when the pair is not coupled
  void validate() const;                 // throws std::invalid_argument
};

// Level data of one qubit in the chosen representation.
struct QubitLevels {
  std::vector<double> energies;  // lab-frame E_n, E_0 = 0
  Eigen::MatrixXd lower;         // charge lowering part, (n, n+1) = nu_{n,n+1}
  double epsilon = 0.0;
  double beta_mhz = 0.0;
};

QubitLevels qubit_levels(const QubitSpec& q, const ModelOptions& opt);

struct Model {
  BlockStructure layout;          // tensor factors, target factor marked
  std::vector<int> factor_qubit;  // factor -> index in DeviceSpec::qubits
  int control_factor = 0;
  int target_factor = 1;
  int spectator_factor = -1;
  std::vector<QubitLevels> levels;  // per factor
  Eigen::VectorXd h0;               // diagonal of H0
  Mat exchange;                     // H_J alone
  FourierOperator hint;             // exchange + drive, lab frame
  double omega_d = 0.0;

  int dim() const { return layout.size(); }
  Mat lowering(int factor) const;   // embedded in the full space
  Eigen::VectorXd number(int factor) const;
  int index(const std::vector<int>& levels_per_factor) const;
};

Model build_two_qubit(const DeviceSpec& spec);
Model build_three_qubit(const DeviceSpec& spec, Topology topology);
Model build_model(const DeviceSpec& spec);

// Hint of a spec that carries crosstalk; the control drive is scaled by
// (1 - A_c) and a target drive A_t Omega with extra phase phi_t is added.
FourierOperator apply_crosstalk(const DeviceSpec& spec);

enum class DressMethod { perturbative, numeric };

struct DressedBasis {
  Eigen::VectorXd energies;  // indexed by bare label
  Mat states;                // column k is the dressed state labelled by bare k
  double omega_zz = 0.0;     // static rates on the control/target pair
  double omega_iz = 0.0;
  double omega_zi = 0.0;
};

DressedBasis dressed_basis(const DeviceSpec& spec, DressMethod method);
DressedBasis dressed_basis(const Model& m, DressMethod method);

double drive_frequency(const DeviceSpec& spec);

}  // namespace crflow

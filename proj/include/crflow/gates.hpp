#pragma once

#include <map>
#include <string>
#include <vector>

#include "crflow/model.hpp"
#include "crflow/swpt.hpp"

namespace crflow {

enum class Basis { energy, kerr };

// Pauli rates keyed by strings in tensor-factor order ("ZX" is control Z,
// target X for a two-qubit device). H = sum_P rate_P P / 2.
struct GateParams {
  int n_qubits = 2;
  int order = 2;
  Basis basis = Basis::energy;
  bool static_subtracted = false;
  std::map<std::string, double> rates;

  double get(const std::string& p) const;
  // Two-qubit names regardless of factor order: "zx" means control Z,
  // target X, spectator I.
  double rate(const std::string& control_target) const;
  std::vector<int> factor_roles;  // 0 control, 1 target, 2 spectator, per factor
};

Mat pauli_matrix(const std::string& p);  // first letter is most significant
std::map<std::string, double> pauli_decompose(const Mat& h, int n_qubits);
Mat pauli_reconstruct(const std::map<std::string, double>& w, int n_qubits);

// Restriction to states with every factor in {0, 1}.
Mat computational_block(const Mat& full, const BlockStructure& layout);

GateParams gate_params(const DeviceSpec& spec, int order, const SwptOptions& opt = {});
GateParams gate_params(const Model& m, const Model& undriven, int order, const SwptOptions& opt = {});

// Printed lowest-order forms plus the J Omega^3 correction to ZX when
// order is 4. Two-qubit only; drive phase must be 0 or pi.
GateParams closed_form_params(const DeviceSpec& spec, int order = 2);

// The J Omega^3 ZX coefficient of the energy basis and the Kerr form.
double zx_fourth_energy(double delta, double alpha_c, double nu_c01, double nu_c12, double nu_c23, double nu_t01);
double zx_fourth_kerr(double delta, double alpha_c);

struct RegionLabel {
  int region = 0;  // 1..5, 0 on a pole
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
};

RegionLabel classify_region(double delta_ct, double alpha_c, double alpha_t);

// 1 - (A~/A) sqrt(B C / (B~ C~)) from the lowest-order coefficients.
double kerr_vs_energy_zx_error(const DeviceSpec& spec);

}  // namespace crflow

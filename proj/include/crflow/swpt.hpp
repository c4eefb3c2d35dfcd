#pragma once

#include <vector>

#include "crflow/errors.hpp"
#include "crflow/model.hpp"
#include "crflow/opalg.hpp"

namespace crflow {

struct SwptOptions {
  Tolerances tol;
  // Drop generator poles that cannot reach the computational block within
  // max_order; see BFS distance in swpt.cpp.
  bool filter_irrelevant_poles = true;
};

struct EffectiveSeries {
  int max_order = 0;
  std::vector<FourierOperator> heff;        // heff[n-1] is order n
  std::vector<FourierOperator> generators;  // generators[n-1] is G_n, n < max_order
  std::vector<PoleEntry> dropped_poles;     // irrelevant poles that were zeroed
  BlockStructure layout;
};

// Hint carried in the interaction frame of the diagonal H0.
FourierOperator interaction_frame(const Eigen::VectorXd& h0, const FourierOperator& hint);

EffectiveSeries run_swpt(const Model& m, int max_order, const SwptOptions& opt = {});
EffectiveSeries run_swpt(const DeviceSpec& spec, int max_order, const SwptOptions& opt = {});

// Static part of sum_{n <= max_order} H_eff^(n), read in the frame where the
// target rotates at the drive frequency.
Mat effective_static(const Model& m, const EffectiveSeries& s, int max_order);
Mat effective_static(const DeviceSpec& spec, int max_order, const SwptOptions& opt = {});

struct OracleOptions {
  double duration = 20.0;  // 1/MHz
  int samples = 4000;
  double rtol = 1e-10;
  double max_residual = 0.05;
};

struct OracleRates {
  double omega_zx = 0.0;
  double omega_ix = 0.0;
  Eigen::Vector3d w0 = Eigen::Vector3d::Zero();  // target precession vector, control in 0
  Eigen::Vector3d w1 = Eigen::Vector3d::Zero();  // control in 1
  double residual = 0.0;
};

// Propagates the full Schroedinger equation in the drive frame and fits the
// conditional target precession.
OracleRates time_domain_oracle(const DeviceSpec& spec, const OracleOptions& opt = {});

}  // namespace crflow

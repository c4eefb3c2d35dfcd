#pragma once

#include <Eigen/Dense>
#include <complex>

#include "crflow/gates.hpp"

namespace crflow {

using Mat4 = Eigen::Matrix4cd;

// The five rates the echo acts on; everything else is ignored.
struct CrRates {
  double ix = 0.0, iz = 0.0, zi = 0.0, zx = 0.0, zz = 0.0;
  static CrRates from(const GateParams& g);
};

struct EchoResult {
  cd u_ii, u_iy, u_iz, u_zx;
  double omega_plus = 0.0, omega_minus = 0.0;
  double tau_p = 0.0;
  double w_ii = 0.0, w_iy = 0.0, w_iz = 0.0, w_zx = 0.0;  // echoed rates
  bool branch_ambiguous = false;
  Mat4 u;
};

double pulse_time(double omega_zx);

// Closed-form echo coefficients, checked against the product of the four
// exponentials; MismatchClosedForm if they disagree beyond 1e-9.
EchoResult echo_unitary(const CrRates& r, double tau_p);
EchoResult echo_unitary(const GateParams& g, double tau_p);
Mat4 echo_unitary_direct(const CrRates& r, double tau_p);

// Fills the echoed rates from the u coefficients (principal logarithms).
void echo_hamiltonian(EchoResult& e);

Mat4 ideal_zx(double omega_zx_sign);  // exp(-i pi ZX / 4), sign flipped for negative ZX

struct Fidelity {
  double fidelity = 0.0;
  double error = 0.0;
};
Fidelity gate_fidelity(const Mat4& u, const Mat4& ideal);

struct MakhlinInvariants {
  double g_x = 0.0, g_y = 0.0, g_z = 0.0;
};

MakhlinInvariants makhlin(const Mat4& u);
MakhlinInvariants makhlin_from_cartan(const Eigen::Vector3d& c);
Mat4 cartan_unitary(const Eigen::Vector3d& c);  // exp(-i/2 sum c_k P_k P_k)
double nonlocal_error(const MakhlinInvariants& g);
double entangling_power(const Eigen::Vector3d& c);
double entangling_power_gap(const MakhlinInvariants& g);

struct EchoReport {
  EchoResult echo;
  Fidelity fid;
  MakhlinInvariants g;
  double nonlocal_error = 0.0;
  double entangling_gap = 0.0;
};

EchoReport echo_report(const GateParams& g);

}  // namespace crflow

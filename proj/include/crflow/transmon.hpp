#pragma once

#include <Eigen/Dense>
#include <vector>

namespace crflow {

// Frequencies are ordinary frequencies in MHz.
struct TransmonParams {
  double omega_mhz = 0.0;
  double alpha_mhz = 0.0;
  double epsilon = 0.0;
  double omega_h_mhz = 0.0;
  int cutoff = 4;
};

struct EpsilonSolution {
  double epsilon;
  double omega_h_mhz;
};

struct TransmonSpectrum {
  std::vector<double> energies;  // E_n - E_0
  double alpha_mhz;
  double beta_mhz;
};

// Lowering parts of the charge (nu) and flux (mu) operators in the
// transmon eigenbasis. Only nearest-level elements and the 0-3 element
// survive to second order.
struct MatrixElements {
  double nu01, nu12, nu23, nu03;
  double mu01, mu12, mu23, mu03;
};

// Lowest four levels with charge dispersion removed, in the number-basis
// phase convention (see transmon.cpp for the two solution paths).
struct NumericalSpectrum {
  Eigen::VectorXd energies;  // E_n - E_0 in MHz
  Eigen::Matrix4d nu;        // nu(m,n) = i<m|y|n>, antisymmetric
  Eigen::Matrix4d mu;        // mu(m,n) = <m|x|n>, symmetric
};

EpsilonSolution epsilon_from_spectrum(double omega_mhz, double alpha_mhz);

TransmonParams make_transmon(double omega_mhz, double alpha_mhz, int cutoff = 4);

TransmonSpectrum perturbative_spectrum(double epsilon, double omega_h_mhz, int cutoff);

MatrixElements matrix_elements(double epsilon);
MatrixElements harmonic_elements();

NumericalSpectrum numerical_spectrum(double epsilon, int basis_size,
                                     double omega_h_mhz = 1.0);

// nu_{n,n+1} for n = 0..levels-2 from the diagonalized cosine Hamiltonian.
std::vector<double> numerical_ladder_elements(double epsilon, int levels);

// E_n = n omega + n(n-1)/2 alpha, plus beta on the third excited level.
std::vector<double> kerr_ladder(double omega_mhz, double alpha_mhz, int levels,
                                double beta_mhz = 0.0);

}  // namespace crflow

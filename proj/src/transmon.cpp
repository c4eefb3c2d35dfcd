#include "crflow/transmon.hpp"

#include <boost/math/special_functions/laguerre.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "crflow/errors.hpp"

namespace crflow {

EpsilonSolution epsilon_from_spectrum(double omega, double alpha) {
  if (!(omega > 0.0) || !(alpha < 0.0) || std::abs(alpha / omega) >= 0.25)
    throw std::invalid_argument("epsilon_from_spectrum: need omega > 0, alpha < 0, |alpha/omega| < 1/4");
  const double r = alpha / omega;
  const double a = 9.0 - 4.0 * r;
  const double b = 16.0 * (1.0 - r);
  const double c = 64.0 * r;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw NoPhysicalRoot("negative discriminant");
  const double s = std::sqrt(disc);
  // c < 0 so the roots have opposite signs; the stable form avoids cancellation.
  const double q = -0.5 * (b + s);
  const double roots[2] = {q / a, c / q};
  for (double e : roots) {
    if (e > 0.0 && e < 1.0) {
      const double wh = omega / (1.0 - e / 4.0 - e * e / 16.0);
      return {e, wh};
    }
  }
  throw NoPhysicalRoot("no root of the epsilon quadratic in (0, 1)");
}

TransmonParams make_transmon(double omega, double alpha, int cutoff) {
  auto sol = epsilon_from_spectrum(omega, alpha);
  return {omega, alpha, sol.epsilon, sol.omega_h_mhz, cutoff};
}

TransmonSpectrum perturbative_spectrum(double e, double wh, int cutoff) {
  if (cutoff > 4) throw UnsupportedCutoff("series spectrum is tabulated for at most 4 levels");
  if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
  const double e2 = e * e;
  const double ladder[4] = {0.0, 1.0 - e / 4.0 - e2 / 16.0,
                            2.0 - 3.0 * e / 4.0 - 17.0 * e2 / 64.0,
                            3.0 - 3.0 * e / 2.0 - 45.0 * e2 / 64.0};
  TransmonSpectrum s;
  for (int n = 0; n < cutoff; ++n) s.energies.push_back(wh * ladder[n]);
  s.alpha_mhz = wh * (-e / 4.0 - 9.0 * e2 / 64.0);
  s.beta_mhz = -6.0 / 64.0 * e2 * wh;
  return s;
}

MatrixElements matrix_elements(double e) {
  if (e < 0.0 || e >= 0.4) throw std::invalid_argument("matrix_elements: epsilon outside [0, 0.4)");
  const double e2 = e * e;
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);
  MatrixElements m;
  m.mu01 = 1.0 + e / 8.0 + 13.0 * e2 / 256.0;
  m.mu12 = r2 * (1.0 + e / 4.0 + 95.0 * e2 / 512.0);
  m.mu23 = r3 * (1.0 + 3.0 * e / 8.0 + 105.0 * e2 / 256.0);
  m.mu03 = -r6 * e / 48.0 - 3.0 * r6 * e2 / 128.0;
  m.nu01 = 1.0 - e / 8.0 - 11.0 * e2 / 256.0;
  m.nu12 = r2 * (1.0 - e / 4.0 - 73.0 * e2 / 512.0);
  m.nu23 = r3 * (1.0 - 3.0 * e / 8.0 - 79.0 * e2 / 256.0);
  m.nu03 = -r6 * e / 16.0 - 5.0 * r6 * e2 / 128.0;
  return m;
}

MatrixElements harmonic_elements() { return matrix_elements(0.0); }

namespace {

// Operators of the unitless problem (1/4)[y^2 + (2/eps)(1 - cos(sqrt(eps) x))],
// omega_h = 1, reported in the number-basis phase convention where
// nu(m,k) = i<m|y|k> and mu(m,k) = <m|x|k> are real, with nu(k, k+1) > 0.
struct Solved {
  Eigen::VectorXd energies;  // E_k - E_0
  Eigen::MatrixXd nu;        // first `levels` states
  Eigen::MatrixXd mu;
};

void fix_signs(Solved& s) {
  const int n = int(s.nu.rows());
  Eigen::VectorXd sgn = Eigen::VectorXd::Ones(n);
  for (int k = 1; k < n; ++k) sgn(k) = s.nu(k - 1, k) * sgn(k - 1) < 0.0 ? -1.0 : 1.0;
  s.nu = sgn.asDiagonal() * s.nu * sgn.asDiagonal();
  s.mu = sgn.asDiagonal() * s.mu * sgn.asDiagonal();
}

// Harmonic number basis with the cosine taken exactly:
// <m|e^{ikx}|n> = e^{-k^2/2} sqrt(n!/m!) (ik)^{m-n} L_n^{(m-n)}(k^2), m >= n.
Solved solve_number(double eps, int n, int levels) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) b(k - 1, k) = std::sqrt(double(k));
  const Eigen::MatrixXd xf = b + b.transpose(), pf = b - b.transpose();
  const Eigen::MatrixXd y2 = -(pf * pf).topLeftCorner(n, n);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int col = 0; col < n; ++col)
    for (int row = col; row < n; row += 2) {
      const int d = row - col;
      const double mag = std::exp(-0.5 * eps + 0.5 * (std::lgamma(col + 1.0) - std::lgamma(row + 1.0)) +
                                  0.5 * d * std::log(eps));
      const double sign = (d / 2) % 2 == 0 ? 1.0 : -1.0;  // i^d for even d
      c(row, col) = c(col, row) = sign * mag * boost::math::laguerre(unsigned(col), unsigned(d), eps);
    }
  const Eigen::MatrixXd h = 0.25 * (y2 + (2.0 / eps) * (Eigen::MatrixXd::Identity(n, n) - c));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXd v = es.eigenvectors().leftCols(levels);
  Solved out;
  out.energies = es.eigenvalues().head(levels).array() - es.eigenvalues()(0);
  out.nu = v.transpose() * pf.topLeftCorner(n, n) * v;
  out.mu = v.transpose() * xf.topLeftCorner(n, n) * v;
  fix_signs(out);
  return out;
}

// Charge basis at offset charge ng: H = 4 E_C (q - ng)^2 - E_J cos(phi) with
// E_C = eps / 4, E_J = 1 / (2 eps), y = 2 sqrt(eps) q, x = phi / sqrt(eps).
Solved solve_charge(double eps, int basis_size, int levels, double ng) {
  const int qmax = basis_size / 2;
  const int dim = 2 * qmax + 1;
  const double ec = eps / 4.0, ej = 1.0 / (2.0 * eps);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(dim, dim);  // phi = i * this
  for (int a = 0; a < dim; ++a) {
    const double n = a - qmax;
    h(a, a) = 4.0 * ec * (n - ng) * (n - ng);
    q(a, a) = n;
    if (a + 1 < dim) h(a, a + 1) = h(a + 1, a) = -ej / 2.0;
    for (int b = 0; b < dim; ++b) {
      const int k = a - b;  // <q+k|phi|q> = i (-1)^k / k on (-pi, pi)
      if (k != 0) phi(a, b) = (k % 2 == 0 ? 1.0 : -1.0) / k;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXd v = es.eigenvectors().leftCols(levels);
  const Eigen::MatrixXd y = 2.0 * std::sqrt(eps) * (v.transpose() * q * v);
  const Eigen::MatrixXd xi = (v.transpose() * phi * v) / std::sqrt(eps);
  // |k> -> i^{-k}|k> gives nu(m,k) = i^{m-k+1} y(m,k) and mu(m,k) = i^{m-k+1} xi(m,k)
  // for odd m - k; even m - k elements vanish at the band centre and are dropped.
  Solved out;
  out.energies = es.eigenvalues().head(levels).array() - es.eigenvalues()(0);
  out.nu = Eigen::MatrixXd::Zero(levels, levels);
  out.mu = Eigen::MatrixXd::Zero(levels, levels);
  for (int m = 0; m < levels; ++m)
    for (int k = 0; k < levels; ++k)
      if ((m - k) % 2 != 0) {
        const double ph = ((m - k + 1) % 4 + 4) % 4 == 0 ? 1.0 : -1.0;
        out.nu(m, k) = ph * y(m, k);
        out.mu(m, k) = ph * xi(m, k);
      }
  fix_signs(out);
  return out;
}

// The number basis spans the extended phase. Where its reach stays inside
// |phi| < pi it is used directly. Otherwise the neighbouring wells enter, so
// the periodic problem is solved instead and averaged over the offset charge:
// the band centre is the offset-free ladder (charge dispersion removed).
Solved solve(double eps, int basis_size, int levels) {
  if (eps * 4.0 * (basis_size + 10) < M_PI * M_PI) return solve_number(eps, basis_size, levels);
  constexpr int kOffsets = 16;
  Solved acc;
  for (int j = 0; j < kOffsets; ++j) {
    const Solved s = solve_charge(eps, basis_size, levels, (j + 0.5) / kOffsets);
    if (j == 0) {
      acc = s;
    } else {
      acc.energies += s.energies;
      acc.nu += s.nu;
      acc.mu += s.mu;
    }
  }
  acc.energies /= kOffsets;
  acc.nu /= kOffsets;
  acc.mu /= kOffsets;
  return acc;
}

}  // namespace

NumericalSpectrum numerical_spectrum(double eps, int basis_size, double wh) {
  if (basis_size < 20) throw std::invalid_argument("numerical_spectrum: basis_size must be >= 20");
  if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("numerical_spectrum: epsilon outside (0, 1)");

  const Solved a = solve(eps, basis_size, 4), b = solve(eps, basis_size + 10, 4);
  double worst = 0.0;
  for (int k = 1; k < 4; ++k)
    worst = std::max(worst, std::abs(a.energies(k) - b.energies(k)) / std::abs(b.energies(k)));
  for (int m = 0; m < 4; ++m)
    for (int k = m + 1; k < 4; ++k) {
      const double scale = std::max(1e-3, std::abs(b.mu(m, k)) + std::abs(b.nu(m, k)));
      worst = std::max(worst, std::abs(a.mu(m, k) - b.mu(m, k)) / scale);
      worst = std::max(worst, std::abs(a.nu(m, k) - b.nu(m, k)) / scale);
    }
  if (worst > 1e-10)
    throw NotConverged("numerical_spectrum: relative change " + std::to_string(worst) +
                       " between basis sizes " + std::to_string(basis_size) + " and " +
                       std::to_string(basis_size + 10));
  NumericalSpectrum r;
  r.energies = wh * a.energies;
  r.nu = a.nu;
  r.mu = a.mu;
  return r;
}

std::vector<double> numerical_ladder_elements(double eps, int levels) {
  const Solved s = solve(eps, std::max(60, 4 * levels + 40), levels);
  std::vector<double> out;
  for (int k = 0; k + 1 < levels; ++k) out.push_back(s.nu(k, k + 1));
  return out;
}

std::vector<double> kerr_ladder(double omega, double alpha, int levels, double beta) {
  std::vector<double> e(levels);
  for (int n = 0; n < levels; ++n) e[n] = n * omega + 0.5 * n * (n - 1) * alpha;
  if (levels > 3) e[3] += beta;
  return e;
}

}  // namespace crflow

#include "crflow/echo.hpp"

#include <cmath>

#include "crflow/errors.hpp"

namespace crflow {

namespace {

const cd I(0.0, 1.0);

Mat4 pauli2(const char* p) { return Mat4(pauli_matrix(p)); }

// exp(-i H t) for Hermitian H
Mat4 expm_herm(const Mat4& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(h);
  Eigen::Vector4cd ph;
  for (int k = 0; k < 4; ++k) ph(k) = std::exp(-I * es.eigenvalues()(k) * t);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Mat4 cr_hamiltonian(const CrRates& r, double sign) {
  return 0.5 * (sign * r.ix * pauli2("IX") + r.iz * pauli2("IZ") + r.zi * pauli2("ZI") +
                sign * r.zx * pauli2("ZX") + r.zz * pauli2("ZZ"));
}

}  // namespace

CrRates CrRates::from(const GateParams& g) {
  if (g.n_qubits != 2) throw std::invalid_argument("echo: two-qubit gate parameters required");
  return {g.rate("ix"), g.rate("iz"), g.rate("zi"), g.rate("zx"), g.rate("zz")};
}

double pulse_time(double omega_zx) {
  if (omega_zx == 0.0 || !std::isfinite(omega_zx)) throw ZeroZX("ZX rate vanishes; no pulse time exists");
  return M_PI / (4.0 * std::abs(omega_zx));
}

Mat4 echo_unitary_direct(const CrRates& r, double tau) {
  const Mat4 xi = pauli2("XI");
  // exp(+-i pi XI / 2) = +-i XI
  const Mat4 rx_plus = I * xi;
  const Mat4 rx_minus = -I * xi;
  return rx_plus * expm_herm(cr_hamiltonian(r, -1.0), tau) * rx_minus * expm_herm(cr_hamiltonian(r, 1.0), tau);
}

EchoResult echo_unitary(const CrRates& r, double tau) {
  EchoResult e;
  e.tau_p = tau;
  const double wp = std::hypot(r.zx + r.ix, r.iz + r.zz);
  const double wm = std::hypot(r.zx - r.ix, r.iz - r.zz);
  e.omega_plus = wp;
  e.omega_minus = wm;
  const double cp = std::cos(0.5 * wp * tau), cm = std::cos(0.5 * wm * tau);
  // sin(w tau / 2) / w, finite as w -> 0
  auto sw = [tau](double w) { return w == 0.0 ? 0.5 * tau : std::sin(0.5 * w * tau) / w; };
  const double fp = sw(wp), fm = sw(wm);
  e.u_ii = cp * cm + (r.ix * r.ix - r.iz * r.iz - r.zx * r.zx + r.zz * r.zz) * fp * fm;
  e.u_iy = 2.0 * I * (r.zx * r.zz - r.ix * r.iz) * fp * fm;
  e.u_iz = I * (r.zz - r.iz) * cp * fm - I * (r.zz + r.iz) * fp * cm;
  e.u_zx = I * (r.ix - r.zx) * cp * fm - I * (r.ix + r.zx) * fp * cm;
  e.u = e.u_ii * pauli2("II") + e.u_iy * pauli2("IY") + e.u_iz * pauli2("IZ") + e.u_zx * pauli2("ZX");

  const Mat4 direct = echo_unitary_direct(r, tau);
  const double diff = (direct - e.u).cwiseAbs().maxCoeff();
  if (diff > 1e-9) throw MismatchClosedForm("echo closed form differs from the exponential product by " + std::to_string(diff));
  echo_hamiltonian(e);
  return e;
}

EchoResult echo_unitary(const GateParams& g, double tau) { return echo_unitary(CrRates::from(g), tau); }

void echo_hamiltonian(EchoResult& e) {
  const double t = e.tau_p;
  const cd u = std::sqrt(e.u_iy * e.u_iy + e.u_iz * e.u_iz + e.u_zx * e.u_zx);
  const cd lp = std::log(e.u_ii + u), lm = std::log(e.u_ii - u);
  const double guard = M_PI - 1e-6;
  e.branch_ambiguous = std::abs(std::arg(e.u_ii + u)) > guard || std::abs(std::arg(e.u_ii - u)) > guard;
  const cd pre = I / (2.0 * t);
  e.w_ii = (pre * (lp + lm)).real();
  // ratio -> 2/u_ii as u -> 0
  const cd split = std::abs(u) < 1e-14 ? 2.0 / e.u_ii : (lp - lm) / u;
  e.w_iy = (pre * e.u_iy * split).real();
  e.w_iz = (pre * e.u_iz * split).real();
  e.w_zx = (pre * e.u_zx * split).real();
}

Mat4 ideal_zx(double sign) {
  const double s = sign < 0.0 ? -1.0 : 1.0;
  const double c = std::cos(M_PI / 4.0);
  return c * Mat4::Identity() - I * (s * c) * pauli2("ZX");
}

Fidelity gate_fidelity(const Mat4& u, const Mat4& ideal) {
  const double d = 4.0;
  const double f = ((u.adjoint() * u).trace().real() + std::norm((u.adjoint() * ideal).trace())) / (d * (d + 1.0));
  return {f, 1.0 - f};
}

MakhlinInvariants makhlin(const Mat4& u) {
  if (((u.adjoint() * u) - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-8)
    throw NonUnitaryInput("makhlin: input is not unitary");
  Mat4 q;
  q << 1, 0, 0, I, 0, I, 1, 0, 0, I, -1, 0, 1, 0, 0, -I;
  q /= std::sqrt(2.0);
  const Mat4 um = q.adjoint() * u * q;
  const Mat4 m = um.transpose() * um;
  const cd det = um.determinant();
  const cd tr = m.trace();
  const cd g12 = tr * tr / (16.0 * det);
  const cd g3 = (tr * tr - (m * m).trace()) / (4.0 * det);
  return {g12.real(), g12.imag(), g3.real()};
}

MakhlinInvariants makhlin_from_cartan(const Eigen::Vector3d& c) {
  const double c1 = std::cos(c(0)), c2 = std::cos(c(1)), c3 = std::cos(c(2));
  const double s1 = std::sin(c(0)), s2 = std::sin(c(1)), s3 = std::sin(c(2));
  MakhlinInvariants g;
  g.g_x = c1 * c1 * c2 * c2 * c3 * c3 - s1 * s1 * s2 * s2 * s3 * s3;
  // Negative for the exp(-i/2 ...) Cartan form; the opposite sign belongs to exp(+i/2 ...).
  g.g_y = -0.25 * std::sin(2 * c(0)) * std::sin(2 * c(1)) * std::sin(2 * c(2));
  g.g_z = 4 * c1 * c1 * c2 * c2 * c3 * c3 - 4 * s1 * s1 * s2 * s2 * s3 * s3 -
          std::cos(2 * c(0)) * std::cos(2 * c(1)) * std::cos(2 * c(2));
  return g;
}

Mat4 cartan_unitary(const Eigen::Vector3d& c) {
  const Mat4 h = c(0) * pauli2("XX") + c(1) * pauli2("YY") + c(2) * pauli2("ZZ");
  return expm_herm(h, 0.5);
}

double nonlocal_error(const MakhlinInvariants& g) { return (4.0 * g.g_x - g.g_z + 1.0) / 10.0; }

double entangling_power(const Eigen::Vector3d& c) {
  const double x = std::cos(2 * c(0)), y = std::cos(2 * c(1)), z = std::cos(2 * c(2));
  return (3.0 - x * y - y * z - z * x) / 18.0;
}

double entangling_power_gap(const MakhlinInvariants& g) { return 2.0 / 9.0 * g.g_x; }

EchoReport echo_report(const GateParams& params) {
  EchoReport r;
  const CrRates rates = CrRates::from(params);
  r.echo = echo_unitary(rates, pulse_time(rates.zx));
  r.fid = gate_fidelity(r.echo.u, ideal_zx(rates.zx));
  r.g = makhlin(r.echo.u);
  r.nonlocal_error = nonlocal_error(r.g);
  r.entangling_gap = entangling_power_gap(r.g);
  return r;
}

}  // namespace crflow

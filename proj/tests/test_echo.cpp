#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "crflow/echo.hpp"

using namespace crflow;

namespace {

const cd I(0.0, 1.0);

Mat4 p2(const char* s) { return Mat4(pauli_matrix(s)); }

// Scaling and squaring with a long Taylor series.
Mat4 expm(const Mat4& a) {
  int s = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.1) norm /= 2, ++s;
  const Mat4 x = a / std::pow(2.0, s);
  Mat4 term = Mat4::Identity(), sum = Mat4::Identity();
  for (int k = 1; k < 30; ++k) {
    term = (term * x / double(k)).eval();
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = (sum * sum).eval();
  return sum;
}

Mat4 hamiltonian(const CrRates& r, double sign) {
  return 0.5 * (sign * r.ix * p2("IX") + r.iz * p2("IZ") + r.zi * p2("ZI") + sign * r.zx * p2("ZX") +
                r.zz * p2("ZZ"));
}

// Control pi pulse, CR with negated drive, pi pulse back, CR.
Mat4 echo_oracle(const CrRates& r, double tau) {
  const Mat4 x = expm(-I * M_PI / 2.0 * p2("XI")), xm = expm(I * M_PI / 2.0 * p2("XI"));
  return xm * expm(-I * tau * hamiltonian(r, -1)) * x * expm(-I * tau * hamiltonian(r, 1));
}

Mat4 random_local(std::mt19937& rng) {
  std::normal_distribution<double> g;
  auto su2 = [&] {
    Eigen::Matrix2cd h;
    const double a = g(rng), b = g(rng), c = g(rng);
    h << c, cd(a, -b), cd(a, b), -c;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    Eigen::Vector2cd ph(std::exp(-I * es.eigenvalues()(0)), std::exp(-I * es.eigenvalues()(1)));
    return Eigen::Matrix2cd(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
  };
  const Eigen::Matrix2cd u = su2(), v = su2();
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = u(i, j) * v;
  return out;
}

DeviceSpec pair_spec(double delta, double om) {
  DeviceSpec s;
  s.qubits = {{"c", Role::control, 4914 + delta, -330, 4}, {"t", Role::target, 4914, -330, 4}};
  s.couplings = {{0, 1, 3.8}};
  s.drive = {om, M_PI, DriveMode::bare_target, 0};
  return s;
}

double max_diff(const Mat4& a, const Mat4& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("pulse time") {
  CHECK(pulse_time(1.0) == doctest::Approx(M_PI / 4));
  CHECK(pulse_time(-2.118) == doctest::Approx(M_PI / (4 * 2.118)));
  CHECK_THROWS_AS(pulse_time(0.0), ZeroZX);
}

TEST_CASE("closed form against the exponential product") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    const CrRates r{u(rng), u(rng) / 10, u(rng) * 3, u(rng), u(rng) / 10};
    const double tau = 0.05 + 0.2 * std::abs(u(rng));
    const EchoResult e = echo_unitary(r, tau);
    CHECK(max_diff(e.u, echo_oracle(r, tau)) < 1e-9);
    CHECK(max_diff(echo_unitary_direct(r, tau), echo_oracle(r, tau)) < 1e-9);
    CHECK(max_diff(e.u.adjoint() * e.u, Mat4::Identity()) < 1e-12);
    CHECK(std::norm(e.u_ii) + std::norm(e.u_iy) + std::norm(e.u_iz) + std::norm(e.u_zx) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Beating frequencies bound the product of the wanted and unwanted parts.
    CHECK(e.omega_plus * e.omega_minus >= std::abs(r.zx * r.zx - r.ix * r.ix) - 1e-12);
    // Rates rebuilt from the logarithms reproduce the unitary.
    if (!e.branch_ambiguous) {
      const Mat4 h = 0.5 * (e.w_ii * p2("II") + e.w_iy * p2("IY") + e.w_iz * p2("IZ") + e.w_zx * p2("ZX"));
      CHECK(max_diff(expm(-I * 2.0 * tau * h), e.u) < 1e-9);
    }
  }
}

TEST_CASE("pure ZX echo") {
  const CrRates r{0, 0, 0, -2.118, 0};
  const double tau = pulse_time(r.zx);
  const EchoResult e = echo_unitary(r, tau);
  CHECK(std::abs(e.u_ii - std::cos(r.zx * tau)) < 1e-14);
  CHECK(std::abs(e.u_zx - (-I * std::sin(r.zx * tau))) < 1e-14);
  CHECK(std::abs(e.u_iy) < 1e-15);
  CHECK(std::abs(e.u_iz) < 1e-15);
  CHECK(e.omega_plus == doctest::Approx(2.118));
  CHECK(e.omega_minus == doctest::Approx(2.118));
  CHECK(e.w_zx == doctest::Approx(r.zx).epsilon(1e-12));
  CHECK(std::abs(e.w_iy) < 1e-12);
  CHECK(std::abs(e.w_iz) < 1e-12);
  CHECK(gate_fidelity(e.u, ideal_zx(r.zx)).error < 1e-12);
  CHECK(gate_fidelity(e.u, ideal_zx(-r.zx)).error > 0.1);
}

TEST_CASE("fidelity") {
  const Mat4 ide = ideal_zx(1.0);
  CHECK(max_diff(ide, expm(-I * M_PI / 4.0 * p2("ZX"))) < 1e-14);
  CHECK(max_diff(ideal_zx(-1.0), expm(I * M_PI / 4.0 * p2("ZX"))) < 1e-14);
  CHECK(gate_fidelity(ide, ide).fidelity == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gate_fidelity(std::exp(I * 0.7) * ide, ide).error < 1e-14);
  const Fidelity f = gate_fidelity(ide * p2("IZ"), ide);
  CHECK(f.fidelity < 1.0);
  CHECK(f.fidelity == doctest::Approx(0.2));
  CHECK(f.error == doctest::Approx(1.0 - f.fidelity));
}

TEST_CASE("Makhlin invariants") {
  SUBCASE("reference gates") {
    const MakhlinInvariants c = makhlin(ideal_zx(1.0));
    CHECK(std::abs(c.g_x) < 1e-14);
    CHECK(std::abs(c.g_y) < 1e-14);
    CHECK(c.g_z == doctest::Approx(1.0));
    const MakhlinInvariants id = makhlin(Mat4::Identity());
    CHECK(id.g_x == doctest::Approx(1.0));
    CHECK(std::abs(id.g_y) < 1e-15);
    CHECK(id.g_z == doctest::Approx(3.0));
    CHECK(std::abs(nonlocal_error(c)) < 1e-14);
  }
  SUBCASE("local invariance") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const Mat4 base = cartan_unitary(Eigen::Vector3d(0.9, 0.4, -0.2));
    const MakhlinInvariants ref = makhlin(base);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const MakhlinInvariants g = makhlin(random_local(rng) * base * random_local(rng));
      worst = std::max({worst, std::abs(g.g_x - ref.g_x), std::abs(g.g_y - ref.g_y), std::abs(g.g_z - ref.g_z)});
    }
    CHECK(worst < 1e-9);
  }
  SUBCASE("Cartan form agrees with the matrix form") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int k = 0; k < 50; ++k) {
      const Eigen::Vector3d c(u(rng), u(rng), u(rng));
      const MakhlinInvariants a = makhlin(cartan_unitary(c)), b = makhlin_from_cartan(c);
      CHECK(a.g_x == doctest::Approx(b.g_x).epsilon(1e-10).scale(1.0));
      CHECK(a.g_y == doctest::Approx(b.g_y).epsilon(1e-10).scale(1.0));
      CHECK(a.g_z == doctest::Approx(b.g_z).epsilon(1e-10).scale(1.0));
    }
    CHECK(max_diff(cartan_unitary(Eigen::Vector3d(0.3, 0, 0)), expm(-I * 0.15 * p2("XX"))) < 1e-14);
  }
  SUBCASE("small distance from the CNOT class") {
    const double d = 0.01;
    const Mat4 u = expm(-I * (M_PI / 2 + d) / 2.0 * p2("XX"));
    const MakhlinInvariants g = makhlin(u);
    // Cartan point (pi/2 + d, 0, 0): g_x = sin^2 d, E_nl = sin^2 d / 5.
    CHECK(g.g_x == doctest::Approx(std::sin(d) * std::sin(d)).epsilon(1e-8));
    CHECK(nonlocal_error(g) == doctest::Approx(std::sin(d) * std::sin(d) / 5).epsilon(1e-8));
    CHECK(nonlocal_error(g) == doctest::Approx(2 * d * d / 10).epsilon(1e-4));
  }
  SUBCASE("non-unitary input") { CHECK_THROWS_AS(makhlin(2.0 * Mat4::Identity()), NonUnitaryInput); }
}

TEST_CASE("entangling power") {
  CHECK(entangling_power(Eigen::Vector3d(M_PI / 2, 0, 0)) == doctest::Approx(2.0 / 9.0));
  CHECK(entangling_power(Eigen::Vector3d(0, 0, 0)) == doctest::Approx(0.0));
  CHECK(entangling_power_gap(MakhlinInvariants{0, 0, 1}) == 0.0);
  for (double d : {0.003, 0.02, 0.1}) {
    const Eigen::Vector3d c(M_PI / 2 + d, 0, 0);
    const double gap = entangling_power(Eigen::Vector3d(M_PI / 2, 0, 0)) - entangling_power(c);
    CHECK(entangling_power_gap(makhlin_from_cartan(c)) == doctest::Approx(gap).epsilon(1e-10));
  }
}

TEST_CASE("engine-driven echo") {
  SUBCASE("region II middle at 50 MHz") {
    const EchoReport r = echo_report(gate_params(pair_spec(100, 50), 4));
    CHECK(r.fid.error >= 1e-4);
    CHECK(r.fid.error <= 1e-3);
    CHECK(r.nonlocal_error < r.fid.error);
    CHECK(r.echo.w_zx == doctest::Approx(gate_params(pair_spec(100, 50), 4).rate("zx")).epsilon(0.05));
  }
  SUBCASE("reference parameters leave small echoed single-qubit terms") {
    const GateParams g = gate_params(pair_spec(200, 50), 4);
    const EchoResult e = echo_unitary(g, pulse_time(g.rate("zx")));
    CHECK(max_diff(e.u, echo_oracle(CrRates::from(g), e.tau_p)) < 1e-9);
    CHECK(std::abs(e.w_iy) > 1e-3);
    CHECK(std::abs(e.w_iy) < 0.5);
    CHECK(std::abs(e.w_iz) < 0.5);
  }
  SUBCASE("non-local error bounds the total error across region II") {
    double floor = 1.0;
    for (double d = 40; d <= 130; d += 15)
      for (double om = 20; om <= 80; om += 20) {
        CAPTURE(d);
        CAPTURE(om);
        const EchoReport r = echo_report(gate_params(pair_spec(d, om), 4));
        CHECK(r.nonlocal_error <= r.fid.error);
        CHECK(r.nonlocal_error >= -1e-15);
        floor = std::min(floor, r.nonlocal_error);
      }
    CHECK(floor < 1e-7);
  }
}

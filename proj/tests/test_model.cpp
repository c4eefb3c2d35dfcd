#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "crflow/gates.hpp"
#include "crflow/model.hpp"

using namespace crflow;

namespace {

DeviceSpec pair_spec(double wc = 5114, double j = 3.8, double om = 50, DriveMode mode = DriveMode::bare_target) {
  DeviceSpec s;
  s.qubits = {{"c", Role::control, wc, -330, 4}, {"t", Role::target, 4914, -330, 4}};
  s.couplings = {{0, 1, j}};
  s.drive = {om, M_PI, mode, 0};
  return s;
}

DeviceSpec spectator_spec(bool on_control) {
  DeviceSpec s;
  s.qubits = {{"c", Role::control, 5114, -330, 3}, {"t", Role::target, 4914, -330, 3},
              {"s", Role::spectator, 5014, -320, 3}};
  s.couplings = {{0, 1, 3.8}, {2, on_control ? 0 : 1, 2.5}};
  s.drive = {30, M_PI, DriveMode::bare_target, 0};
  return s;
}

// Independent two-qubit exchange Hamiltonian: Kerr ladder energies and
// series charge elements, built element by element.
Eigen::MatrixXd oracle_hamiltonian(double wc, double wt, double ac, double at, double j, int n) {
  const auto ec = epsilon_from_spectrum(wc, ac), et = epsilon_from_spectrum(wt, at);
  const auto mc = matrix_elements(ec.epsilon), mt = matrix_elements(et.epsilon);
  const double nc[3] = {mc.nu01, mc.nu12, mc.nu23}, nt[3] = {mt.nu01, mt.nu12, mt.nu23};
  auto energy = [](double w, double a, int k) { return k * w + a * k * (k - 1) / 2.0; };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int c = 0; c < n; ++c)
    for (int t = 0; t < n; ++t) {
      h(c * n + t, c * n + t) = energy(wc, ac, c) + energy(wt, at, t);
      // |c+1, t> <c, t+1| moves one quantum from target to control
      if (c + 1 < n && t + 1 < n) {
        const double v = j * nc[c] * nt[t];
        h((c + 1) * n + t, c * n + t + 1) = v;
        h(c * n + t + 1, (c + 1) * n + t) = v;
      }
    }
  return h;
}

double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("device spec validation") {
  CHECK_NOTHROW(pair_spec().validate());
  auto bad = [](auto edit) {
    DeviceSpec s = pair_spec();
    edit(s);
    return s;
  };
  CHECK_THROWS_AS(bad([](DeviceSpec& s) { s.qubits.pop_back(); }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](DeviceSpec& s) { s.qubits[1].role = Role::control; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](DeviceSpec& s) { s.qubits[0].alpha_mhz = 10; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](DeviceSpec& s) { s.qubits[0].omega_mhz = -1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](DeviceSpec& s) { s.qubits[0].cutoff = 5; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](DeviceSpec& s) { s.couplings.clear(); }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](DeviceSpec& s) { s.couplings[0].b = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](DeviceSpec& s) { s.crosstalk = Crosstalk{1.5, 0, 0}; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](DeviceSpec& s) { s.drive.mode = DriveMode::explicit_frequency; }).validate(),
                  std::invalid_argument);

  DeviceSpec both = spectator_spec(true);
  both.couplings.push_back({2, 1, 1.0});
  CHECK_THROWS_AS(both.validate(), std::invalid_argument);
  CHECK(spectator_spec(true).topology() == Topology::control_spectator);
  CHECK(spectator_spec(false).topology() == Topology::target_spectator);
  CHECK(pair_spec().topology() == Topology::two_qubit);
  CHECK_THROWS_AS(build_two_qubit(spectator_spec(true)), std::invalid_argument);
  CHECK_THROWS_AS(build_three_qubit(pair_spec(), Topology::control_spectator), std::invalid_argument);
  CHECK_THROWS_AS(build_three_qubit(spectator_spec(true), Topology::target_spectator), std::invalid_argument);
}

TEST_CASE("two-qubit model structure") {
  const Model m = build_two_qubit(pair_spec());
  REQUIRE(m.dim() == 16);
  CHECK(m.control_factor == 0);
  CHECK(m.target_factor == 1);
  CHECK(m.hint.is_hermitian());

  SUBCASE("bare energies are the Kerr ladder sums") {
    for (int c = 0; c < 4; ++c)
      for (int t = 0; t < 4; ++t) {
        const double e = c * 5114 - 165.0 * c * (c - 1) + t * 4914 - 165.0 * t * (t - 1);
        CHECK(m.h0(m.index({c, t})) == doctest::Approx(e).epsilon(1e-14));
      }
  }

  SUBCASE("exchange element uses the series charge elements") {
    const auto mc = matrix_elements(epsilon_from_spectrum(5114, -330).epsilon);
    const auto mt = matrix_elements(epsilon_from_spectrum(4914, -330).epsilon);
    const cd v = m.exchange(m.index({1, 0}), m.index({0, 1}));
    CHECK(v.real() == doctest::Approx(3.8 * mc.nu01 * mt.nu01).epsilon(1e-12));
    CHECK(v.imag() == 0.0);
    CHECK(v.real() == doctest::Approx(3.58).epsilon(1e-2));
    const Eigen::MatrixXd oracle = oracle_hamiltonian(5114, 4914, -330, -330, 3.8, 4);
    Eigen::MatrixXd ex = oracle;
    ex.diagonal().setZero();
    CHECK(max_abs_diff(m.exchange, ex.cast<cd>()) < 1e-12);
  }

  SUBCASE("Kerr mode gives J exactly") {
    DeviceSpec s = pair_spec();
    s.options.kerr_mode = true;
    const Model k = build_two_qubit(s);
    CHECK(k.exchange(k.index({1, 0}), k.index({0, 1})).real() == doctest::Approx(3.8).epsilon(1e-15));
    CHECK(k.exchange(k.index({2, 0}), k.index({1, 1})).real() == doctest::Approx(3.8 * std::sqrt(2.0)).epsilon(1e-15));
  }

  SUBCASE("drive coefficient on the control lowering part") {
    const auto mc = matrix_elements(epsilon_from_spectrum(5114, -330).epsilon);
    const Mat h = m.hint.evaluate(0.0);
    // At t = 0, phi = pi: the lowering part carries +Omega/2 nu_01.
    const cd v = h(m.index({0, 0}), m.index({1, 0}));
    CHECK(v.real() == doctest::Approx(25.0 * mc.nu01).epsilon(1e-12));
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(m.omega_d == 4914.0);
  }

  SUBCASE("J = 0 and Omega = 0 leave no interaction") {
    DeviceSpec s = pair_spec(5114, 3.8, 0);
    const Model off = build_two_qubit(s);
    REQUIRE(off.hint.terms().size() == 1);
    CHECK(off.hint.terms()[0].freq == 0.0);
    s.couplings[0].j_mhz = 1e-300;
    CHECK(build_two_qubit(s).hint.max_abs() < 1e-290);
  }

  SUBCASE("off-RWA adds counter-rotating partners") {
    DeviceSpec s = pair_spec();
    s.options.rwa = false;
    const Model full = build_two_qubit(s);
    CHECK(full.hint.is_hermitian());
    CHECK(std::abs(full.exchange(full.index({1, 1}), full.index({0, 0}))) > 3.0);
    CHECK(std::abs(m.exchange(m.index({1, 1}), m.index({0, 0}))) == 0.0);
  }
}

TEST_CASE("three-qubit models") {
  SUBCASE("control spectator factor order and absent coupling") {
    const Model m = build_model(spectator_spec(true));
    REQUIRE(m.dim() == 27);
    CHECK(m.spectator_factor == 0);
    CHECK(m.control_factor == 1);
    CHECK(m.target_factor == 2);
    CHECK(m.hint.is_hermitian());
    CHECK(std::abs(m.exchange(m.index({1, 0, 0}), m.index({0, 1, 0}))) > 2.0);
    CHECK(std::abs(m.exchange(m.index({1, 0, 0}), m.index({0, 0, 1}))) == 0.0);
    CHECK(std::abs(m.exchange(m.index({0, 1, 0}), m.index({0, 0, 1}))) > 3.0);
  }
  SUBCASE("target spectator factor order and absent coupling") {
    const Model m = build_model(spectator_spec(false));
    CHECK(m.control_factor == 0);
    CHECK(m.target_factor == 1);
    CHECK(m.spectator_factor == 2);
    CHECK(std::abs(m.exchange(m.index({0, 1, 0}), m.index({0, 0, 1}))) > 2.0);
    CHECK(std::abs(m.exchange(m.index({1, 0, 0}), m.index({0, 0, 1}))) == 0.0);
  }
  SUBCASE("spectator is undriven") {
    DeviceSpec s = spectator_spec(false);
    s.couplings[1].j_mhz = 1e-300;
    const Model m = build_model(s);
    const Mat h = m.hint.evaluate(0.3);
    CHECK(std::abs(h(m.index({0, 0, 0}), m.index({0, 0, 1}))) < 1e-290);
  }
}

TEST_CASE("crosstalk") {
  SUBCASE("zero amplitudes equal the plain model") {
    DeviceSpec s = pair_spec();
    s.crosstalk = Crosstalk{0, 0, 0.4};
    const FourierOperator a = apply_crosstalk(s), b = build_two_qubit(pair_spec()).hint;
    for (double t : {0.0, 0.013, 0.27}) CHECK(max_abs_diff(a.evaluate(t), b.evaluate(t)) < 1e-12);
  }
  SUBCASE("full split drives only the target") {
    DeviceSpec s = pair_spec(5114, 1e-300);
    s.crosstalk = Crosstalk{1, 1, 0};
    const Model m = build_model(s);
    const Mat h = m.hint.evaluate(0.0);
    CHECK(std::abs(h(m.index({0, 0}), m.index({1, 0}))) == 0.0);
    CHECK(std::abs(h(m.index({0, 0}), m.index({0, 1}))) > 20.0);
  }
  SUBCASE("no crosstalk section is an error") { CHECK_THROWS_AS(apply_crosstalk(pair_spec()), std::invalid_argument); }
  SUBCASE("classical crosstalk IX at the reference parameters") {
    DeviceSpec s = pair_spec();
    s.crosstalk = Crosstalk{0.05, 0.05, M_PI / 36};
    CHECK(gate_params(s, 2).rate("ix") == doctest::Approx(3.603).epsilon(0.002 / 3.603));
  }
}

TEST_CASE("dressed basis") {
  SUBCASE("numeric agrees with an independent diagonalization") {
    const DressedBasis db = dressed_basis(pair_spec(), DressMethod::numeric);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle_hamiltonian(5114, 4914, -330, -330, 3.8, 4));
    Eigen::VectorXd sorted_db = db.energies;
    std::sort(sorted_db.data(), sorted_db.data() + sorted_db.size());
    CHECK((sorted_db - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-8);
    const Mat gram = db.states.adjoint() * db.states;
    CHECK(max_abs_diff(gram, Mat::Identity(16, 16)) < 1e-10);
  }

  SUBCASE("perturbative error shrinks faster than J^2") {
    auto err = [](double j) {
      const DeviceSpec s = pair_spec(5114, j);
      const auto p = dressed_basis(s, DressMethod::perturbative);
      const auto n = dressed_basis(s, DressMethod::numeric);
      return (p.energies - n.energies).cwiseAbs().maxCoeff();
    };
    const double e1 = err(8.0), e2 = err(4.0), e3 = err(2.0);
    CHECK(e1 / e2 >= 6.0);
    CHECK(e2 / e3 >= 6.0);
  }

  SUBCASE("static ZZ at the reference parameters") {
    const auto p = dressed_basis(pair_spec(), DressMethod::perturbative);
    CHECK(p.omega_zz == doctest::Approx(0.114).epsilon(0.002 / 0.114));
    const auto n = dressed_basis(pair_spec(), DressMethod::numeric);
    CHECK(n.omega_zz == doctest::Approx(p.omega_zz).epsilon(1e-2));
  }

  SUBCASE("resonant dressing raises a pole") {
    CHECK_THROWS_AS(dressed_basis(pair_spec(4914), DressMethod::perturbative), ResonancePole);
  }
}

TEST_CASE("drive frequency modes") {
  CHECK(drive_frequency(pair_spec(5114, 3.8, 50, DriveMode::bare_target)) == 4914.0);
  DeviceSpec ex = pair_spec();
  ex.drive.mode = DriveMode::explicit_frequency;
  ex.drive.frequency_mhz = 4914;
  CHECK(drive_frequency(ex) == 4914.0);
  CHECK(drive_frequency(pair_spec(5114, 1e-300, 50, DriveMode::dressed_target)) == doctest::Approx(4914.0));

  // Conditional target splittings from the independent diagonalization.
  const Eigen::MatrixXd h = oracle_hamiltonian(5114, 4914, -330, -330, 3.8, 4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  auto dressed = [&](int c, int t) {
    int best = 0;
    es.eigenvectors().row(c * 4 + t).cwiseAbs().maxCoeff(&best);
    return es.eigenvalues()(best);
  };
  const double mean = 0.5 * ((dressed(0, 1) - dressed(0, 0)) + (dressed(1, 1) - dressed(1, 0)));
  const double wd = drive_frequency(pair_spec(5114, 3.8, 50, DriveMode::dressed_target));
  CHECK(wd == doctest::Approx(mean).epsilon(1e-7));
  CHECK(wd - 4914 > 0.0);
  CHECK(wd - 4914 < 0.1);
}

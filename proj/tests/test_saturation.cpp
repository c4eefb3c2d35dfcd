#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "crflow/saturation.hpp"

using namespace crflow;

namespace {

DeviceSpec pair_spec(double delta, double om = 50, DriveMode mode = DriveMode::dressed_target, double j = 3.8) {
  DeviceSpec s;
  s.qubits = {{"c", Role::control, 4914 + delta, -330, 4}, {"t", Role::target, 4914, -330, 4}};
  s.couplings = {{0, 1, j}};
  s.drive = {om, M_PI, mode, 0};
  return s;
}

// Lowest-order ZX and IX at phi_d = pi against bare detunings.
std::pair<double, double> order2(double delta, double om, double j = 3.8) {
  const auto mc = matrix_elements(epsilon_from_spectrum(4914 + delta, -330).epsilon);
  const auto mt = matrix_elements(epsilon_from_spectrum(4914, -330).epsilon);
  const double Da = delta - 330;
  const double zx = 0.5 * (mt.nu01 * mc.nu12 * mc.nu12 / Da - 2 * mt.nu01 * mc.nu01 * mc.nu01 / delta) * j * om;
  const double ix = -mt.nu01 * mc.nu12 * mc.nu12 / (2 * Da) * j * om;
  return {zx, ix};
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double x = lo; x <= hi + 1e-9; x += step) g.push_back(x);
  return g;
}

}  // namespace

TEST_CASE("driven control eigensystem") {
  const DeviceSpec s = pair_spec(200, 0, DriveMode::bare_target);
  const ControlLadder lad = control_ladder(s);
  REQUIRE(lad.rotating_energies.size() == 8);
  CHECK(lad.omega_d == 4914.0);
  for (int n = 0; n < 8; ++n)
    CHECK(lad.rotating_energies(n) == doctest::Approx(n * 5114.0 - 165.0 * n * (n - 1) - n * 4914.0));

  SUBCASE("zero drive gives bare states") {
    const DrivenControl d = driven_control_eigensystem(s, 0.0);
    for (int n = 0; n < 8; ++n) {
      CHECK(d.energies(n) == doctest::Approx(lad.rotating_energies(n)));
      CHECK(std::abs(d.states(n, n)) == doctest::Approx(1.0));
    }
    CHECK(!d.label_crossing);
  }

  SUBCASE("weak drive follows the second-order Stark shift") {
    const double om = 5.0;
    const DrivenControl d = driven_control_eigensystem(s, om);
    const Eigen::VectorXd& e = lad.rotating_energies;
    for (int n : {0, 1, 2}) {
      double shift = 0.0;
      for (int k : {n - 1, n + 1}) {
        if (k < 0 || k >= 8) continue;
        const double v = 0.5 * om * lad.lower(std::min(n, k), std::max(n, k));
        shift += v * v / (e(n) - e(k));
      }
      CAPTURE(n);
      CHECK(d.energies(n) - e(n) == doctest::Approx(shift).epsilon(0.05));
    }
  }

  SUBCASE("internal cutoff converges at strong drive") {
    SaturationOptions six;
    six.levels = 6;
    const DrivenControl a = driven_control_eigensystem(s, 200.0, six), b = driven_control_eigensystem(s, 200.0);
    CHECK(a.energies(0) == doctest::Approx(b.energies(0)).epsilon(1e-6));
    CHECK(a.energies(1) == doctest::Approx(b.energies(1)).epsilon(1e-6));
  }

  SUBCASE("preconditions") {
    SaturationOptions few;
    few.levels = 3;
    CHECK_THROWS_AS(control_ladder(s, few), std::invalid_argument);
    CHECK_THROWS_AS(saturation_curve(s, {5.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(saturation_curve(s, {0.0, 2.0}), std::invalid_argument);
  }
}

TEST_CASE("interaction constants in the weak-drive limit") {
  SUBCASE("no coupling, no interaction") {
    const InteractionConstants k = interaction_constants(pair_spec(200, 30, DriveMode::bare_target, 1e-300), 30);
    CHECK(std::abs(k.a0) < 1e-290);
    CHECK(std::abs(k.a1) < 1e-290);
  }
  for (double d : {-100.0, 100.0, 200.0, 410.0}) {
    CAPTURE(d);
    const auto [zx1, ix1] = order2(d, 1.0);
    const InteractionConstants k1 = interaction_constants(pair_spec(d, 1, DriveMode::bare_target), 1.0);
    CHECK(k1.zx() == doctest::Approx(zx1).epsilon(0.01));
    CHECK(k1.ix() == doctest::Approx(ix1).epsilon(0.01));
    const auto [zx2, ix2] = order2(d, 2.0);
    const InteractionConstants k2 = interaction_constants(pair_spec(d, 2, DriveMode::bare_target), 2.0);
    CHECK(k2.zx() == doctest::Approx(zx2).epsilon(0.03));
  }
}

TEST_CASE("agreement with the perturbative engine at small drive") {
  for (double d : {-100.0, 100.0, 200.0})
    for (double om : {5.0, 10.0, 20.0}) {
      CAPTURE(d);
      CAPTURE(om);
      const DeviceSpec s = pair_spec(d, om);
      const InteractionConstants k = interaction_constants(s, om);
      const GateParams g = gate_params(s, 4);
      CHECK(k.zx() == doctest::Approx(g.rate("zx")).epsilon(0.05));
      CHECK(k.ix() == doctest::Approx(g.rate("ix")).epsilon(0.05));
    }
}

TEST_CASE("strong-drive curves") {
  const double J = 3.8;
  const std::vector<double> g = grid(1, 500, 1);
  std::map<double, SaturationCurve> curves;
  for (double d : {-100.0, 60.0, 100.0, 120.0, 200.0, 410.0, 580.0}) curves[d] = saturation_curve(pair_spec(d), g);
  auto at = [&](double d, double om) { return curves.at(d).zx[size_t(om) - 1]; };

  SUBCASE("region labels") {
    CHECK(curves.at(-100).region.name == "I");
    CHECK(curves.at(100).region.name == "II");
    CHECK(curves.at(200).region.name == "III");
    CHECK(curves.at(410).region.name == "IV");
    CHECK(curves.at(580).region.name == "V");
  }
  SUBCASE("region II saturates near 0.6 J") {
    CHECK(std::abs(at(100, 500)) / J == doctest::Approx(0.6).epsilon(0.2));
  }
  SUBCASE("region III is the fastest at 300 MHz") {
    const double best = std::abs(at(200, 300));
    for (double d : {-100.0, 100.0, 410.0, 580.0}) CHECK(best > std::abs(at(d, 300)));
  }
  SUBCASE("rates stay of order J") {
    for (const auto& [d, c] : curves)
      for (double z : c.zx) CHECK(std::abs(z) <= 1.5 * J);
  }
  SUBCASE("curves in one region form a band") {
    const double gap50 = std::abs(at(60, 50) - at(120, 50));
    const double gap500 = std::abs(at(60, 500) - at(120, 500));
    CHECK(gap500 < gap50);
  }
  SUBCASE("curve bookkeeping") {
    const SaturationCurve& c = curves.at(200);
    CHECK(c.omega.size() == g.size());
    CHECK(c.flagged.size() == g.size());
    for (size_t k = 0; k < g.size(); k += 50) {
      CHECK(c.zx[k] == doctest::Approx(c.a0[k] - c.a1[k]));
      CHECK(c.ix[k] == doctest::Approx(c.a0[k] + c.a1[k]));
    }
  }
}

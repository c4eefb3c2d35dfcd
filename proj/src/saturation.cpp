#include "crflow/saturation.hpp"

#include <cmath>
#include <stdexcept>

namespace crflow {

namespace {

struct Walker {
  ControlLadder ladder;
  SaturationOptions opt;
  double omega = 0.0;
  Eigen::MatrixXcd states;  // current labelled columns
  double worst = 1.0;

  Walker(const DeviceSpec& spec, const SaturationOptions& o) : ladder(control_ladder(spec, o)), opt(o) {
    states = Eigen::MatrixXcd::Identity(o.levels, o.levels);
  }

  Eigen::MatrixXcd hamiltonian(double w) const {
    const cd c = w * ladder.drive_per_mhz;
    Eigen::MatrixXcd h = ladder.lower.cast<cd>() * c;
    h += h.adjoint().eval();
    h.diagonal() += ladder.rotating_energies.cast<cd>();
    return h;
  }

  DrivenControl solve_at(double w) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian(w));
    DrivenControl out;
    out.omega_mhz = w;
    const int n = opt.levels;
    out.energies.resize(n);
    out.states.resize(n, n);
    std::vector<bool> used(n, false);
    out.worst_overlap = 1.0;
    for (int k = 0; k < n; ++k) {
      int best = -1;
      double ov = -1.0;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double o = std::abs(states.col(k).dot(es.eigenvectors().col(j)));
        if (o > ov) ov = o, best = j;
      }
      used[best] = true;
      Eigen::VectorXcd v = es.eigenvectors().col(best);
      // continuous gauge: real positive overlap with the previous column
      const cd ph = states.col(k).dot(v);
      if (std::abs(ph) > 0.0) v *= std::conj(ph) / std::abs(ph);
      out.states.col(k) = v;
      out.energies(k) = es.eigenvalues()(best);
      out.worst_overlap = std::min(out.worst_overlap, ov);
    }
    return out;
  }

  // Steps from the current amplitude up to w.
  DrivenControl advance(double w) {
    DrivenControl last;
    last.omega_mhz = omega;
    const int steps = std::max(1, int(std::ceil(std::abs(w - omega) / opt.step_mhz)));
    const double from = omega;
    for (int s = 1; s <= steps; ++s) {
      last = solve_at(from + (w - from) * s / steps);
      worst = std::min(worst, last.worst_overlap);
      states = last.states;
    }
    omega = w;
    last.worst_overlap = worst;
    last.label_crossing = worst < opt.min_overlap;
    return last;
  }
};

double target_nu01(const DeviceSpec& spec) {
  return qubit_levels(spec.qubits[spec.target()], spec.options).lower(0, 1);
}

InteractionConstants constants_from(const DeviceSpec& spec, const DrivenControl& dc, const ControlLadder& ladder,
                                    double w) {
  const int c = spec.control(), t = spec.target();
  const double j = spec.coupling(c, t);
  const double nu = target_nu01(spec);
  const Eigen::MatrixXcd low = ladder.lower.cast<cd>();
  InteractionConstants k;
  k.a0 = j * nu * dc.states.col(0).dot(low * dc.states.col(0)).real();
  k.a1 = j * nu * dc.states.col(1).dot(low * dc.states.col(1)).real();
  if (spec.crosstalk && spec.crosstalk->a_t != 0.0) {
    const cd ct = -0.5 * w * spec.crosstalk->a_t * std::exp(cd(0.0, spec.drive.phase_rad + spec.crosstalk->phi_t_rad));
    k.ix_direct = 2.0 * nu * ct.real();
  }
  k.label_crossing = dc.label_crossing;
  return k;
}

}  // namespace

ControlLadder control_ladder(const DeviceSpec& spec, const SaturationOptions& opt) {
  spec.validate();
  if (opt.levels < 4) throw std::invalid_argument("saturation: at least 4 control levels are needed");
  if (!(opt.step_mhz > 0.0)) throw std::invalid_argument("saturation: continuation step must be positive");
  const QubitSpec& qc = spec.qubits[spec.control()];
  QubitSpec wide = qc;
  wide.cutoff = 4;
  const QubitLevels lv = qubit_levels(wide, spec.options);

  ControlLadder out;
  out.omega_d = drive_frequency(spec);
  const auto e = kerr_ladder(qc.omega_mhz, qc.alpha_mhz, opt.levels, spec.options.include_beta ? lv.beta_mhz : 0.0);
  out.rotating_energies.resize(opt.levels);
  for (int n = 0; n < opt.levels; ++n) out.rotating_energies(n) = e[n] - n * out.omega_d;

  // The model's elements up to level 3, the diagonalized transmon above.
  out.lower = Eigen::MatrixXd::Zero(opt.levels, opt.levels);
  std::vector<double> high;
  if (!spec.options.kerr_mode) high = numerical_ladder_elements(lv.epsilon, opt.levels);
  for (int n = 0; n + 1 < opt.levels; ++n) {
    if (n < 3) out.lower(n, n + 1) = lv.lower(n, n + 1);
    else out.lower(n, n + 1) = spec.options.kerr_mode ? std::sqrt(n + 1.0) : high[n];
  }
  if (spec.options.include_nu03) out.lower(0, 3) = lv.lower(0, 3);

  const double ac = spec.crosstalk ? 1.0 - spec.crosstalk->a_c : 1.0;
  out.drive_per_mhz = -0.5 * ac * std::exp(cd(0.0, spec.drive.phase_rad));
  return out;
}

DrivenControl driven_control_eigensystem(const DeviceSpec& spec, double omega_mhz, const SaturationOptions& opt) {
  Walker w(spec, opt);
  return w.advance(omega_mhz);
}

InteractionConstants interaction_constants(const DeviceSpec& spec, double omega_mhz, const SaturationOptions& opt) {
  Walker w(spec, opt);
  const DrivenControl dc = w.advance(omega_mhz);
  return constants_from(spec, dc, w.ladder, omega_mhz);
}

SaturationCurve saturation_curve(const DeviceSpec& spec, const std::vector<double>& grid, const SaturationOptions& opt) {
  for (size_t k = 0; k < grid.size(); ++k)
    if (!(grid[k] > 0.0) || (k > 0 && !(grid[k] > grid[k - 1])))
      throw std::invalid_argument("saturation grid must be positive and ascending");
  const auto& qc = spec.qubits[spec.control()];
  const auto& qt = spec.qubits[spec.target()];

  SaturationCurve out;
  out.region = classify_region(qc.omega_mhz - qt.omega_mhz, qc.alpha_mhz, qt.alpha_mhz);
  Walker w(spec, opt);
  for (double om : grid) {
    const DrivenControl dc = w.advance(om);
    const InteractionConstants k = constants_from(spec, dc, w.ladder, om);
    out.omega.push_back(om);
    out.a0.push_back(k.a0);
    out.a1.push_back(k.a1);
    out.zx.push_back(k.zx());
    out.ix.push_back(k.ix());
    out.flagged.push_back(k.label_crossing);
  }
  return out;
}

}  // namespace crflow

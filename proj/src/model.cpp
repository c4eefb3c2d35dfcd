#include "crflow/model.hpp"

#include <cmath>
#include <stdexcept>

#include "crflow/errors.hpp"

namespace crflow {

namespace {

int find_role(const DeviceSpec& s, Role r) {
  int found = -1;
  for (size_t i = 0; i < s.qubits.size(); ++i)
    if (s.qubits[i].role == r) {
      if (found >= 0) return -2;
      found = int(i);
    }
  return found;
}

// kron of per-factor operators, first factor most significant
Mat kron_all(const std::vector<Mat>& ops) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& op : ops) {
    Mat next(out.rows() * op.rows(), out.cols() * op.cols());
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < out.cols(); ++j)
        next.block(i * op.rows(), j * op.cols(), op.rows(), op.cols()) = out(i, j) * op;
    out = std::move(next);
  }
  return out;
}

}  // namespace

int DeviceSpec::control() const { return find_role(*this, Role::control); }
int DeviceSpec::target() const { return find_role(*this, Role::target); }
int DeviceSpec::spectator() const { return find_role(*this, Role::spectator); }

double DeviceSpec::coupling(int a, int b) const {
  double j = 0.0;
  for (const auto& c : couplings)
    if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) j += c.j_mhz;
  return j;
}

Topology DeviceSpec::topology() const {
  const int s = spectator();
  if (s < 0) return Topology::two_qubit;
  if (coupling(s, control()) != 0.0) return Topology::control_spectator;
  return Topology::target_spectator;
}

void DeviceSpec::validate() const {
  auto fail = [](const std::string& w) { throw std::invalid_argument("DeviceSpec: " + w); };
  const int n = int(qubits.size());
  if (n < 2 || n > 3) fail("need 2 or 3 qubits");
  if (control() < 0) fail("need exactly one control qubit");
  if (target() < 0) fail("need exactly one target qubit");
  if (spectator() == -2) fail("at most one spectator");
  if (n == 3 && spectator() < 0) fail("third qubit must be a spectator");
  for (const auto& q : qubits) {
    if (!(q.omega_mhz > 0.0)) fail("qubit " + q.name + ": frequency must be positive");
    if (!(q.alpha_mhz < 0.0)) fail("qubit " + q.name + ": anharmonicity must be negative");
    if (q.cutoff < 2 || q.cutoff > 4) fail("qubit " + q.name + ": cutoff must be 2, 3 or 4");
  }
  if (couplings.empty()) fail("no couplings");
  for (const auto& c : couplings) {
    if (c.a < 0 || c.b < 0 || c.a >= n || c.b >= n || c.a == c.b) fail("coupling refers to a bad qubit index");
    if (!(c.j_mhz > 0.0)) fail("coupling strength must be positive");
  }
  if (coupling(control(), target()) == 0.0) fail("control and target must be coupled");
  if (spectator() >= 0) {
    const bool sc = coupling(spectator(), control()) != 0.0;
    const bool st = coupling(spectator(), target()) != 0.0;
    if (sc == st) fail("spectator must couple to exactly one of control or target");
  }
  if (crosstalk) {
    if (crosstalk->a_c < 0.0 || crosstalk->a_c > 1.0 || crosstalk->a_t < 0.0 || crosstalk->a_t > 1.0)
      fail("crosstalk amplitudes must lie in [0, 1]");
  }
  if (drive.mode == DriveMode::explicit_frequency && !(drive.frequency_mhz > 0.0))
    fail("explicit drive frequency must be positive");
}

QubitLevels qubit_levels(const QubitSpec& q, const ModelOptions& opt) {
  const auto sol = epsilon_from_spectrum(q.omega_mhz, q.alpha_mhz);
  QubitLevels lv;
  lv.epsilon = sol.epsilon;
  lv.beta_mhz = -6.0 / 64.0 * sol.epsilon * sol.epsilon * sol.omega_h_mhz;
  lv.energies = kerr_ladder(q.omega_mhz, q.alpha_mhz, q.cutoff, opt.include_beta ? lv.beta_mhz : 0.0);
  const MatrixElements me = opt.kerr_mode ? harmonic_elements() : matrix_elements(sol.epsilon);
  const double ladder[3] = {me.nu01, me.nu12, me.nu23};
  lv.lower = Eigen::MatrixXd::Zero(q.cutoff, q.cutoff);
  for (int n = 0; n + 1 < q.cutoff; ++n) lv.lower(n, n + 1) = ladder[n];
  if (opt.include_nu03 && q.cutoff == 4) lv.lower(0, 3) = me.nu03;
  return lv;
}

Mat Model::lowering(int factor) const {
  std::vector<Mat> ops;
  for (size_t k = 0; k < layout.dims.size(); ++k)
    ops.push_back(int(k) == factor ? Mat(levels[k].lower.cast<cd>()) : Mat::Identity(layout.dims[k], layout.dims[k]));
  return kron_all(ops);
}

Eigen::VectorXd Model::number(int factor) const {
  Eigen::VectorXd n(dim());
  for (int i = 0; i < dim(); ++i) n(i) = layout.levels(i)[factor];
  return n;
}

int Model::index(const std::vector<int>& lv) const {
  int idx = 0;
  for (size_t k = 0; k < layout.dims.size(); ++k) idx = idx * layout.dims[k] + lv[k];
  return idx;
}

namespace {

struct Pair {
  int fa, fb;
  double j;
};

std::vector<Pair> factor_pairs(const DeviceSpec& spec, const std::vector<int>& factor_qubit) {
  std::vector<Pair> out;
  const int nf = int(factor_qubit.size());
  for (int a = 0; a < nf; ++a)
    for (int b = a + 1; b < nf; ++b) {
      const double j = spec.coupling(factor_qubit[a], factor_qubit[b]);
      if (j != 0.0) out.push_back({a, b, j});
    }
  return out;
}

Mat build_exchange(const Model& m, const std::vector<Pair>& pairs, bool rwa) {
  Mat hj = Mat::Zero(m.dim(), m.dim());
  for (const auto& p : pairs) {
    const Mat la = m.lowering(p.fa), lb = m.lowering(p.fb);
    hj += p.j * (la * lb.adjoint() + la.adjoint() * lb);
    if (!rwa) hj -= p.j * (la * lb + la.adjoint() * lb.adjoint());
  }
  return hj;
}

// c Y^- e^{+i w t} + h.c.; off-RWA adds the counter-rotating partner.
void add_drive(FourierOperator& h, const Mat& low, cd c, double wd, bool rwa) {
  h.add(wd, c * low);
  h.add(-wd, std::conj(c) * low.adjoint());
  if (!rwa) {
    h.add(-wd, -std::conj(c) * low);
    h.add(wd, -c * low.adjoint());
  }
}

Model assemble(const DeviceSpec& spec, const std::vector<int>& factor_qubit) {
  Model m;
  m.factor_qubit = factor_qubit;
  for (size_t k = 0; k < factor_qubit.size(); ++k) {
    const auto& q = spec.qubits[factor_qubit[k]];
    m.layout.dims.push_back(q.cutoff);
    m.levels.push_back(qubit_levels(q, spec.options));
    if (factor_qubit[k] == spec.control()) m.control_factor = int(k);
    if (factor_qubit[k] == spec.target()) m.target_factor = int(k);
    if (factor_qubit[k] == spec.spectator()) m.spectator_factor = int(k);
  }
  m.layout.target = m.target_factor;
  const int d = m.dim();
  m.h0 = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) {
    const auto lv = m.layout.levels(i);
    for (size_t k = 0; k < lv.size(); ++k) m.h0(i) += m.levels[k].energies[lv[k]];
  }
  m.exchange = build_exchange(m, factor_pairs(spec, factor_qubit), spec.options.rwa);
  m.hint = FourierOperator(d);
  m.hint.add(0.0, m.exchange);
  return m;
}

double conditional_target_mean(const Model& m, const Eigen::VectorXd& e) {
  std::vector<int> lv(m.layout.dims.size(), 0);
  auto at = [&](int c, int t) {
    lv[m.control_factor] = c;
    lv[m.target_factor] = t;
    return e(m.index(lv));
  };
  return 0.5 * ((at(0, 1) - at(0, 0)) + (at(1, 1) - at(1, 0)));
}

void attach_drive(Model& m, const DeviceSpec& spec) {
  const auto& dr = spec.drive;
  switch (dr.mode) {
    case DriveMode::bare_target:
      m.omega_d = spec.qubits[spec.target()].omega_mhz;
      break;
    case DriveMode::explicit_frequency:
      m.omega_d = dr.frequency_mhz;
      break;
    case DriveMode::dressed_target: {
      const DressedBasis db = dressed_basis(m, DressMethod::perturbative);
      m.omega_d = conditional_target_mean(m, db.energies);
      break;
    }
  }
  const double omega = dr.amplitude_mhz;
  if (omega == 0.0) return;
  const double ac = spec.crosstalk ? spec.crosstalk->a_c : 0.0;
  const cd cc = -0.5 * omega * (1.0 - ac) * std::exp(cd(0.0, dr.phase_rad));
  if (cc != cd(0.0)) add_drive(m.hint, m.lowering(m.control_factor), cc, m.omega_d, spec.options.rwa);
  if (spec.crosstalk && spec.crosstalk->a_t != 0.0) {
    const cd ct = -0.5 * omega * spec.crosstalk->a_t * std::exp(cd(0.0, dr.phase_rad + spec.crosstalk->phi_t_rad));
    add_drive(m.hint, m.lowering(m.target_factor), ct, m.omega_d, spec.options.rwa);
  }
}

Model build_with_order(const DeviceSpec& spec, const std::vector<int>& order) {
  Model m = assemble(spec, order);
  attach_drive(m, spec);
  return m;
}

}  // namespace

Model build_two_qubit(const DeviceSpec& spec) {
  spec.validate();
  if (spec.spectator() >= 0) throw std::invalid_argument("build_two_qubit: spec has a spectator");
  return build_with_order(spec, {spec.control(), spec.target()});
}

Model build_three_qubit(const DeviceSpec& spec, Topology topology) {
  spec.validate();
  if (spec.spectator() < 0) throw std::invalid_argument("build_three_qubit: spec has no spectator");
  if (topology == Topology::two_qubit || topology != spec.topology())
    throw std::invalid_argument("build_three_qubit: topology does not match the coupling graph");
  if (topology == Topology::control_spectator)
    return build_with_order(spec, {spec.spectator(), spec.control(), spec.target()});
  return build_with_order(spec, {spec.control(), spec.target(), spec.spectator()});
}

Model build_model(const DeviceSpec& spec) {
  spec.validate();
  const Topology t = spec.topology();
  return t == Topology::two_qubit ? build_two_qubit(spec) : build_three_qubit(spec, t);
}

FourierOperator apply_crosstalk(const DeviceSpec& spec) {
  if (!spec.crosstalk) throw std::invalid_argument("apply_crosstalk: spec has no crosstalk section");
  return build_model(spec).hint;
}

DressedBasis dressed_basis(const Model& m, DressMethod method) {
  const int d = m.dim();
  const Mat& hj = m.exchange;
  DressedBasis out;
  out.energies = Eigen::VectorXd::Zero(d);
  out.states = Mat::Identity(d, d);
  const double pole = Tolerances{}.pole;
  if (method == DressMethod::perturbative) {
    for (int s = 0; s < d; ++s) {
      double e = m.h0(s) + hj(s, s).real();
      for (int k = 0; k < d; ++k) {
        if (k == s || hj(k, s) == cd(0.0)) continue;
        const double den = m.h0(s) - m.h0(k);
        if (std::abs(den) < pole)
          throw ResonancePole(den, {PoleEntry{k, s, 0.0, den, hj(k, s)}});
        e += std::norm(hj(k, s)) / den;
        out.states(k, s) = hj(k, s) / den;
      }
      out.energies(s) = e;
      out.states.col(s).normalize();
    }
  } else {
    Mat h = hj;
    h.diagonal() += m.h0.cast<cd>();
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    std::vector<int> taken(d, -1);
    for (int k = 0; k < d; ++k) {
      int best = 0;
      es.eigenvectors().col(k).cwiseAbs2().maxCoeff(&best);
      const double w = std::norm(es.eigenvectors()(best, k));
      if (w < 0.5 || taken[best] >= 0)
        throw LabelAmbiguity("dressed state " + std::to_string(k) + " has maximal bare overlap " +
                             std::to_string(w));
      taken[best] = k;
      Eigen::VectorXcd v = es.eigenvectors().col(k);
      v *= std::conj(v(best)) / std::abs(v(best));
      out.states.col(best) = v;
      out.energies(best) = es.eigenvalues()(k);
    }
  }
  std::vector<int> lv(m.layout.dims.size(), 0);
  auto at = [&](int c, int t) {
    lv[m.control_factor] = c;
    lv[m.target_factor] = t;
    return out.energies(m.index(lv));
  };
  out.omega_zz = 0.5 * (at(0, 0) - at(0, 1) - at(1, 0) + at(1, 1));
  out.omega_iz = 0.5 * (at(0, 0) - at(0, 1) + at(1, 0) - at(1, 1));
  out.omega_zi = 0.5 * (at(0, 0) + at(0, 1) - at(1, 0) - at(1, 1));
  return out;
}

DressedBasis dressed_basis(const DeviceSpec& spec, DressMethod method) {
  DeviceSpec undriven = spec;
  undriven.drive.amplitude_mhz = 0.0;
  undriven.drive.mode = DriveMode::bare_target;
  return dressed_basis(build_model(undriven), method);
}

double drive_frequency(const DeviceSpec& spec) { return build_model(spec).omega_d; }

}  // namespace crflow

#include "crflow/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace crflow {

namespace {

Mat single(char c) {
  Mat m = Mat::Zero(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument(std::string("unknown Pauli letter ") + c);
  }
  return m;
}

std::vector<std::string> all_strings(int n) {
  std::vector<std::string> out{""};
  for (int k = 0; k < n; ++k) {
    std::vector<std::string> next;
    for (const auto& s : out)
      for (char c : {'I', 'X', 'Y', 'Z'}) next.push_back(s + c);
    out = std::move(next);
  }
  return out;
}

bool weight_one_z(const std::string& p) {
  int z = 0;
  for (char c : p) {
    if (c == 'Z') ++z;
    else if (c != 'I') return false;
  }
  return z == 1;
}

}  // namespace

double GateParams::get(const std::string& p) const {
  auto it = rates.find(p);
  return it == rates.end() ? 0.0 : it->second;
}

double GateParams::rate(const std::string& ct) const {
  if (ct.size() != 2) throw std::invalid_argument("rate: expects two letters, control then target");
  std::string p;
  for (int r : factor_roles) p += r == 0 ? char(std::toupper(ct[0])) : r == 1 ? char(std::toupper(ct[1])) : 'I';
  return get(p);
}

Mat pauli_matrix(const std::string& p) {
  Mat out = Mat::Identity(1, 1);
  for (char c : p) {
    const Mat s = single(c);
    Mat next(out.rows() * 2, out.cols() * 2);
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * s;
    out = std::move(next);
  }
  return out;
}

std::map<std::string, double> pauli_decompose(const Mat& h, int n) {
  const int d = 1 << n;
  if (h.rows() != d || h.cols() != d) throw std::invalid_argument("pauli_decompose: matrix is not 2^n square");
  std::map<std::string, double> out;
  const double norm = double(d) / 2.0;
  for (const auto& p : all_strings(n)) out[p] = (pauli_matrix(p) * h).trace().real() / norm;
  return out;
}

Mat pauli_reconstruct(const std::map<std::string, double>& w, int n) {
  const int d = 1 << n;
  Mat h = Mat::Zero(d, d);
  for (const auto& [p, v] : w) h += 0.5 * v * pauli_matrix(p);
  return h;
}

Mat computational_block(const Mat& full, const BlockStructure& layout) {
  std::vector<int> idx;
  for (int s = 0; s < layout.size(); ++s) {
    bool comp = true;
    for (int l : layout.levels(s)) comp = comp && l <= 1;
    if (comp) idx.push_back(s);
  }
  const int n = int(idx.size());
  Mat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = full(idx[i], idx[j]);
  return out;
}

GateParams gate_params(const Model& m, const Model& undriven, int order, const SwptOptions& opt) {
  const int n = int(m.layout.dims.size());
  auto rates_of = [&](const Model& mm) {
    const Mat h = effective_static(mm, run_swpt(mm, order, opt), order);
    return pauli_decompose(computational_block(h, mm.layout), n);
  };
  const auto driven = rates_of(m);
  const auto base = rates_of(undriven);

  GateParams g;
  g.n_qubits = n;
  g.order = order;
  g.basis = Basis::energy;
  g.static_subtracted = true;
  for (int k = 0; k < n; ++k)
    g.factor_roles.push_back(k == m.control_factor ? 0 : k == m.target_factor ? 1 : 2);
  for (const auto& [p, v] : driven) {
    bool keep = p != std::string(n, 'I');
    for (int k = 0; k < n && keep; ++k)
      keep = k == m.target_factor ? true : (p[k] == 'I' || p[k] == 'Z');
    if (!keep) continue;
    g.rates[p] = weight_one_z(p) ? v - base.at(p) : v;
  }
  return g;
}

GateParams gate_params(const DeviceSpec& spec, int order, const SwptOptions& opt) {
  DeviceSpec off = spec;
  off.drive.amplitude_mhz = 0.0;
  GateParams g = gate_params(build_model(spec), build_model(off), order, opt);
  g.basis = spec.options.kerr_mode ? Basis::kerr : Basis::energy;
  return g;
}

double zx_fourth_energy(double D, double a, double c01, double c12, double c23, double t01) {
  const double c01_2 = c01 * c01, c12_2 = c12 * c12, c23_2 = c23 * c23;
  const double Da = D + a;
  return c01_2 * c01_2 * t01 / (2.0 * D * D * D) +
         (-c01_2 * c12_2 * t01 - 3.0 * c12_2 * c23_2 * t01) / (4.0 * D * D * Da) +
         (c01_2 * c12_2 * t01 - c12_2 * c23_2 * t01) / (4.0 * D * Da * Da) -
         c12_2 * c12_2 * t01 / (4.0 * Da * Da * Da) -
         c01_2 * c12_2 * t01 / (4.0 * D * D * (2.0 * D + a)) +
         9.0 * c12_2 * c23_2 * t01 / (4.0 * D * D * (2.0 * D + 3.0 * a));
}

double zx_fourth_kerr(double D, double a) {
  const double num = 3 * std::pow(a, 5) + 11 * std::pow(a, 4) * D + 15 * std::pow(a, 3) * D * D +
                     9 * a * a * D * D * D;
  const double den = 2 * D * D * D * std::pow(D + a, 3) * (2 * D + a) * (2 * D + 3 * a);
  return num / den;
}

GateParams closed_form_params(const DeviceSpec& spec, int order) {
  spec.validate();
  if (spec.spectator() >= 0) throw std::invalid_argument("closed_form_params: two-qubit specs only");
  if (order != 2 && order != 4) throw OrderUnsupported("closed forms exist for orders 2 and 4");
  const double phi = spec.drive.phase_rad;
  if (std::abs(std::sin(phi)) > 1e-12) throw std::invalid_argument("closed_form_params: drive phase must be 0 or pi");
  const double sign = -std::cos(phi);  // forms are written for phi_d = pi

  const auto& qc = spec.qubits[spec.control()];
  const auto& qt = spec.qubits[spec.target()];
  const QubitLevels lc = qubit_levels(qc, spec.options), lt = qubit_levels(qt, spec.options);
  const double c01 = lc.lower(0, 1), c12 = qc.cutoff > 2 ? lc.lower(1, 2) : 0.0;
  const double c23 = qc.cutoff > 3 ? lc.lower(2, 3) : 0.0;
  const double t01 = lt.lower(0, 1), t12 = qt.cutoff > 2 ? lt.lower(1, 2) : 0.0;
  const double D = qc.omega_mhz - qt.omega_mhz, ac = qc.alpha_mhz, at = qt.alpha_mhz;
  const double J = spec.coupling(spec.control(), spec.target());
  const double W = spec.drive.amplitude_mhz;

  auto den = [](double x) {
    if (std::abs(x) < Tolerances{}.pole) throw ResonancePole(x, {PoleEntry{0, 0, 0.0, x, 0.0}});
    return x;
  };
  const double Da = den(D + ac), D0 = den(D), Dt = den(D - at);
  double ac_scale = 1.0, ix_direct = 0.0, iy_direct = 0.0;
  if (spec.crosstalk) {
    ac_scale = 1.0 - spec.crosstalk->a_c;
    ix_direct = sign * t01 * spec.crosstalk->a_t * W * std::cos(spec.crosstalk->phi_t_rad);
    iy_direct = -sign * t01 * spec.crosstalk->a_t * W * std::sin(spec.crosstalk->phi_t_rad);
  }
  const double Wc = W * ac_scale;

  GateParams g;
  g.n_qubits = 2;
  g.order = order;
  g.basis = spec.options.kerr_mode ? Basis::kerr : Basis::energy;
  g.static_subtracted = true;
  g.factor_roles = {0, 1};
  g.rates["IX"] = sign * (-t01 * c12 * c12 / (2.0 * Da)) * J * Wc + ix_direct;
  g.rates["ZI"] = (c12 * c12 / (4.0 * Da) - c01 * c01 / (2.0 * D0)) * Wc * Wc;
  double zx = sign * 0.5 * (t01 * c12 * c12 / Da - 2.0 * t01 * c01 * c01 / D0) * J * Wc;
  g.rates["ZZ"] = 0.5 * (c01 * c01 * t12 * t12 / Dt - t01 * t01 * c12 * c12 / Da) * J * J;
  g.rates["IZ"] = 0.0;
  if (iy_direct != 0.0) g.rates["IY"] = iy_direct;
  if (order == 4) {
    den(2.0 * D + ac);
    den(2.0 * D + 3.0 * ac);
    const double k = spec.options.kerr_mode ? zx_fourth_kerr(D, ac) : zx_fourth_energy(D, ac, c01, c12, c23, t01);
    zx += sign * k * J * Wc * Wc * Wc;
  }
  g.rates["ZX"] = zx;
  return g;
}

RegionLabel classify_region(double d, double ac, double at) {
  if (!(ac < 0.0) || !(at < 0.0)) throw std::invalid_argument("classify_region: anharmonicities must be negative");
  const double b[6] = {at, 0.0, -ac / 2.0, -ac, -1.5 * ac, -2.0 * ac};
  static const char* names[5] = {"I", "II", "III", "IV", "V"};
  const double eps = 1e-9 * std::max(1.0, std::abs(ac));
  if (d < b[0] - eps || d > b[5] + eps) throw OutOfRange("detuning " + std::to_string(d) + " MHz lies outside every region");
  for (int k = 0; k < 6; ++k)
    if (std::abs(d - b[k]) <= eps) return {0, "pole", b[k], b[k]};
  for (int k = 0; k < 5; ++k)
    if (d > b[k] && d < b[k + 1]) return {k + 1, names[k], b[k], b[k + 1]};
  throw OutOfRange("unclassifiable detuning");
}

double kerr_vs_energy_zx_error(const DeviceSpec& spec) {
  DeviceSpec e = spec, k = spec;
  e.options.kerr_mode = false;
  k.options.kerr_mode = true;
  for (auto* s : {&e, &k}) {
    s->crosstalk.reset();
    s->drive.amplitude_mhz = 1.0;
    s->drive.phase_rad = M_PI;
    for (auto& c : s->couplings) c.j_mhz = 1.0;
  }
  const GateParams ge = closed_form_params(e), gk = closed_form_params(k);
  const double A = ge.get("ZX"), B = ge.get("ZZ"), C = ge.get("ZI");
  const double At = gk.get("ZX"), Bt = gk.get("ZZ"), Ct = gk.get("ZI");
  return 1.0 - (At / A) * std::sqrt((B * C) / (Bt * Ct));
}

}  // namespace crflow

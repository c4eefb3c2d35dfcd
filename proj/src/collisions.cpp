#include "crflow/collisions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace crflow {

namespace {

int tri(int n) { return n * (n - 1) / 2; }

std::vector<CollisionRule> make_rules() {
  std::vector<CollisionRule> r;
  auto add = [&](std::string label, int type, std::vector<int> a, std::vector<int> b, int pa, int pb,
                 std::string process) {
    r.push_back({std::move(label), type, std::move(a), std::move(b), pa, pb, std::move(process)});
  };
  // driven qubit against k drive photons
  add("I_A", 1, {0}, {2}, 2, 0, "2 photons drive 0->2");
  add("I_B", 1, {0}, {3}, 3, 0, "3 photons drive 0->3");
  add("I_C", 1, {1}, {2}, 1, 0, "1 photon drives 1->2");
  add("I_D", 1, {1}, {3}, 2, 0, "2 photons drive 1->3");
  add("I_E", 1, {2}, {3}, 1, 0, "1 photon drives 2->3");
  // neighbours m, n
  add("II_A", 2, {1, 0}, {0, 1}, 0, 0, "m 0->1 with n 0->1");
  add("II_B", 2, {1, 1}, {0, 2}, 0, 0, "m 0->1 with n 1->2");
  add("II_C", 2, {2, 0}, {0, 2}, 0, 0, "m 0->2 with n 0->2");
  add("II_D", 2, {2, 1}, {1, 2}, 0, 0, "m 1->2 with n 1->2");
  add("II_E", 2, {3, 0}, {2, 1}, 0, 0, "m 2->3 with n 0->1");
  // m - n - l chain, m and l next-nearest
  add("III_A", 3, {1, 0, 0}, {0, 0, 1}, 0, 0, "m 0->1 with l 0->1");
  add("III_B", 3, {1, 0, 1}, {0, 0, 2}, 0, 0, "m 0->1 with l 1->2");
  add("III_C", 3, {2, 0, 1}, {1, 0, 2}, 0, 0, "m 1->2 with l 1->2");
  add("III_D", 3, {1, 0, 1}, {0, 2, 0}, 0, 0, "m 0->1 plus l 0->1 with n 0->2");
  add("III_E", 3, {1, 1, 1}, {0, 3, 0}, 0, 0, "m, n, l 0->1 with n 0->3");
  return r;
}

const CollisionRule& rule_by_label(const std::string& label) {
  for (const auto& r : enumerate_rules())
    if (r.label == label) return r;
  throw std::invalid_argument("unknown collision rule " + label);
}

CollisionInstance instantiate(const CollisionRule& rule, const std::vector<int>& qubits, int nq) {
  CollisionInstance in;
  in.rule = &rule;
  in.qubits = qubits;
  in.quanta = 0;
  in.form.omega.assign(nq, 0);
  in.form.alpha.assign(nq, 0);
  in.form.beta.assign(nq, 0);
  for (int s = 0; s < rule.slots(); ++s) {
    const int q = qubits[s], na = rule.levels_a[s], nb = rule.levels_b[s];
    in.form.omega[q] += na - nb;
    in.form.alpha[q] += tri(na) - tri(nb);
    in.form.beta[q] += (na == 3) - (nb == 3);
    in.quanta += std::max(0, nb - na);
  }
  in.form.omega_d = rule.photons_a - rule.photons_b;
  in.neighbor_distance = rule.type == 3 ? 2 : 1;
  return in;
}

// Factor order used for rendering: [c, t], [s, c, t] or [c, t, s].
std::vector<int> display_order(const DeviceSpec& spec) {
  switch (spec.topology()) {
    case Topology::two_qubit: return {spec.control(), spec.target()};
    case Topology::control_spectator: return {spec.spectator(), spec.control(), spec.target()};
    case Topology::target_spectator: return {spec.control(), spec.target(), spec.spectator()};
  }
  return {};
}

std::string render_states(const CollisionInstance& in, const DeviceSpec& spec) {
  const auto order = display_order(spec);
  const CollisionRule& r = *in.rule;
  auto ket = [&](const std::vector<int>& lv, int photons) {
    std::string s = "|";
    for (int q : order) {
      int level = 0;
      for (int k = 0; k < r.slots(); ++k)
        if (in.qubits[k] == q) level = lv[k];
      s += char('0' + level);
    }
    s += ">|n";
    if (photons > 0) s += "+" + std::to_string(photons);
    return s + ">";
  };
  return ket(r.levels_a, r.photons_a) + " ~ " + ket(r.levels_b, r.photons_b);
}

double drive_or_bare(const DeviceSpec& spec) {
  try {
    return drive_frequency(spec);
  } catch (const ResonancePole&) {
    return spec.qubits[spec.target()].omega_mhz;
  }
}

using Slots = std::vector<Role>;
struct CuratedRow {
  const char* label;
  Slots roles;
};

const std::vector<CuratedRow>& curated_rows(Topology t) {
  using R = Role;
  static const std::vector<CuratedRow> two = {
      {"II_B", {R::control, R::target}},  {"II_A", {R::control, R::target}},
      {"II_C", {R::control, R::target}},  {"II_D", {R::control, R::target}},
      {"I_A", {R::control}},              {"II_B", {R::target, R::control}},
      {"I_C", {R::control}},              {"I_B", {R::control}},
      {"I_D", {R::control}},              {"II_E", {R::control, R::target}},
      {"I_E", {R::control}}};
  static const std::vector<CuratedRow> cs = {
      {"III_E", {R::spectator, R::control, R::target}}, {"II_E", {R::control, R::spectator}},
      {"III_B", {R::spectator, R::control, R::target}}, {"II_B", {R::spectator, R::control}},
      {"III_D", {R::spectator, R::control, R::target}}, {"III_A", {R::spectator, R::control, R::target}},
      {"II_A", {R::spectator, R::control}},             {"II_D", {R::spectator, R::control}},
      {"III_B", {R::target, R::control, R::spectator}}, {"II_B", {R::control, R::spectator}}};
  static const std::vector<CuratedRow> ts = {
      {"III_E", {R::control, R::target, R::spectator}}, {"III_D", {R::control, R::target, R::spectator}},
      {"II_B", {R::spectator, R::target}},              {"III_B", {R::spectator, R::target, R::control}},
      {"II_A", {R::spectator, R::target}},              {"II_C", {R::target, R::spectator}},
      {"III_A", {R::control, R::target, R::spectator}}, {"III_C", {R::control, R::target, R::spectator}},
      {"II_B", {R::target, R::spectator}},              {"III_B", {R::control, R::target, R::spectator}}};
  switch (t) {
    case Topology::two_qubit: return two;
    case Topology::control_spectator: return cs;
    case Topology::target_spectator: return ts;
  }
  return two;
}

int qubit_of(const DeviceSpec& spec, Role r) {
  return r == Role::control ? spec.control() : r == Role::target ? spec.target() : spec.spectator();
}

LinearForm entry_form(const Model& m, const PoleEntry& e, int nq) {
  LinearForm f;
  f.omega.assign(nq, 0);
  f.alpha.assign(nq, 0);
  f.beta.assign(nq, 0);
  const auto la = m.layout.levels(e.row), lb = m.layout.levels(e.col);
  for (size_t k = 0; k < la.size(); ++k) {
    const int q = m.factor_qubit[k];
    f.omega[q] += la[k] - lb[k];
    f.alpha[q] += tri(la[k]) - tri(lb[k]);
    f.beta[q] += (la[k] == 3) - (lb[k] == 3);
  }
  f.omega_d = m.omega_d > 0.0 ? int(std::lround(e.harmonic / m.omega_d)) : 0;
  return f;
}

CollisionReport make_report(const CollisionInstance& in, const DeviceSpec& spec, double wd, double guard) {
  CollisionReport r;
  r.instance = in;
  r.mismatch_mhz = in.form.evaluate(spec, wd, spec.options.include_beta);
  r.distance_mhz = std::abs(r.mismatch_mhz) / std::max(1, in.form.scale());
  r.within_guard = r.distance_mhz <= guard;
  r.states = render_states(in, spec);
  return r;
}

}  // namespace

const std::vector<CollisionRule>& enumerate_rules() {
  static const std::vector<CollisionRule> rules = make_rules();
  return rules;
}

double LinearForm::evaluate(const DeviceSpec& spec, double wd, bool with_beta) const {
  double v = omega_d * wd;
  for (size_t q = 0; q < omega.size(); ++q) {
    const auto& qs = spec.qubits[q];
    v += omega[q] * qs.omega_mhz + alpha[q] * qs.alpha_mhz;
    if (with_beta && beta[q] != 0) v += beta[q] * qubit_levels(qs, spec.options).beta_mhz;
  }
  return v;
}

int LinearForm::scale() const {
  int s = std::abs(omega_d);
  for (int w : omega) s = std::max(s, std::abs(w));
  return s;
}

bool LinearForm::proportional(const LinearForm& o, bool with_beta) const {
  std::vector<long> x, y;
  auto push = [](std::vector<long>& v, const LinearForm& f, bool b) {
    v.insert(v.end(), f.omega.begin(), f.omega.end());
    v.insert(v.end(), f.alpha.begin(), f.alpha.end());
    if (b) v.insert(v.end(), f.beta.begin(), f.beta.end());
    v.push_back(f.omega_d);
  };
  push(x, *this, with_beta);
  push(y, o, with_beta);
  if (x.size() != y.size()) return false;
  const long xy = std::inner_product(x.begin(), x.end(), y.begin(), 0L);
  const long xx = std::inner_product(x.begin(), x.end(), x.begin(), 0L);
  const long yy = std::inner_product(y.begin(), y.end(), y.begin(), 0L);
  return xx > 0 && yy > 0 && xy * xy == xx * yy;
}

std::string LinearForm::text(const DeviceSpec& spec) const {
  std::ostringstream os;
  bool first = true;
  auto term = [&](int c, const std::string& sym) {
    if (c == 0) return;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    if (std::abs(c) != 1) os << std::abs(c) << " ";
    os << sym;
    first = false;
  };
  for (size_t q = 0; q < omega.size(); ++q) term(omega[q], "w_" + spec.qubits[q].name);
  for (size_t q = 0; q < alpha.size(); ++q) term(alpha[q], "a_" + spec.qubits[q].name);
  if (spec.options.include_beta)
    for (size_t q = 0; q < beta.size(); ++q) term(beta[q], "b_" + spec.qubits[q].name);
  term(omega_d, "w_d");
  if (first) os << "0";
  os << " = 0";
  return os.str();
}

std::vector<CollisionInstance> instantiate_rules(const DeviceSpec& spec) {
  const int nq = int(spec.qubits.size());
  std::vector<CollisionInstance> out;
  auto push = [&](const CollisionRule& r, std::vector<int> qs) {
    CollisionInstance in = instantiate(r, qs, nq);
    for (const auto& o : out)
      if (o.rule == in.rule && o.form.proportional(in.form, true)) return;
    out.push_back(std::move(in));
  };
  for (const auto& r : enumerate_rules()) {
    if (r.type == 1) {
      push(r, {spec.control()});
    } else if (r.type == 2) {
      for (const auto& c : spec.couplings) {
        push(r, {c.a, c.b});
        push(r, {c.b, c.a});
      }
    } else {
      for (int n = 0; n < nq; ++n)
        for (int m = 0; m < nq; ++m)
          for (int l = 0; l < nq; ++l) {
            if (m == n || l == n || m == l) continue;
            if (spec.coupling(m, n) == 0.0 || spec.coupling(n, l) == 0.0 || spec.coupling(m, l) != 0.0) continue;
            push(r, {m, n, l});
          }
    }
  }
  return out;
}

std::vector<CollisionReport> scan_device(const DeviceSpec& spec, double guard_band_mhz) {
  spec.validate();
  const double wd = drive_or_bare(spec);
  std::vector<CollisionReport> out;
  for (const auto& in : instantiate_rules(spec)) out.push_back(make_report(in, spec, wd, guard_band_mhz));
  std::stable_sort(out.begin(), out.end(), [](const CollisionReport& a, const CollisionReport& b) {
    if (a.instance.neighbor_distance != b.instance.neighbor_distance)
      return a.instance.neighbor_distance < b.instance.neighbor_distance;
    if (a.instance.photons() != b.instance.photons()) return a.instance.photons() < b.instance.photons();
    if (a.instance.quanta != b.instance.quanta) return a.instance.quanta < b.instance.quanta;
    return a.distance_mhz < b.distance_mhz;
  });
  return out;
}

std::string PoleLabel::text() const { return report ? report->label() : "unclassified"; }

PoleLabel label_pole(const ResonancePole& pole, const DeviceSpec& spec, double tol_mhz) {
  PoleLabel out;
  out.frequency = pole.frequency;
  const auto reports = scan_device(spec, tol_mhz);
  if (!pole.entries.empty()) {
    std::optional<Model> m;
    try {
      m = build_model(spec);
    } catch (const ResonancePole&) {
      // the dressing itself failed; an undressed copy has the same layout
      DeviceSpec bare = spec;
      bare.drive.mode = DriveMode::explicit_frequency;
      bare.drive.frequency_mhz = spec.qubits[spec.target()].omega_mhz;
      m = build_model(bare);
    }
    if (m) {
      const int nq = int(spec.qubits.size());
      std::vector<LinearForm> forms;
      for (const auto& e : pole.entries) {
        if (e.row < 0 || e.col < 0 || e.row >= m->dim() || e.col >= m->dim() || e.row == e.col) continue;
        forms.push_back(entry_form(*m, e, nq));
      }
      // reports are in severity order, so the first match is the most severe
      for (const auto& r : reports)
        for (const auto& f : forms)
          if (r.instance.form.proportional(f, spec.options.include_beta)) {
            out.report = r;
            out.structural = true;
            return out;
          }
    }
  }
  const CollisionReport* best = nullptr;
  for (const auto& r : reports)
    if (r.within_guard && (!best || r.distance_mhz < best->distance_mhz)) best = &r;
  if (best) out.report = *best;
  return out;
}

std::vector<ResonanceRow> resonance_table(const DeviceSpec& spec, TableSelection sel) {
  spec.validate();
  const Topology topo = spec.topology();
  const int t = spec.target();
  const int swept = topo == Topology::two_qubit ? spec.control() : spec.spectator();
  const int nq = int(spec.qubits.size());
  const double wt = spec.qubits[t].omega_mhz;

  std::vector<CollisionInstance> ins;
  if (sel == TableSelection::curated) {
    for (const auto& row : curated_rows(topo)) {
      std::vector<int> qs;
      for (Role r : row.roles) qs.push_back(qubit_of(spec, r));
      ins.push_back(instantiate(rule_by_label(row.label), qs, nq));
    }
  } else {
    ins = instantiate_rules(spec);
  }

  std::vector<ResonanceRow> rows;
  for (const auto& in : ins) {
    // merge w_d into w_t, then solve the form for the swept frequency
    const int c = in.form.omega[swept] + (swept == t ? in.form.omega_d : 0);
    if (c == 0) continue;
    DeviceSpec s0 = spec;
    s0.qubits[swept].omega_mhz = 0.0;
    const double f0 = in.form.evaluate(s0, wt, spec.options.include_beta);
    ResonanceRow row;
    row.instance = in;
    row.detuning_mhz = -f0 / c - wt;
    row.states = render_states(in, spec);
    row.condition = in.form.text(spec);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResonanceRow& a, const ResonanceRow& b) { return a.detuning_mhz < b.detuning_mhz; });
  return rows;
}

std::string rule_catalogue_text() {
  std::ostringstream os;
  os << "label  type  a-levels  b-levels  photons(a,b)  process\n";
  for (const auto& r : enumerate_rules()) {
    auto lv = [](const std::vector<int>& v) {
      std::string s;
      for (int x : v) s += char('0' + x);
      return s;
    };
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-6s %-5d %-9s %-9s %d,%-11d %s\n", r.label.c_str(), r.type,
                  lv(r.levels_a).c_str(), lv(r.levels_b).c_str(), r.photons_a, r.photons_b, r.process.c_str());
    os << buf;
  }
  return os.str();
}

std::string render_table(const std::vector<ResonanceRow>& rows) {
  std::ostringstream os;
  os << "states,condition,detuning_mhz,type\n";
  for (const auto& r : rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", r.detuning_mhz);
    os << r.states << "," << r.condition << "," << buf << "," << r.instance.rule->label << "\n";
  }
  return os.str();
}

}  // namespace crflow

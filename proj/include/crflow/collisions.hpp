#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "crflow/errors.hpp"
#include "crflow/model.hpp"

namespace crflow {

// A rule is a pair of product states over its role slots that become
// degenerate, with drive photons on either side:
//   E(a) + photons_a w_d = E(b) + photons_b w_d.
// Slots: Type I {driven}; Type II {m, n} coupled; Type III {m, n, l} with
// n the middle qubit and m, l next-nearest neighbours.
struct CollisionRule {
  std::string label;  // "I_A" .. "III_E"
  int type = 1;       // 1, 2 or 3
  std::vector<int> levels_a;
  std::vector<int> levels_b;
  int photons_a = 0;
  int photons_b = 0;
  std::string process;  // short wording of the transition picture

  int slots() const { return int(levels_a.size()); }
};

const std::vector<CollisionRule>& enumerate_rules();

// Integer coefficients of the mismatch E(a) - E(b) + (p_a - p_b) w_d,
// indexed by DeviceSpec qubit. Level energies follow the Kerr ladder, so
// a qubit at level n contributes n w + n(n-1)/2 alpha (+ beta at n = 3).
struct LinearForm {
  std::vector<int> omega;
  std::vector<int> alpha;
  std::vector<int> beta;
  int omega_d = 0;

  double evaluate(const DeviceSpec& spec, double omega_d_mhz, bool with_beta) const;
  int scale() const;  // largest |frequency coefficient|
  bool proportional(const LinearForm& other, bool with_beta) const;
  std::string text(const DeviceSpec& spec) const;  // beta terms only when enabled
};

struct CollisionInstance {
  const CollisionRule* rule = nullptr;
  std::vector<int> qubits;  // spec indices filling the rule slots
  LinearForm form;
  int neighbor_distance = 1;  // 1 for Types I and II, 2 for Type III
  int quanta = 1;             // excitations moved, photons included
  int photons() const { return std::abs(rule->photons_a - rule->photons_b); }
};

std::vector<CollisionInstance> instantiate_rules(const DeviceSpec& spec);

struct CollisionReport {
  CollisionInstance instance;
  double mismatch_mhz = 0.0;  // signed value of the form
  double distance_mhz = 0.0;  // |mismatch| / form scale
  bool within_guard = false;
  std::string states;  // rendered in the topology's factor order

  std::string label() const { return instance.rule->label; }
};

// Every instance evaluated at the spec, ascending in (neighbor distance,
// photons, quanta, distance). The drive frequency is the spec's own; if dressing
// sits on a pole the bare target frequency is used.
std::vector<CollisionReport> scan_device(const DeviceSpec& spec, double guard_band_mhz);

struct PoleLabel {
  std::optional<CollisionReport> report;
  double frequency = 0.0;  // raw pole frequency from the engine
  bool structural = false; // matched by the form of a pole entry

  bool classified() const { return report.has_value(); }
  std::string text() const;  // rule label, or "unclassified"
};

// Matches each pole entry's mismatch form against the instances; failing
// that, takes the nearest instance with distance <= tol_mhz.
PoleLabel label_pole(const ResonancePole& pole, const DeviceSpec& spec, double tol_mhz = 1e-2);

// Resonance locations along a detuning axis, with w_d pinned to the bare
// target frequency. The swept qubit is the control for two-qubit specs and
// the spectator otherwise; detuning is w_swept - w_target.
struct ResonanceRow {
  CollisionInstance instance;
  double detuning_mhz = 0.0;
  std::string states;
  std::string condition;
};

enum class TableSelection { curated, all };

// curated keeps the rows observed in the order-4, four-level gate
// parameters (see README); all keeps every instance that moves with the
// swept frequency.
std::vector<ResonanceRow> resonance_table(const DeviceSpec& spec, TableSelection sel = TableSelection::curated);

std::string rule_catalogue_text();
std::string render_table(const std::vector<ResonanceRow>& rows);

}  // namespace crflow

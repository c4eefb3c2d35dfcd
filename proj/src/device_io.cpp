#include "crflow/device_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "crflow/errors.hpp"

namespace crflow {

using nlohmann::json;

namespace {

enum class Dim { frequency, angle, none };

Dim dim_of_key(const std::string& key) {
  auto ends = [&](const char* s) {
    const std::string t(s);
    return key.size() >= t.size() && key.compare(key.size() - t.size(), t.size(), t) == 0;
  };
  if (ends("_mhz")) return Dim::frequency;
  if (ends("_rad")) return Dim::angle;
  return Dim::none;
}

double number(const json& v, const std::string& path, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw SchemaError(path, "expected a number");
  std::istringstream is(v.get<std::string>());
  double x = 0.0;
  std::string unit;
  if (!(is >> x)) throw SchemaError(path, "cannot read a number from \"" + v.get<std::string>() + "\"");
  is >> unit;
  std::string rest;
  if (is >> rest) throw SchemaError(path, "trailing text after the unit");
  const Dim want = dim_of_key(key);
  static const std::map<std::string, std::pair<Dim, double>> units = {
      {"Hz", {Dim::frequency, 1e-6}}, {"kHz", {Dim::frequency, 1e-3}}, {"MHz", {Dim::frequency, 1.0}},
      {"GHz", {Dim::frequency, 1e3}}, {"rad", {Dim::angle, 1.0}},      {"deg", {Dim::angle, M_PI / 180.0}}};
  if (unit.empty()) return x;
  auto it = units.find(unit);
  if (it == units.end()) throw UnitError(path + ": unknown unit \"" + unit + "\"");
  if (it->second.first != want) throw UnitError(path + ": unit \"" + unit + "\" does not fit this field");
  return x * it->second.second;
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw SchemaError(path.empty() ? k : path + "." + k, "unknown field");
}

const json& need(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw SchemaError(path.empty() ? key : path + "." + key, "missing field");
  return obj.at(key);
}

double num_field(const json& obj, const std::string& path, const std::string& key) {
  return number(need(obj, path, key), path + "." + key, key);
}

bool bool_field(const json& obj, const std::string& path, const std::string& key, bool dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj.at(key).is_boolean()) throw SchemaError(path + "." + key, "expected true or false");
  return obj.at(key).get<bool>();
}

const char* role_name(Role r) {
  return r == Role::control ? "control" : r == Role::target ? "target" : "spectator";
}

const char* mode_name(DriveMode m) {
  return m == DriveMode::bare_target ? "bare_target"
         : m == DriveMode::dressed_target ? "dressed_target"
                                          : "explicit_frequency";
}

}  // namespace

DeviceSpec device_spec_from_json(const json& doc) {
  check_keys(doc, "", {"qubits", "couplings", "drive", "crosstalk", "options"});
  DeviceSpec s;

  const json& qs = need(doc, "", "qubits");
  if (!qs.is_array() || qs.empty()) throw SchemaError("qubits", "expected a non-empty array");
  std::map<std::string, int> by_name;
  for (size_t k = 0; k < qs.size(); ++k) {
    const std::string p = "qubits[" + std::to_string(k) + "]";
    const json& q = qs[k];
    check_keys(q, p, {"name", "role", "omega_mhz", "alpha_mhz", "cutoff"});
    QubitSpec qb;
    const json& name = need(q, p, "name");
    if (!name.is_string()) throw SchemaError(p + ".name", "expected a string");
    qb.name = name.get<std::string>();
    const json& role = need(q, p, "role");
    const std::string r = role.is_string() ? role.get<std::string>() : "";
    if (r == "control") qb.role = Role::control;
    else if (r == "target") qb.role = Role::target;
    else if (r == "spectator") qb.role = Role::spectator;
    else throw SchemaError(p + ".role", "expected control, target or spectator");
    qb.omega_mhz = num_field(q, p, "omega_mhz");
    qb.alpha_mhz = num_field(q, p, "alpha_mhz");
    if (q.contains("cutoff")) {
      if (!q.at("cutoff").is_number_integer()) throw SchemaError(p + ".cutoff", "expected an integer");
      qb.cutoff = q.at("cutoff").get<int>();
    }
    if (!by_name.emplace(qb.name, int(k)).second) throw SchemaError(p + ".name", "duplicate qubit name");
    s.qubits.push_back(qb);
  }

  const json& cs = need(doc, "", "couplings");
  if (!cs.is_array() || cs.empty()) throw SchemaError("couplings", "expected a non-empty array");
  for (size_t k = 0; k < cs.size(); ++k) {
    const std::string p = "couplings[" + std::to_string(k) + "]";
    check_keys(cs[k], p, {"a", "b", "j_mhz"});
    auto end = [&](const char* key) {
      const json& v = need(cs[k], p, key);
      if (!v.is_string() || !by_name.count(v.get<std::string>()))
        throw SchemaError(p + "." + key, "expected the name of a listed qubit");
      return by_name.at(v.get<std::string>());
    };
    s.couplings.push_back({end("a"), end("b"), num_field(cs[k], p, "j_mhz")});
  }

  const json& d = need(doc, "", "drive");
  check_keys(d, "drive", {"amplitude_mhz", "phase_rad", "mode", "frequency_mhz"});
  s.drive.amplitude_mhz = num_field(d, "drive", "amplitude_mhz");
  if (d.contains("phase_rad")) s.drive.phase_rad = num_field(d, "drive", "phase_rad");
  if (d.contains("mode")) {
    const std::string m = d.at("mode").is_string() ? d.at("mode").get<std::string>() : "";
    if (m == "bare_target") s.drive.mode = DriveMode::bare_target;
    else if (m == "dressed_target") s.drive.mode = DriveMode::dressed_target;
    else if (m == "explicit_frequency") s.drive.mode = DriveMode::explicit_frequency;
    else throw SchemaError("drive.mode", "expected bare_target, dressed_target or explicit_frequency");
  }
  if (d.contains("frequency_mhz")) s.drive.frequency_mhz = num_field(d, "drive", "frequency_mhz");

  if (doc.contains("crosstalk")) {
    const json& x = doc.at("crosstalk");
    check_keys(x, "crosstalk", {"a_c", "a_t", "phi_t_rad"});
    Crosstalk c;
    if (x.contains("a_c")) c.a_c = number(x.at("a_c"), "crosstalk.a_c", "a_c");
    if (x.contains("a_t")) c.a_t = number(x.at("a_t"), "crosstalk.a_t", "a_t");
    if (x.contains("phi_t_rad")) c.phi_t_rad = num_field(x, "crosstalk", "phi_t_rad");
    s.crosstalk = c;
  }

  if (doc.contains("options")) {
    const json& o = doc.at("options");
    check_keys(o, "options", {"rwa", "kerr_mode", "include_beta", "include_nu03"});
    s.options.rwa = bool_field(o, "options", "rwa", true);
    s.options.kerr_mode = bool_field(o, "options", "kerr_mode", false);
    s.options.include_beta = bool_field(o, "options", "include_beta", false);
    s.options.include_nu03 = bool_field(o, "options", "include_nu03", false);
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError("spec", e.what());
  }
  return s;
}

DeviceSpec parse_device_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path, e.what());
  }
  return device_spec_from_json(doc);
}

json device_spec_to_json(const DeviceSpec& s) {
  json doc;
  doc["qubits"] = json::array();
  for (const auto& q : s.qubits)
    doc["qubits"].push_back({{"name", q.name}, {"role", role_name(q.role)}, {"omega_mhz", q.omega_mhz},
                             {"alpha_mhz", q.alpha_mhz}, {"cutoff", q.cutoff}});
  doc["couplings"] = json::array();
  for (const auto& c : s.couplings)
    doc["couplings"].push_back({{"a", s.qubits[c.a].name}, {"b", s.qubits[c.b].name}, {"j_mhz", c.j_mhz}});
  doc["drive"] = {{"amplitude_mhz", s.drive.amplitude_mhz}, {"phase_rad", s.drive.phase_rad},
                  {"mode", mode_name(s.drive.mode)}};
  if (s.drive.mode == DriveMode::explicit_frequency) doc["drive"]["frequency_mhz"] = s.drive.frequency_mhz;
  if (s.crosstalk)
    doc["crosstalk"] = {{"a_c", s.crosstalk->a_c}, {"a_t", s.crosstalk->a_t}, {"phi_t_rad", s.crosstalk->phi_t_rad}};
  doc["options"] = {{"rwa", s.options.rwa},
                    {"kerr_mode", s.options.kerr_mode},
                    {"include_beta", s.options.include_beta},
                    {"include_nu03", s.options.include_nu03}};
  return doc;
}

std::uint64_t spec_hash(const DeviceSpec& spec) {
  const std::string text = device_spec_to_json(spec).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace crflow

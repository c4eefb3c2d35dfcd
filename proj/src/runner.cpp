#include "crflow/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include "crflow/collisions.hpp"
#include "crflow/device_io.hpp"
#include "crflow/echo.hpp"
#include "crflow/errors.hpp"
#include "crflow/saturation.hpp"
#include "crflow/swpt.hpp"

namespace crflow {

using nlohmann::json;

namespace {

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  int masked = 0;
  int failed = 0;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_text(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

void write_csv(const Table& t, std::ostream& os) {
  for (size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
  os << "\n";
  for (const auto& row : t.rows) {
    for (size_t k = 0; k < row.size(); ++k) {
      if (k) os << ",";
      if (const double* d = std::get_if<double>(&row[k])) os << fmt(*d);
      else if (const std::string* s = std::get_if<std::string>(&row[k])) os << csv_text(*s);
      else os << "nan";
    }
    os << "\n";
  }
}

void write_json(const Table& t, const json& meta, std::ostream& os) {
  json doc;
  doc["meta"] = meta;
  doc["columns"] = t.columns;
  doc["rows"] = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (size_t k = 0; k < row.size(); ++k) {
      if (const double* d = std::get_if<double>(&row[k])) r[t.columns[k]] = std::isnan(*d) ? json(nullptr) : json(*d);
      else if (const std::string* s = std::get_if<std::string>(&row[k])) r[t.columns[k]] = *s;
      else r[t.columns[k]] = nullptr;
    }
    doc["rows"].push_back(std::move(r));
  }
  os << doc.dump(2) << "\n";
}

int worker_count(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("CRFLOW_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class F>
void parallel_for(int n, int threads, F f) {
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) f(i);
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < std::min(threads, n); ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

std::string region_of(const DeviceSpec& s) {
  const auto& qc = s.qubits[s.control()];
  const auto& qt = s.qubits[s.target()];
  try {
    return classify_region(qc.omega_mhz - qt.omega_mhz, qc.alpha_mhz, qt.alpha_mhz).name;
  } catch (const OutOfRange&) {
    return "out";
  }
}

// Rate strings kept by gate_params, in map order.
std::vector<std::string> rate_columns(const DeviceSpec& s) {
  const int n = int(s.qubits.size());
  const Model m = [&] {
    DeviceSpec bare = s;
    bare.drive.mode = DriveMode::bare_target;
    return build_model(bare);
  }();
  std::vector<std::string> out{""};
  for (int k = 0; k < n; ++k) {
    std::vector<std::string> next;
    const char* letters = k == m.target_factor ? "IXYZ" : "IZ";
    for (const auto& p : out)
      for (const char* c = letters; *c; ++c) next.push_back(p + *c);
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::remove(out.begin(), out.end(), std::string(n, 'I')), out.end());
  return out;
}

double zz_factor(const std::string& p, const std::string& convention) {
  if (convention != "full") return 1.0;
  int z = 0;
  for (char c : p) {
    if (c == 'Z') ++z;
    else if (c != 'I') return 1.0;
  }
  return z >= 2 ? 2.0 : 1.0;
}

struct Context {
  RunConfig cfg;
  DeviceSpec spec;
  SwptOptions swpt;
};

DeviceSpec apply_options(DeviceSpec s, const RunConfig& cfg) {
  if (cfg.include_beta) s.options.include_beta = true;
  if (cfg.no_rwa) s.options.rwa = false;
  if (cfg.kerr_mode || cfg.basis == Basis::kerr) s.options.kerr_mode = true;
  return s;
}

// Cartesian grid over the axes, first axis slowest.
std::vector<std::vector<double>> grid_points(const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<double>> pts{{}};
  for (const auto& a : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& p : pts)
      for (double v : a.values()) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

using PointFn = std::function<std::vector<double>(const DeviceSpec&)>;

Table sweep_table(const Context& ctx, const std::vector<std::string>& value_columns, const PointFn& fn) {
  Table t;
  for (const auto& a : ctx.cfg.sweep) t.columns.push_back(a.variable);
  t.columns.insert(t.columns.end(), value_columns.begin(), value_columns.end());
  t.columns.push_back("region");
  t.columns.push_back("status");

  const auto pts = grid_points(ctx.cfg.sweep);
  t.rows.resize(pts.size());
  std::vector<int> kind(pts.size(), 0);  // 0 ok, 1 masked, 2 failed
  parallel_for(int(pts.size()), worker_count(ctx.cfg), [&](int i) {
    std::vector<Cell> row;
    for (double v : pts[i]) row.emplace_back(v);
    std::vector<double> vals(value_columns.size(), std::nan(""));
    std::string region = "", status = "ok";
    try {
      DeviceSpec s = ctx.spec;
      for (size_t k = 0; k < pts[i].size(); ++k) set_variable(s, ctx.cfg.sweep[k].variable, pts[i][k]);
      s.validate();
      region = region_of(s);
      std::string hit;  // most severe rule inside the guard band
      for (const auto& r : scan_device(s, ctx.cfg.guard_band_mhz))
        if (r.within_guard) {
          hit = r.label();
          break;
        }
      if (!hit.empty()) {
        status = "pole:" + hit;
        kind[i] = 1;
      } else {
        try {
          vals = fn(s);
        } catch (const ResonancePole& p) {
          status = "pole:" + label_pole(p, s).text();
          kind[i] = 1;
        }
      }
    } catch (const std::exception& e) {
      status = std::string("error:") + e.what();
      kind[i] = 2;
    }
    for (double v : vals) row.emplace_back(v);
    row.emplace_back(region);
    row.emplace_back(status);
    t.rows[i] = std::move(row);
  });
  for (int k : kind) t.masked += k == 1, t.failed += k == 2;
  return t;
}

Table params_point_table(const Context& ctx) {
  DeviceSpec e = ctx.spec, k = ctx.spec;
  e.options.kerr_mode = false;
  k.options.kerr_mode = true;
  const GateParams ge = gate_params(e, ctx.cfg.order, ctx.swpt);
  const GateParams gk = gate_params(k, ctx.cfg.order, ctx.swpt);
  Table t;
  t.columns = {"pauli", "energy_mhz", "kerr_mhz"};
  for (const auto& p : rate_columns(ctx.spec)) {
    const double f = zz_factor(p, ctx.cfg.zz_convention);
    t.rows.push_back({p, f * ge.get(p), f * gk.get(p)});
  }
  return t;
}

Table rates_table(const Context& ctx) {
  const auto cols = rate_columns(ctx.spec);
  return sweep_table(ctx, cols, [&](const DeviceSpec& s) {
    const GateParams g = gate_params(s, ctx.cfg.order, ctx.swpt);
    std::vector<double> v;
    for (const auto& p : cols) v.push_back(zz_factor(p, ctx.cfg.zz_convention) * g.get(p));
    return v;
  });
}

Table echo_table(const Context& ctx) {
  if (ctx.spec.qubits.size() != 2) throw std::invalid_argument("echo-error needs a two-qubit spec");
  const std::vector<std::string> cols = {"tau_p",   "error",  "nonlocal_error", "entangling_gap", "w_ii", "w_iy",
                                         "w_iz",    "w_zx",   "zx",             "ix",             "zz",   "zi",
                                         "iz",      "branch_ambiguous"};
  return sweep_table(ctx, cols, [&](const DeviceSpec& s) {
    const GateParams g = gate_params(s, ctx.cfg.order, ctx.swpt);
    const EchoReport r = echo_report(g);
    return std::vector<double>{r.echo.tau_p, r.fid.error, r.nonlocal_error, r.entangling_gap, r.echo.w_ii,
                               r.echo.w_iy,  r.echo.w_iz, r.echo.w_zx,      g.rate("zx"),     g.rate("ix"),
                               g.rate("zz"), g.rate("zi"), g.rate("iz"),    r.echo.branch_ambiguous ? 1.0 : 0.0};
  });
}

Table collisions_table(const Context& ctx) {
  Table t;
  t.columns = {"states", "condition", "detuning_mhz", "type"};
  for (const auto& r : resonance_table(ctx.spec, TableSelection::curated))
    t.rows.push_back({r.states, r.condition, r.detuning_mhz, r.instance.rule->label});
  return t;
}

Table saturation_table(const Context& ctx) {
  SweepAxis axis{"amplitude_mhz", 1.0, 500.0, 1.0};
  if (!ctx.cfg.sweep.empty()) {
    if (ctx.cfg.sweep.size() != 1 || ctx.cfg.sweep[0].variable != "amplitude_mhz")
      throw std::invalid_argument("saturation sweeps amplitude_mhz only");
    axis = ctx.cfg.sweep[0];
  }
  const SaturationCurve c = saturation_curve(ctx.spec, axis.values());
  Table t;
  t.columns = {"amplitude_mhz", "zx", "ix", "a0", "a1", "region", "status"};
  for (size_t k = 0; k < c.omega.size(); ++k)
    t.rows.push_back({c.omega[k], c.zx[k], c.ix[k], c.a0[k], c.a1[k], c.region.name,
                      std::string(c.flagged[k] ? "label_crossing" : "ok")});
  return t;
}

Table verify_table(const Context& ctx) {
  Table t;
  t.columns = {"check", "status", "value", "reference"};
  auto add = [&](const std::string& name, bool ok, double v, double ref) {
    t.rows.push_back({name, std::string(ok ? "PASS" : "FAIL"), v, ref});
    if (!ok) ++t.failed;
  };
  const DeviceSpec& s = ctx.spec;
  if (s.qubits.size() == 2 && std::abs(std::sin(s.drive.phase_rad)) < 1e-12) {
    DeviceSpec b = s;
    b.drive.mode = DriveMode::bare_target;
    b.crosstalk.reset();
    const GateParams eng = gate_params(b, 2, ctx.swpt), cf = closed_form_params(b, 2);
    for (const char* p : {"IX", "ZI", "ZX", "ZZ"}) {
      const double rel = std::abs(eng.get(p) - cf.get(p)) / std::max(1e-300, std::abs(cf.get(p)));
      add(std::string("closed_form_") + p, rel < 1e-10, eng.get(p), cf.get(p));
    }
  }
  {
    DeviceSpec m = s;
    m.drive.amplitude_mhz = -s.drive.amplitude_mhz;
    const GateParams a = gate_params(s, ctx.cfg.order, ctx.swpt), b = gate_params(m, ctx.cfg.order, ctx.swpt);
    for (const char* p : {"zx", "ix"}) add(std::string("odd_") + p, std::abs(a.rate(p) + b.rate(p)) < 1e-12, b.rate(p), -a.rate(p));
    for (const char* p : {"zz", "zi", "iz"})
      add(std::string("even_") + p, std::abs(a.rate(p) - b.rate(p)) < 1e-12, b.rate(p), a.rate(p));
  }
  if (s.qubits.size() == 2) {
    // the precession fit assumes a weak drive; cap the amplitude at 20 MHz
    DeviceSpec w = s;
    if (std::abs(w.drive.amplitude_mhz) > 20.0) w.drive.amplitude_mhz = std::copysign(20.0, w.drive.amplitude_mhz);
    const GateParams g4 = gate_params(w, 4, ctx.swpt);
    const OracleRates o = time_domain_oracle(w);
    add("oracle_zx", std::abs(o.omega_zx - g4.rate("zx")) <= 0.05 * std::abs(g4.rate("zx")), o.omega_zx, g4.rate("zx"));
    add("oracle_ix", std::abs(o.omega_ix - g4.rate("ix")) <= 0.05 * std::abs(g4.rate("ix")), o.omega_ix, g4.rate("ix"));
  }
  return t;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  if (max < min) throw std::invalid_argument("sweep max lies below min");
  const long n = long(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> v(n);
  for (long k = 0; k < n; ++k) v[k] = min + double(k) * step;
  return v;
}

SweepAxis parse_sweep_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4) throw std::invalid_argument("sweep axis must read VAR:MIN:MAX:STEP, got " + text);
  SweepAxis a;
  a.variable = parts[0];
  try {
    a.min = std::stod(parts[1]);
    a.max = std::stod(parts[2]);
    a.step = std::stod(parts[3]);
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep axis bounds are not numbers: " + text);
  }
  if (!(a.step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  if (a.max < a.min) throw std::invalid_argument("sweep max lies below min");
  return a;
}

void set_variable(DeviceSpec& s, const std::string& var, double v) {
  auto by_role = [&](int idx) -> QubitSpec& {
    if (idx < 0) throw std::invalid_argument("sweep variable " + var + " needs a qubit the spec does not have");
    return s.qubits[idx];
  };
  if (var == "delta_ct") by_role(s.control()).omega_mhz = s.qubits[s.target()].omega_mhz + v;
  else if (var == "delta_st") by_role(s.spectator()).omega_mhz = s.qubits[s.target()].omega_mhz + v;
  else if (var == "amplitude_mhz") s.drive.amplitude_mhz = v;
  else if (var == "phase_rad") s.drive.phase_rad = v;
  else if (var == "j_mhz") {
    for (auto& c : s.couplings) c.j_mhz = v;
  } else if (var.rfind("omega_", 0) == 0 || var.rfind("alpha_", 0) == 0) {
    const std::string name = var.substr(6);
    for (auto& q : s.qubits)
      if (q.name == name) {
        (var[0] == 'o' ? q.omega_mhz : q.alpha_mhz) = v;
        return;
      }
    throw std::invalid_argument("sweep variable " + var + " names no qubit");
  } else {
    throw std::invalid_argument("unknown sweep variable " + var);
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.order < 1 || cfg.order > 4) throw OrderUnsupported("order must lie in 1..4");
    if (cfg.format != "csv" && cfg.format != "json") throw std::invalid_argument("format must be csv or json");
    if (cfg.zz_convention != "half" && cfg.zz_convention != "full")
      throw std::invalid_argument("zz convention must be half or full");
    Context ctx{cfg, apply_options(parse_device_spec(cfg.spec_path), cfg), {}};
    if (cfg.pole_tol_mhz) ctx.swpt.tol.pole = *cfg.pole_tol_mhz;

    Table t;
    const std::string& c = cfg.command;
    if (c == "params") t = cfg.sweep.empty() ? params_point_table(ctx) : rates_table(ctx);
    else if (c == "sweep") {
      if (cfg.sweep.empty()) throw std::invalid_argument("sweep needs at least one --sweep axis");
      t = rates_table(ctx);
    } else if (c == "spectator") {
      if (ctx.spec.qubits.size() != 3) throw std::invalid_argument("spectator needs a three-qubit spec");
      t = rates_table(ctx);
    } else if (c == "echo-error") t = echo_table(ctx);
    else if (c == "collisions") t = collisions_table(ctx);
    else if (c == "saturation") t = saturation_table(ctx);
    else if (c == "verify") t = verify_table(ctx);
    else throw std::invalid_argument("unknown command " + c);

    std::ofstream file;
    if (!cfg.out_path.empty()) {
      file.open(cfg.out_path);
      if (!file) throw std::runtime_error("cannot write " + cfg.out_path);
    }
    std::ostream& os = cfg.out_path.empty() ? out : file;
    if (cfg.format == "csv") {
      write_csv(t, os);
    } else {
      char hash[24];
      std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(spec_hash(ctx.spec)));
      json meta = {{"tool", "crflow"},  {"version", kToolVersion},
                   {"command", c},      {"spec_hash", hash},
                   {"order", cfg.order}, {"basis", ctx.spec.options.kerr_mode ? "kerr" : "energy"},
                   {"zz_convention", cfg.zz_convention}, {"guard_band_mhz", cfg.guard_band_mhz}};
      write_json(t, meta, os);
    }
    if (t.failed > 0) return 1;
    if (!t.rows.empty() && 2 * t.masked > int(t.rows.size())) return 2;
    return 0;
  } catch (const std::exception& e) {
    err << "crflow: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace crflow

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "crflow/swpt.hpp"

namespace crflow {

namespace {

using State = std::vector<cd>;

struct RotatingHamiltonian {
  Eigen::VectorXd diag;             // h0 - F
  std::vector<FourierTerm> terms;   // frame-free, each static or oscillating

  void operator()(const State& psi, State& dpsi, double t) const {
    const int d = int(diag.size());
    Eigen::Map<const Eigen::VectorXcd> v(psi.data(), d);
    Eigen::Map<Eigen::VectorXcd> out(dpsi.data(), d);
    out = (diag.cast<cd>().array() * v.array()).matrix();
    for (const auto& term : terms) {
      if (term.freq == 0.0)
        out.noalias() += term.m * v;
      else
        out.noalias() += std::exp(cd(0.0, term.freq * t)) * (term.m * v);
    }
    out *= cd(0.0, -1.0);
  }
};

// Target Bloch vector from the reduced density matrix on levels {0, 1}.
Eigen::Vector3d target_bloch(const Model& m, const State& psi) {
  cd r00 = 0.0, r11 = 0.0, r01 = 0.0;
  const int d = m.dim();
  for (int a = 0; a < d; ++a) {
    auto la = m.layout.levels(a);
    if (la[m.target_factor] != 0) continue;
    auto lb = la;
    lb[m.target_factor] = 1;
    const int b = m.index(lb);
    r00 += std::norm(psi[a]);
    r11 += std::norm(psi[b]);
    r01 += psi[a] * std::conj(psi[b]);
  }
  Eigen::Vector3d r(2.0 * r01.real(), -2.0 * r01.imag(), (r00 - r11).real());
  const double n = r.norm();
  return n > 0.0 ? Eigen::Vector3d(r / n) : r;
}

Eigen::Matrix3d cross_matrix(const Eigen::Vector3d& s) {
  Eigen::Matrix3d c;
  c << 0, -s.z(), s.y(), s.z(), 0, -s.x(), -s.y(), s.x(), 0;
  return c;
}

// Fit r(t) = c + w x S(t), S = int_0^t r; returns w and the rms residual.
std::pair<Eigen::Vector3d, double> fit_precession(const std::vector<double>& t,
                                                  const std::vector<Eigen::Vector3d>& r) {
  const int n = int(t.size());
  std::vector<Eigen::Vector3d> s(n, Eigen::Vector3d::Zero());
  for (int k = 1; k < n; ++k) s[k] = s[k - 1] + 0.5 * (t[k] - t[k - 1]) * (r[k] + r[k - 1]);
  Eigen::MatrixXd a(3 * n, 6);
  Eigen::VectorXd y(3 * n);
  for (int k = 0; k < n; ++k) {
    a.block<3, 3>(3 * k, 0) = Eigen::Matrix3d::Identity();
    a.block<3, 3>(3 * k, 3) = -cross_matrix(s[k]);
    y.segment<3>(3 * k) = r[k];
  }
  Eigen::VectorXd x = a.colPivHouseholderQr().solve(y);
  const double rms = std::sqrt((a * x - y).squaredNorm() / double(3 * n));
  return {x.tail<3>(), rms};
}

}  // namespace

OracleRates time_domain_oracle(const DeviceSpec& spec, const OracleOptions& opt) {
  namespace ode = boost::numeric::odeint;
  const Model m = build_model(spec);
  const int d = m.dim();

  Eigen::VectorXd frame = Eigen::VectorXd::Zero(d);
  for (size_t k = 0; k < m.layout.dims.size(); ++k) frame += m.omega_d * m.number(int(k));
  RotatingHamiltonian h;
  h.diag = m.h0 - frame;
  h.terms = m.hint.reframed(frame).expanded().terms();

  std::vector<double> times(opt.samples + 1);
  for (int k = 0; k <= opt.samples; ++k) times[k] = opt.duration * k / opt.samples;

  OracleRates out;
  for (int c = 0; c < 2; ++c) {
    std::vector<int> lv(m.layout.dims.size(), 0);
    lv[m.control_factor] = c;
    State psi(d, cd(0.0));
    psi[m.index(lv)] = 1.0;
    std::vector<Eigen::Vector3d> bloch;
    bloch.reserve(times.size());
    auto stepper = ode::make_dense_output(opt.rtol * 1e-2, opt.rtol, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, std::ref(h), psi, times.begin(), times.end(), 1e-4,
                         [&](const State& x, double) { bloch.push_back(target_bloch(m, x)); });
    auto [w, rms] = fit_precession(times, bloch);
    if (rms > opt.max_residual)
      throw FitFailed("precession fit residual " + std::to_string(rms) + " exceeds " +
                      std::to_string(opt.max_residual));
    out.residual = std::max(out.residual, rms);
    (c == 0 ? out.w0 : out.w1) = w;
  }
  out.omega_zx = 0.5 * (out.w0.x() - out.w1.x());
  out.omega_ix = 0.5 * (out.w0.x() + out.w1.x());
  return out;
}

}  // namespace crflow

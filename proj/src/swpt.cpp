#include "crflow/swpt.hpp"

#include <deque>
#include <limits>
#include <stdexcept>

namespace crflow {

FourierOperator interaction_frame(const Eigen::VectorXd& h0, const FourierOperator& hint) {
  if (h0.size() != hint.dim()) throw std::invalid_argument("interaction_frame: dimension mismatch");
  if (hint.frame().size() && !hint.frame().isZero(0.0))
    throw std::invalid_argument("interaction_frame: Hint must be given in the lab frame");
  return hint.reframed(h0);
}

namespace {

// Graph distance of every basis state from the computational subspace,
// hopping along nonzero off-diagonal elements of H_I.
std::vector<int> distance_from_computational(const FourierOperator& h, const BlockStructure& layout) {
  const int d = h.dim();
  std::vector<std::vector<bool>> adj(d, std::vector<bool>(d, false));
  for (const auto& t : h.terms())
    for (int b = 0; b < d; ++b)
      for (int a = 0; a < d; ++a)
        if (a != b && t.m(a, b) != cd(0.0)) adj[a][b] = adj[b][a] = true;
  std::vector<int> dist(d, std::numeric_limits<int>::max() / 4);
  std::deque<int> q;
  for (int s = 0; s < d; ++s) {
    bool comp = true;
    for (int l : layout.levels(s)) comp = comp && l <= 1;
    if (comp) {
      dist[s] = 0;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (int k = 0; k < d; ++k)
      if (adj[s][k] && dist[k] > dist[s] + 1) {
        dist[k] = dist[s] + 1;
        q.push_back(k);
      }
  }
  return dist;
}

FourierOperator comm(const FourierOperator& a, const FourierOperator& b) { return commutator(a, b); }

const cd I(0.0, 1.0);

}  // namespace

EffectiveSeries run_swpt(const Model& m, int max_order, const SwptOptions& opt) {
  if (max_order > 4) throw OrderUnsupported("SWPT is implemented up to fourth order");
  if (max_order < 1) throw std::invalid_argument("run_swpt: max_order must be at least 1");
  const FourierOperator h = interaction_frame(m.h0, m.hint);
  const BlockStructure& layout = m.layout;

  EffectiveSeries out;
  out.max_order = max_order;
  out.layout = layout;

  const std::vector<int> dist = distance_from_computational(h, layout);
  std::vector<FourierOperator> g, gd;  // G_n and dG_n/dt

  auto step = [&](const FourierOperator& r, int n) {
    auto [bpart, npart] = block_split(r, layout);
    out.heff.push_back(bpart);
    if (n >= max_order) return;
    PoleFilter irrelevant = nullptr;
    if (opt.filter_irrelevant_poles) {
      const int budget = max_order - n;
      irrelevant = [&dist, budget](int a, int b) { return std::max(1, dist[a] + dist[b]) > budget; };
    }
    // Record what the filter drops so callers can inspect it.
    const double noise = 1e-12 * npart.max_abs();
    if (irrelevant)
      for (const auto& t : npart.terms())
        for (int col = 0; col < npart.dim(); ++col)
          for (int row = 0; row < npart.dim(); ++row) {
            const double w = npart.element_freq(t.freq, row, col);
            if (std::abs(w) < opt.tol.pole && std::abs(t.m(row, col)) > noise && irrelevant(row, col))
              out.dropped_poles.push_back({row, col, t.freq, w, t.m(row, col)});
          }
    FourierOperator gn = antiderivative(npart, opt.tol.pole, irrelevant);
    gd.push_back(derivative(gn));
    g.push_back(std::move(gn));
  };

  // order 1
  step(h, 1);
  if (max_order >= 2) {
    const FourierOperator& g1 = g[0];
    const FourierOperator& d1 = gd[0];
    FourierOperator r2 = (-0.5 * I) * comm(g1, d1) + I * comm(g1, h);
    step(r2, 2);
  }
  if (max_order >= 3) {
    const auto &g1 = g[0], &g2 = g[1], &d1 = gd[0], &d2 = gd[1];
    const FourierOperator g1h = comm(g1, h);
    FourierOperator r3 = (-0.5 * I) * (comm(g1, d2) + comm(g2, d1)) +
                         cd(1.0 / 6.0) * comm(g1, comm(g1, d1)) + I * comm(g2, h) -
                         cd(0.5) * comm(g1, g1h);
    step(r3, 3);
  }
  if (max_order >= 4) {
    const auto &g1 = g[0], &g2 = g[1], &g3 = g[2], &d1 = gd[0], &d2 = gd[1], &d3 = gd[2];
    const FourierOperator g1h = comm(g1, h);
    const FourierOperator g1d1 = comm(g1, d1);
    FourierOperator r4 = (-0.5 * I) * (comm(g1, d3) + comm(g2, d2) + comm(g3, d1)) +
                         cd(1.0 / 6.0) * (comm(g1, comm(g1, d2)) + comm(g1, comm(g2, d1)) + comm(g2, g1d1)) +
                         (I / 24.0) * comm(g1, comm(g1, g1d1)) + I * comm(g3, h) -
                         cd(0.5) * (comm(g1, comm(g2, h)) + comm(g2, g1h)) -
                         (I / 6.0) * comm(g1, comm(g1, g1h));
    step(r4, 4);
  }
  out.generators = std::move(g);
  return out;
}

EffectiveSeries run_swpt(const DeviceSpec& spec, int max_order, const SwptOptions& opt) {
  return run_swpt(build_model(spec), max_order, opt);
}

Mat effective_static(const Model& m, const EffectiveSeries& s, int max_order) {
  FourierOperator total(m.h0, s.heff.empty() ? Tolerances{}.merge : s.heff[0].merge_tol());
  for (int n = 1; n <= std::min(max_order, int(s.heff.size())); ++n) total += s.heff[n - 1];
  const double delta = m.levels[m.target_factor].energies[1] - m.omega_d;
  const Eigen::VectorXd nt = m.number(m.target_factor);
  Mat out = dc_part(total.reframed(m.h0 - delta * nt));
  out.diagonal() += (delta * nt).cast<cd>();
  return out;
}

Mat effective_static(const DeviceSpec& spec, int max_order, const SwptOptions& opt) {
  const Model m = build_model(spec);
  return effective_static(m, run_swpt(m, max_order, opt), max_order);
}

}  // namespace crflow

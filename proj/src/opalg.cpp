#include "crflow/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "crflow/errors.hpp"

namespace crflow {

FourierOperator::FourierOperator(int dim, double merge_tol)
    : dim_(dim), tol_(merge_tol), frame_(Eigen::VectorXd::Zero(dim)) {}

FourierOperator::FourierOperator(const Eigen::VectorXd& frame, double merge_tol)
    : dim_(int(frame.size())), tol_(merge_tol), frame_(frame) {}

FourierOperator FourierOperator::constant(const Mat& m, double merge_tol) {
  FourierOperator op(int(m.rows()), merge_tol);
  op.add(0.0, m);
  return op;
}

void FourierOperator::add(double freq, const Mat& m) {
  if (m.rows() != dim_ || m.cols() != dim_) throw std::invalid_argument("FourierOperator::add: dimension mismatch");
  if (m.isZero(0.0)) return;
  if (std::abs(freq) < tol_) freq = 0.0;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), freq - tol_,
                             [](const FourierTerm& t, double f) { return t.freq < f; });
  if (it != terms_.end() && std::abs(it->freq - freq) < tol_) {
    it->m += m;
    if (it->m.isZero(0.0)) terms_.erase(it);
    return;
  }
  terms_.insert(it, FourierTerm{freq, m});
}

FourierOperator FourierOperator::with_frame(const Eigen::VectorXd& f) const {
  if (f.size() != dim_) throw std::invalid_argument("with_frame: dimension mismatch");
  std::vector<std::tuple<double, int, int, cd>> items;
  for (const auto& t : terms_)
    for (int b = 0; b < dim_; ++b)
      for (int a = 0; a < dim_; ++a) {
        cd v = t.m(a, b);
        if (v == cd(0.0)) continue;
        double w = t.freq + frame_(a) - frame_(b) - (f(a) - f(b));
        items.emplace_back(w, a, b, v);
      }
  std::sort(items.begin(), items.end(),
            [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
  FourierOperator out(f, tol_);
  size_t i = 0;
  while (i < items.size()) {
    size_t j = i;
    double lead = std::get<0>(items[i]);
    Mat m = Mat::Zero(dim_, dim_);
    while (j < items.size() && std::get<0>(items[j]) - lead < tol_) {
      m(std::get<1>(items[j]), std::get<2>(items[j])) += std::get<3>(items[j]);
      ++j;
    }
    out.add(0.5 * (lead + std::get<0>(items[j - 1])), m);
    i = j;
  }
  return out;
}

FourierOperator FourierOperator::expanded() const {
  return with_frame(Eigen::VectorXd::Zero(dim_));
}

FourierOperator FourierOperator::reframed(const Eigen::VectorXd& f) const {
  FourierOperator out(f, tol_);
  out.terms_ = terms_;
  return out;
}

Mat FourierOperator::evaluate(double t) const {
  Mat out = Mat::Zero(dim_, dim_);
  for (const auto& term : terms_)
    for (int b = 0; b < dim_; ++b)
      for (int a = 0; a < dim_; ++a)
        out(a, b) += term.m(a, b) * std::exp(cd(0.0, element_freq(term.freq, a, b) * t));
  return out;
}

FourierOperator FourierOperator::adjoint() const {
  FourierOperator out(frame_, tol_);
  for (const auto& t : terms_) out.add(-t.freq, t.m.adjoint());
  return out;
}

bool FourierOperator::is_hermitian(double tol) const {
  const double scale = std::max(1.0, max_abs());
  FourierOperator diff = *this - adjoint();
  return diff.max_abs() <= tol * scale;
}

double FourierOperator::max_abs() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, t.m.cwiseAbs().maxCoeff());
  return m;
}

void FourierOperator::check_compatible(const FourierOperator& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("FourierOperator: dimension mismatch");
  if (frame_ != o.frame_) throw std::invalid_argument("FourierOperator: frame mismatch");
}

FourierOperator& FourierOperator::operator+=(const FourierOperator& o) {
  check_compatible(o);
  for (const auto& t : o.terms_) add(t.freq, t.m);
  return *this;
}

FourierOperator& FourierOperator::operator-=(const FourierOperator& o) {
  check_compatible(o);
  for (const auto& t : o.terms_) add(t.freq, -t.m);
  return *this;
}

FourierOperator& FourierOperator::operator*=(cd s) {
  if (s == cd(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.m *= s;
  return *this;
}

FourierOperator operator+(FourierOperator a, const FourierOperator& b) { return a += b; }
FourierOperator operator-(FourierOperator a, const FourierOperator& b) { return a -= b; }
FourierOperator operator*(cd s, FourierOperator a) { return a *= s; }

FourierOperator multiply(const FourierOperator& a, const FourierOperator& b) {
  if (a.dim() != b.dim() || a.frame() != b.frame())
    throw std::invalid_argument("multiply: incompatible operators");
  FourierOperator out(a.frame(), a.merge_tol());
  Mat prod(a.dim(), a.dim());
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) {
      prod.noalias() = x.m * y.m;
      out.add(x.freq + y.freq, prod);
    }
  return out;
}

FourierOperator commutator(const FourierOperator& a, const FourierOperator& b) {
  return multiply(a, b) - multiply(b, a);
}

FourierOperator antiderivative(const FourierOperator& a, double pole_tol,
                               const PoleFilter& irrelevant) {
  FourierOperator out(a.frame(), a.merge_tol());
  const double noise = 1e-12 * a.max_abs();
  std::vector<PoleEntry> poles;
  const int d = a.dim();
  for (const auto& t : a.terms()) {
    Mat m = t.m;
    for (int col = 0; col < d; ++col)
      for (int row = 0; row < d; ++row) {
        cd& v = m(row, col);
        if (v == cd(0.0)) continue;
        const double w = a.element_freq(t.freq, row, col);
        if (std::abs(w) < pole_tol) {
          if (std::abs(v) > noise && !(irrelevant && irrelevant(row, col)))
            poles.push_back({row, col, t.freq, w, v});
          v = 0.0;
        } else {
          v /= cd(0.0, w);
        }
      }
    out.add(t.freq, m);
  }
  if (!poles.empty()) {
    auto worst = std::min_element(poles.begin(), poles.end(), [](const auto& x, const auto& y) {
      return std::abs(x.frequency) < std::abs(y.frequency);
    });
    throw ResonancePole(worst->frequency, std::move(poles));
  }
  return out;
}

FourierOperator derivative(const FourierOperator& a) {
  FourierOperator out(a.frame(), a.merge_tol());
  const int d = a.dim();
  for (const auto& t : a.terms()) {
    Mat m = t.m;
    for (int col = 0; col < d; ++col)
      for (int row = 0; row < d; ++row) m(row, col) *= cd(0.0, a.element_freq(t.freq, row, col));
    out.add(t.freq, m);
  }
  return out;
}

int BlockStructure::size() const {
  int n = 1;
  for (int d : dims) n *= d;
  return n;
}

std::vector<int> BlockStructure::levels(int index) const {
  std::vector<int> lv(dims.size());
  for (int k = int(dims.size()) - 1; k >= 0; --k) {
    lv[k] = index % dims[k];
    index /= dims[k];
  }
  return lv;
}

int BlockStructure::label(int index) const {
  auto lv = levels(index);
  int lab = 0;
  for (size_t k = 0; k < dims.size(); ++k) {
    if (int(k) == target) continue;
    lab = lab * dims[k] + lv[k];
  }
  return lab;
}

std::pair<FourierOperator, FourierOperator> block_split(const FourierOperator& a,
                                                        const BlockStructure& blocks) {
  if (blocks.size() != a.dim()) throw std::invalid_argument("block_split: layout does not match dimension");
  const int d = a.dim();
  std::vector<int> lab(d);
  for (int i = 0; i < d; ++i) lab[i] = blocks.label(i);
  FourierOperator bpart(a.frame(), a.merge_tol()), npart(a.frame(), a.merge_tol());
  for (const auto& t : a.terms()) {
    Mat mb = Mat::Zero(d, d), mn = Mat::Zero(d, d);
    for (int col = 0; col < d; ++col)
      for (int row = 0; row < d; ++row) (lab[row] == lab[col] ? mb : mn)(row, col) = t.m(row, col);
    bpart.add(t.freq, mb);
    npart.add(t.freq, mn);
  }
  return {bpart, npart};
}

Mat dc_part(const FourierOperator& a) {
  const int d = a.dim();
  Mat out = Mat::Zero(d, d);
  for (const auto& t : a.terms())
    for (int col = 0; col < d; ++col)
      for (int row = 0; row < d; ++row)
        if (std::abs(a.element_freq(t.freq, row, col)) < a.merge_tol()) out(row, col) += t.m(row, col);
  return out;
}

}  // namespace crflow

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace crflow {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

struct Tolerances {
  double merge = 1e-7;  // MHz
  double pole = 1e-3;   // MHz
};

struct FourierTerm {
  double freq;
  Mat m;
};

// Sum_k M_k e^{i w_k t}, optionally carried in a diagonal frame f: the
// element (a,b) of a term at w_k then oscillates at w_k + f_a - f_b. A
// frame-free operator has f = 0. Products only need equal frames because
// the frame phases cancel on the inner index.
class FourierOperator {
 public:
  FourierOperator() = default;
  explicit FourierOperator(int dim, double merge_tol = Tolerances{}.merge);
  explicit FourierOperator(const Eigen::VectorXd& frame, double merge_tol = Tolerances{}.merge);

  static FourierOperator constant(const Mat& m, double merge_tol = Tolerances{}.merge);

  int dim() const { return dim_; }
  double merge_tol() const { return tol_; }
  const Eigen::VectorXd& frame() const { return frame_; }
  const std::vector<FourierTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(double freq, const Mat& m);

  // Same operator, different bookkeeping frame.
  FourierOperator with_frame(const Eigen::VectorXd& f) const;
  FourierOperator expanded() const;
  // Same terms, frame swapped; this is a change of rotating frame.
  FourierOperator reframed(const Eigen::VectorXd& f) const;

  // Oscillation frequency of element (a,b) of a term at w.
  double element_freq(double w, int a, int b) const { return w + frame_(a) - frame_(b); }

  Mat evaluate(double t) const;
  FourierOperator adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;
  double max_abs() const;

  FourierOperator& operator+=(const FourierOperator& o);
  FourierOperator& operator-=(const FourierOperator& o);
  FourierOperator& operator*=(cd s);

 private:
  void check_compatible(const FourierOperator& o) const;

  int dim_ = 0;
  double tol_ = Tolerances{}.merge;
  Eigen::VectorXd frame_;
  std::vector<FourierTerm> terms_;  // sorted by freq
};

FourierOperator operator+(FourierOperator a, const FourierOperator& b);
FourierOperator operator-(FourierOperator a, const FourierOperator& b);
FourierOperator operator*(cd s, FourierOperator a);

FourierOperator multiply(const FourierOperator& a, const FourierOperator& b);
FourierOperator commutator(const FourierOperator& a, const FourierOperator& b);

// Elements that may be dropped instead of raising a pole.
using PoleFilter = std::function<bool(int row, int col)>;

// Zero-DC antiderivative. Elements with |frequency| below the pole
// tolerance raise ResonancePole unless the filter says they are irrelevant,
// in which case they are dropped.
FourierOperator antiderivative(const FourierOperator& a, double pole_tol = Tolerances{}.pole,
                               const PoleFilter& irrelevant = nullptr);
FourierOperator derivative(const FourierOperator& a);

// Tensor layout. Blocks are copies of the target factor labelled by the
// states of all other factors, so B keeps entries diagonal in every
// non-target index.
struct BlockStructure {
  std::vector<int> dims;
  int target = 0;

  int size() const;
  std::vector<int> levels(int index) const;
  int label(int index) const;  // flattened non-target indices
  bool same_block(int a, int b) const { return label(a) == label(b); }
};

std::pair<FourierOperator, FourierOperator> block_split(const FourierOperator& a,
                                                        const BlockStructure& blocks);

Mat dc_part(const FourierOperator& a);

}  // namespace crflow

#include "pdist/interface.hpp"

#include <Eigen/LU>

#include "pdist/errors.hpp"
#include "pdist/star.hpp"

namespace pdist {

InterfaceSpec InterfaceSpec::make(double point, Eigen::MatrixXcd A, Eigen::MatrixXcd B) {
  InterfaceSpec spec{point, std::move(A), std::move(B)};
  spec.validate();
  return spec;
}

void InterfaceSpec::validate() const {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw InputError("interface at x=" + format_real(point) + ": A is " + std::to_string(A.rows()) +
                     "x" + std::to_string(A.cols()) + " but B is " + std::to_string(B.rows()) +
                     "x" + std::to_string(B.cols()));
  }
  if (A.cols() == 0) throw InputError("interface at x=" + format_real(point) + ": n must be positive");
  if (A.rows() > A.cols()) {
    throw InputError("interface at x=" + format_real(point) + ": m ≤ n violated (m=" +
                     std::to_string(A.rows()) + ", n=" + std::to_string(A.cols()) + ")");
  }
  if (!std::isfinite(point)) throw InputError("interface point must be finite");
}

std::string to_string(InterfaceKind kind) {
  switch (kind) {
    case InterfaceKind::separating:
      return "separating";
    case InterfaceKind::interacting:
      return "interacting";
    case InterfaceKind::partially_interacting:
      return "partially-interacting";
  }
  return "unknown";
}

int numerical_rank(const Eigen::MatrixXcd& m) {
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

InterfaceClass classify(const InterfaceSpec& spec) {
  spec.validate();
  const int m = spec.rows();
  const int n = spec.order();
  Eigen::MatrixXcd joint(m, 2 * n);
  joint << spec.A, -spec.B;
  InterfaceClass c;
  c.rank_a = numerical_rank(spec.A);
  c.rank_b = numerical_rank(spec.B);
  c.rank_ab = numerical_rank(joint);
  c.rank_deficient = c.rank_ab < m;
  c.dimension = n - c.rank_b;
  // The row space splits into A-only and B-only rows exactly when the ranks add.
  if (c.rank_ab == c.rank_a + c.rank_b) {
    c.kind = InterfaceKind::separating;
  } else if (c.rank_b == n && m == n) {
    c.kind = InterfaceKind::interacting;
  } else {
    c.kind = InterfaceKind::partially_interacting;
  }
  return c;
}

PiecewiseDist f_hat_shift(const InterfaceSpec& spec, const PiecewiseDist& psi) {
  spec.validate();
  PiecewiseDist out;
  PiecewiseDist dj = psi;
  for (int j = 0; j < spec.order(); ++j) {
    if (j > 0) dj = derivative(dj, 1);
    const PiecewiseDist left = delta_shift(Side::minus, 0, spec.point, dj);
    const PiecewiseDist right = delta_shift(Side::plus, 0, spec.point, dj);
    for (int i = 0; i < spec.rows(); ++i) {
      const Complex a = spec.A(i, j);
      const Complex b = spec.B(i, j);
      if (a == 0.0 && b == 0.0) continue;
      out = out + derivative(a * left - b * right, i);
    }
  }
  return out;
}

Eigen::VectorXcd interface_defect(const InterfaceSpec& spec, const PiecewiseDist& psi) {
  spec.validate();
  const Eigen::VectorXcd minus = lateral_trace(psi, spec.point, Side::minus, spec.order());
  const Eigen::VectorXcd plus = lateral_trace(psi, spec.point, Side::plus, spec.order());
  return spec.A * minus - spec.B * plus;
}

PiecewiseDist f_hat_trace(const InterfaceSpec& spec, const PiecewiseDist& psi) {
  const Eigen::VectorXcd defect = interface_defect(spec, psi);
  std::vector<Complex> coefs(defect.data(), defect.data() + defect.size());
  return canonicalize({spec.point}, {SmoothExpr(), SmoothExpr()}, {coefs});
}

bool in_kernel(const InterfaceSpec& spec, const PiecewiseDist& psi, double tol) {
  const Eigen::VectorXcd defect = interface_defect(spec, psi);
  return defect.size() == 0 || defect.cwiseAbs().maxCoeff() <= tol;
}

PiecewiseDist l_f_apply(int n, const InterfaceSpec& spec, const PiecewiseDist& psi) {
  if (n < 1) throw InputError("operator order must be positive");
  if (spec.order() != n) {
    throw InputError("interface conditions have n=" + std::to_string(spec.order()) +
                     " but the operator has order " + std::to_string(n));
  }
  Complex in = 1.0;
  for (int k = 0; k < n; ++k) in *= Complex(0.0, 1.0);
  return in * tilde_d(psi, PointSet{spec.point}, n) + f_hat_trace(spec, psi);
}

bool l_f_domain_check(int n, const InterfaceSpec& spec, const PiecewiseDist& psi, double tol) {
  const PiecewiseDist image = l_f_apply(n, spec, psi);
  for (const auto& d : image.delta_terms()) {
    if (std::abs(d.coefficient) > tol) return false;
  }
  return true;
}

}  // namespace pdist

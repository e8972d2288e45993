#pragma once

// Linear interface conditions A psi(x0-) = B psi(x0+) on the jets
// (psi, psi', ..., psi^(n-1)) and the singular operator whose kernel they
// describe.

#include <string>

#include <Eigen/Core>

#include "pdist/piecewise.hpp"

namespace pdist {

struct InterfaceSpec {
  double point = 0.0;
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;

  /// Throws InputError unless A and B have the same m x n shape with m <= n.
  static InterfaceSpec make(double point, Eigen::MatrixXcd A, Eigen::MatrixXcd B);
  void validate() const;

  int rows() const { return static_cast<int>(A.rows()); }
  int order() const { return static_cast<int>(A.cols()); }
};

enum class InterfaceKind { separating, interacting, partially_interacting };

std::string to_string(InterfaceKind kind);

struct InterfaceClass {
  InterfaceKind kind = InterfaceKind::separating;
  /// n - rank B: dimension of the plus-jets compatible with a generic minus-jet.
  int dimension = 0;
  int rank_a = 0;
  int rank_b = 0;
  int rank_ab = 0;
  /// The rows of [A | -B] are linearly dependent.
  bool rank_deficient = false;
};

/// Numerical rank with complete pivoting, threshold 1e-10 relative to the
/// largest entry.
int numerical_rank(const Eigen::MatrixXcd& m);

InterfaceClass classify(const InterfaceSpec& spec);

/// sum_{i<m, j<n} A_ij D^i S_-(D^j psi) - B_ij D^i S_+(D^j psi), where S_-
/// and S_+ multiply by delta(x - x0) from the right and from the left.
PiecewiseDist f_hat_shift(const InterfaceSpec& spec, const PiecewiseDist& psi);

/// sum_i (A psi_-(x0) - B psi_+(x0))_i delta^(i)(x - x0).
PiecewiseDist f_hat_trace(const InterfaceSpec& spec, const PiecewiseDist& psi);

/// A psi_-(x0) - B psi_+(x0).
Eigen::VectorXcd interface_defect(const InterfaceSpec& spec, const PiecewiseDist& psi);

bool in_kernel(const InterfaceSpec& spec, const PiecewiseDist& psi, double tol);

/// i^n D~^n psi + F psi, with D~ taken at the interface point.
PiecewiseDist l_f_apply(int n, const InterfaceSpec& spec, const PiecewiseDist& psi);

/// True when l_f_apply leaves no delta coefficient above tol.
bool l_f_domain_check(int n, const InterfaceSpec& spec, const PiecewiseDist& psi, double tol);

}  // namespace pdist

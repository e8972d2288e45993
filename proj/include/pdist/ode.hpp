#pragma once

// Linear ODEs sum_i a_i psi^(i) = f with interface conditions at finitely
// many points: the distributional equation in its two equivalent forms,
// residuals, and a solver that propagates jets across the interfaces.

#include <optional>
#include <string>
#include <vector>

#include "pdist/interface.hpp"
#include "pdist/piecewise.hpp"
#include "pdist/star.hpp"

namespace pdist {

struct Window {
  double lo = -10.0;
  double hi = 10.0;
};

struct OdeSpec {
  int order = 0;
  /// a_0, ..., a_n.
  std::vector<SmoothExpr> coeffs;
  SmoothExpr rhs;

  /// Checks sizes and that a_n stays away from zero on the window (257
  /// samples plus a sign-change scan). Throws ConstructionError.
  static OdeSpec make(std::vector<SmoothExpr> coeffs, SmoothExpr rhs, const Window& window);
  void check_leading(const Window& window) const;

  bool constant_coefficients() const;
};

enum class Form { tilde, star };

std::string to_string(Form form);

struct SingularCoeffs {
  /// Distributions multiplying psi^(i) from the left (a_tilde) and from the
  /// right (b_tilde).
  std::vector<PiecewiseDist> a_tilde;
  std::vector<PiecewiseDist> b_tilde;
};

SingularCoeffs singular_coeffs(const OdeSpec& ode, const PointSet& points);

struct Ode2Operator {
  Form form = Form::tilde;
  OdeSpec ode;
  std::vector<InterfaceSpec> interfaces;
  PointSet points;
  /// Filled for the star form only.
  SingularCoeffs coeffs;
};

/// Throws ConstructionError on duplicate interface points or order mismatch.
Ode2Operator build_ode2(const OdeSpec& ode, std::vector<InterfaceSpec> interfaces, Form form);

/// The residual distribution L psi - f.
PiecewiseDist apply_ode2(const Ode2Operator& op, const PiecewiseDist& psi);

struct VerifyReport {
  bool pass = false;
  double piece_max = 0.0;
  double delta_max = 0.0;
  std::string detail;
};

/// Residual pieces sampled at 65 interior points per interval of the window,
/// delta coefficients taken in absolute value.
VerifyReport verify(const Ode2Operator& op, const PiecewiseDist& psi, double tol,
                    const Window& window = {});

/// Largest discrepancy between the two forms' residuals.
double form_equivalence(const OdeSpec& ode, const std::vector<InterfaceSpec>& interfaces,
                        const PiecewiseDist& psi, const Window& window = {});

struct InitialData {
  double x = 0.0;
  Eigen::VectorXcd jet;
};

enum class CrossingStatus { unique, family, inconsistent, unreached };

std::string to_string(CrossingStatus status);

struct InterfaceRecord {
  double point = 0.0;
  CrossingStatus status = CrossingStatus::unreached;
  int fiber_dim = 0;
};

struct SolutionReport {
  /// The particular solution first, then one per free direction added to it.
  std::vector<PiecewiseDist> solutions;
  /// n plus the sum of interface fiber dimensions.
  int dimension = 0;
  std::vector<InterfaceRecord> interfaces;
  bool consistent = true;
  /// True when pieces are closed-form expressions.
  bool exact = false;
  double piece_residual = 0.0;
  double delta_residual = 0.0;
};

struct SolveOptions {
  double rtol = 1e-10;
  /// Use characteristic roots when coefficients and right-hand side are constant.
  bool allow_exact = true;
};

SolutionReport solve(const OdeSpec& ode, const std::vector<InterfaceSpec>& interfaces,
                     const InitialData& init, const Window& window, const SolveOptions& opts = {});

}  // namespace pdist

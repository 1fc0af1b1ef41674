#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfv/classifier.hpp"

namespace tfv {

struct ObstructionReport {
  std::string check_id;
  std::vector<double> residuals;  // one entry per sample point
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;  // max_residual < tolerance
};

struct ObstructionPair {
  ObstructionReport gradient;    // the gradient identity residual
  ObstructionReport closedness;  // d(omega) resp. d(nu) residual
};

struct FlowTrace {
  Point start;
  std::vector<double> times;  // strictly increasing, starting at 0
  std::vector<Point> points;
  std::vector<double> f_values;
  double linearity_error = 0;  // max |f(x(t)) - f(x(0)) - t|
  bool truncated = false;      // trajectory left the chart validity region
};

/// Scope note attached to every obstruction report surfaced to users.
inline const char* theorem_scope_note() {
  return "local obstruction verified; global non-existence is a topological theorem, out of "
         "numerical scope";
}

/// Residual of R(X,Y)V = <X,V>Y - <Y,V>X over random (X,Y) pairs per point.
/// By default the space must have sectional curvature -1 (checked numerically
/// at a few sample points); pass require_curvature_minus_one = false to run
/// the check as a negative control on other spaces.
ObstructionReport curvature_identity_check(const ModelSpace& s, const VectorField& V,
                                           const std::vector<Point>& pts, int pairs_per_point,
                                           std::uint64_t seed, double tolerance,
                                           bool require_curvature_minus_one = true,
                                           const DiffOptions& opt = {});

/// For a torqued field with closed-form f and omega: residuals of
/// grad f - V - f sharp(omega) and of d(omega). Preconditions: the classifier
/// must flag the field torqued on the samples, and its recovered (f, omega)
/// must match the formulas to match_tolerance.
ObstructionPair torqued_obstruction_check(const ModelSpace& s, const VectorField& V,
                                          const ScalarField& f_formula,
                                          const OneFormField& omega_formula,
                                          const std::vector<Point>& pts,
                                          double gradient_tolerance, double domega_tolerance,
                                          const Tolerances& tol = {},
                                          const DiffOptions& opt = {},
                                          double match_tolerance = 1e-6);

/// For an anti-torqued field with closed-form f: residuals of
/// grad f - (1 - f^2)V and of d(nu) with nu = flat(V).
ObstructionPair antitorqued_obstruction_check(const ModelSpace& s, const VectorField& V,
                                              const ScalarField& f_formula,
                                              const std::vector<Point>& pts,
                                              double gradient_tolerance, double dnu_tolerance,
                                              const Tolerances& tol = {},
                                              const DiffOptions& opt = {},
                                              double match_tolerance = 1e-6);

/// Fixed-step fourth-order integration of dx/dt = grad f / <grad f, grad f>,
/// recording f along the way. Throws CriticalPointError when |grad f| <= 1e-8;
/// leaving the chart truncates the trace and sets the flag.
FlowTrace gradient_flow_check(const ModelSpace& s, const ScalarField& f, const Point& p0,
                              double t_max, double step, const DiffOptions& opt = {});

}  // namespace tfv

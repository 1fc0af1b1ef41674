#pragma once

#include <vector>

#include "tfv/tensor_core.hpp"

namespace tfv {

struct Tolerances {
  double residual = 1e-8;  // torse-forming fit threshold (scaled by the local field magnitude)
  double zero = 1e-7;      // zero tests for |f|, |omega| etc. (same scaling)
};

/// Pointwise least-squares solution of grad_X V = f X + omega(X) V over an
/// orthonormal frame.
struct TorseDecomposition {
  double f = 0;
  OneForm omega;          // coordinate-cobasis components
  double residual = 0;    // RMS of the n^2 frame equations (metric-normalized)
  bool rank_ok = false;
  double smin = 0;        // smallest singular value of the column-normalized design matrix
  double scale = 1;       // max(1, frame Frobenius norm of grad V)
};

struct PointFlags {
  bool torse_forming = false;
  bool concircular = false;
  bool recurrent = false;
  bool parallel = false;
  bool torqued = false;
  bool anti_torqued = false;
  bool proper = false;
};

struct PointVerdict {
  Point p;
  TorseDecomposition dec;
  PointFlags flags;
  double v_norm = 0;      // |V|_g
  double omega_norm = 0;  // dual-metric norm of omega (= |W|_g)
  double omega_v = 0;     // omega(V)
  double anti_gap = 0;    // dual-metric norm of omega + f flat(V)
};

/// Conjunction of the per-point flags plus region statistics; min/max of f
/// and |omega| expose "nowhere zero" violations empirically without claiming
/// anything beyond the sample set.
struct RegionVerdict {
  PointFlags flags;
  int samples = 0;
  Tolerances tol;
  double max_residual = 0;
  double min_f = 0, max_f = 0;
  double min_abs_f = 0;
  double min_omega_norm = 0, max_omega_norm = 0;
  double min_v_norm = 0;
  double max_omega_v = 0;
  double max_anti_gap = 0;
  std::vector<Point> failures;  // points failing the torse-forming fit (at most 10 kept)
};

struct LengthGeodesicReport {
  bool length_constant = false;
  double length_min = 0, length_max = 0;
  double max_dlength = 0;   // max over samples of |d|V||_g*
  bool geodesic = false;
  double max_nabla_vv = 0;  // max over samples of |grad_V V|_g
  bool unit = false;
  double max_unit_dev = 0;  // max over samples of ||V| - 1|
};

/// Solve the n^2 x (n+1) system for (f, omega) at p. The system is assembled
/// in a metric-orthonormal frame so the residual is geometric; an optional
/// orthogonal frame_rotation exercises frame invariance. Throws
/// DegeneracyError when |V(p)| <= 1e-10 and InternalError on rank loss
/// (impossible for a nonvanishing field, hence a bug signal).
TorseDecomposition decompose_at(const ModelSpace& s, const VectorField& V, const Point& p,
                                const DiffOptions& opt = {},
                                const Mat* frame_rotation = nullptr);

PointVerdict classify_at(const ModelSpace& s, const VectorField& V, const Point& p,
                         const Tolerances& tol = {}, const DiffOptions& opt = {});

RegionVerdict classify_region(const ModelSpace& s, const VectorField& V,
                              const std::vector<Point>& pts, const Tolerances& tol = {},
                              const DiffOptions& opt = {});

/// Reconstruction residual of the alternative anti-torqued form
/// grad_X V = f(X - nu(X)V) with the recovered f and nu = flat(V):
/// max over frame directions of the metric norm of the mismatch.
double anti_eq2_residual(const ModelSpace& s, const VectorField& V, const Point& p,
                         const DiffOptions& opt = {});

LengthGeodesicReport length_and_geodesic(const ModelSpace& s, const VectorField& V,
                                         const std::vector<Point>& pts,
                                         const Tolerances& tol = {},
                                         const DiffOptions& opt = {});

}  // namespace tfv

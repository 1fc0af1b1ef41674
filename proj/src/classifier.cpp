#include "tfv/classifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "tfv/parallel.hpp"

namespace tfv {

namespace {

// Everything decompose_at and anti_eq2_residual share: the orthonormal frame
// built from the Cholesky factor of g, and the covariant derivative of V
// expressed in that frame.
struct FrameSystem {
  int n = 0;
  Mat g;     // metric at p
  Mat L;     // g = L L^T
  Mat F;     // frame columns in coordinates (L^{-T}, optionally rotated)
  Mat Finv;  // coordinate components -> frame components
  Mat Dmat;  // Dmat(b, a) = frame-b component of grad_{F_a} V
  Vec Vt;    // frame components of V(p)
  double vnorm = 0;
};

FrameSystem build_frame_system(const ModelSpace& s, const VectorField& V, const Point& p,
                               const DiffOptions& opt, const Mat* rot) {
  s.require_valid(p);
  const int n = s.n;
  FrameSystem fs;
  fs.n = n;
  const auto x = to_std(p.x);
  const Vec Vp = to_eigen(V(x));
  fs.g = metric_at(s, p).g;

  Eigen::LLT<Mat> llt(fs.g);
  if (llt.info() != Eigen::Success)
    throw NumericError("decompose_at: metric is not positive definite at the sample point");
  fs.L = llt.matrixL();

  // dV(i, k) = d_i V^k
  Mat dV(n, n);
  if (opt.backend == DiffBackend::exact) {
    for (int i = 0; i < n; ++i) {
      const auto col = V(seeded(x, i));
      for (int k = 0; k < n; ++k) dV(i, k) = col[k].b;
    }
  } else {
    const double h = opt.fd_step;
    for (int i = 0; i < n; ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const auto vp = V(xp);
      const auto vm = V(xm);
      for (int k = 0; k < n; ++k) dV(i, k) = (vp[k] - vm[k]) / (2 * h);
    }
  }

  const ChristoffelValue G = christoffel_at(s, p, opt);
  Mat C(n, n);  // column i = coordinate components of grad_{d_i} V
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double acc = dV(i, k);
      for (int j = 0; j < n; ++j) acc += G(k, i, j) * Vp[j];
      C(k, i) = acc;
    }

  const Mat Lt = fs.L.transpose();
  Mat F = Lt.triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
  Mat Finv = Lt;
  if (rot != nullptr) {
    if (rot->rows() != n || rot->cols() != n)
      throw ConfigError("decompose_at: frame rotation must be " + std::to_string(n) + "x" +
                        std::to_string(n));
    const double dev = (rot->transpose() * (*rot) - Mat::Identity(n, n)).norm();
    if (dev > 1e-10) throw ConfigError("decompose_at: frame rotation is not orthogonal");
    F = F * (*rot);
    Finv = rot->transpose() * Lt;
  }
  fs.F = F;
  fs.Finv = Finv;
  fs.Dmat = Finv * C * F;
  fs.Vt = Finv * Vp;
  fs.vnorm = fs.Vt.norm();
  if (!(fs.vnorm > 1e-10))
    throw DegeneracyError("decompose_at: |V| <= 1e-10 at the sample point; field is degenerate there");
  return fs;
}

TorseDecomposition solve_frame_system(const FrameSystem& fs, const Point& p) {
  const int n = fs.n;
  Mat A = Mat::Zero(n * n, n + 1);
  Vec y(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int r = a * n + b;
      if (a == b) A(r, 0) = 1;
      A(r, 1 + a) = fs.Vt[b];
      y[r] = fs.Dmat(b, a);
    }

  Eigen::ColPivHouseholderQR<Mat> qr(A);
  const Vec sol = qr.solve(y);

  TorseDecomposition dec;
  dec.f = sol[0];
  dec.residual = (A * sol - y).norm() / n;
  dec.scale = std::max(1.0, fs.Dmat.norm());

  // Column norms are sqrt(n) and |V| exactly; normalize before the rank check
  // so the threshold is scale-free.
  Mat An = A;
  An.col(0) /= std::sqrt(double(n));
  for (int c = 1; c <= n; ++c) An.col(c) /= fs.vnorm;
  Eigen::JacobiSVD<Mat> svd(An);
  dec.smin = svd.singularValues()(n);
  dec.rank_ok = dec.smin > 1e-10;
  if (!dec.rank_ok)
    throw InternalError(
        "decompose_at: design matrix lost rank; impossible for a nonvanishing field");

  dec.omega = OneForm{p, fs.Finv.transpose() * sol.tail(n)};
  return dec;
}

}  // namespace

TorseDecomposition decompose_at(const ModelSpace& s, const VectorField& V, const Point& p,
                                const DiffOptions& opt, const Mat* frame_rotation) {
  const FrameSystem fs = build_frame_system(s, V, p, opt, frame_rotation);
  return solve_frame_system(fs, p);
}

PointVerdict classify_at(const ModelSpace& s, const VectorField& V, const Point& p,
                         const Tolerances& tol, const DiffOptions& opt) {
  PointVerdict out;
  out.p = p;
  const FrameSystem fs = build_frame_system(s, V, p, opt, nullptr);
  out.dec = solve_frame_system(fs, p);

  out.v_norm = fs.vnorm;
  const Vec w = out.dec.omega.w;
  Eigen::LLT<Mat> llt(fs.g);
  const Vec ginv_w = llt.solve(w);
  out.omega_norm = std::sqrt(std::max(0.0, w.dot(ginv_w)));
  const Vec Vp = to_eigen(V(to_std(p.x)));
  out.omega_v = w.dot(Vp);
  const Vec anti = w + out.dec.f * (fs.g * Vp);
  out.anti_gap = std::sqrt(std::max(0.0, anti.dot(llt.solve(anti))));

  PointFlags& fl = out.flags;
  fl.torse_forming = out.dec.rank_ok && out.dec.residual < tol.residual * out.dec.scale;
  if (fl.torse_forming) {
    const bool f_zero = std::abs(out.dec.f) < tol.zero * out.dec.scale;
    const bool w_zero = out.omega_norm < tol.zero * out.dec.scale;
    fl.concircular = w_zero;
    fl.recurrent = f_zero;
    fl.parallel = f_zero && w_zero;
    fl.proper = !f_zero && !w_zero;
    fl.torqued =
        fl.proper && std::abs(out.omega_v) < tol.zero * std::max(1.0, out.omega_norm * out.v_norm);
    fl.anti_torqued =
        fl.proper && out.anti_gap < tol.zero * std::max(1.0, std::max(out.omega_norm,
                                                                     std::abs(out.dec.f) * out.v_norm));
  }
  return out;
}

RegionVerdict classify_region(const ModelSpace& s, const VectorField& V,
                              const std::vector<Point>& pts, const Tolerances& tol,
                              const DiffOptions& opt) {
  if (pts.empty()) throw ConfigError("classify_region: no sample points given");
  std::vector<PointVerdict> verdicts(pts.size());
  parallel_for(static_cast<int>(pts.size()),
               [&](int i) { verdicts[i] = classify_at(s, V, pts[i], tol, opt); });

  RegionVerdict out;
  out.samples = static_cast<int>(pts.size());
  out.tol = tol;
  out.flags = PointFlags{true, true, true, true, true, true, true};
  const double inf = std::numeric_limits<double>::infinity();
  out.min_f = inf;
  out.max_f = -inf;
  out.min_abs_f = inf;
  out.min_omega_norm = inf;
  out.max_omega_norm = 0;
  out.min_v_norm = inf;
  for (const auto& v : verdicts) {
    out.flags.torse_forming &= v.flags.torse_forming;
    out.flags.concircular &= v.flags.concircular;
    out.flags.recurrent &= v.flags.recurrent;
    out.flags.parallel &= v.flags.parallel;
    out.flags.torqued &= v.flags.torqued;
    out.flags.anti_torqued &= v.flags.anti_torqued;
    out.flags.proper &= v.flags.proper;
    out.max_residual = std::max(out.max_residual, v.dec.residual);
    out.min_f = std::min(out.min_f, v.dec.f);
    out.max_f = std::max(out.max_f, v.dec.f);
    out.min_abs_f = std::min(out.min_abs_f, std::abs(v.dec.f));
    out.min_omega_norm = std::min(out.min_omega_norm, v.omega_norm);
    out.max_omega_norm = std::max(out.max_omega_norm, v.omega_norm);
    out.min_v_norm = std::min(out.min_v_norm, v.v_norm);
    out.max_omega_v = std::max(out.max_omega_v, std::abs(v.omega_v));
    out.max_anti_gap = std::max(out.max_anti_gap, v.anti_gap);
    if (!v.flags.torse_forming && out.failures.size() < 10) out.failures.push_back(v.p);
  }
  return out;
}

double anti_eq2_residual(const ModelSpace& s, const VectorField& V, const Point& p,
                         const DiffOptions& opt) {
  const FrameSystem fs = build_frame_system(s, V, p, opt, nullptr);
  const TorseDecomposition dec = solve_frame_system(fs, p);
  const int n = fs.n;
  double worst = 0;
  for (int a = 0; a < n; ++a) {
    Vec r = fs.Dmat.col(a) + dec.f * fs.Vt[a] * fs.Vt;
    r[a] -= dec.f;
    worst = std::max(worst, r.norm());
  }
  return worst;
}

LengthGeodesicReport length_and_geodesic(const ModelSpace& s, const VectorField& V,
                                         const std::vector<Point>& pts, const Tolerances& tol,
                                         const DiffOptions& opt) {
  if (pts.empty()) throw ConfigError("length_and_geodesic: no sample points given");
  const int n = s.n;
  const MetricField metric = s.metric;
  ScalarField len([metric, V, n](const auto& x) {
    const auto g = metric(x);
    const auto v = V(x);
    using T = typename std::decay_t<decltype(v)>::value_type;
    T acc(0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += g(i, j) * v[i] * v[j];
    using std::sqrt;
    return sqrt(acc);
  });

  struct Slot {
    double len = 0, dlen = 0, nvv = 0;
  };
  std::vector<Slot> slots(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const Point& p = pts[i];
    s.require_valid(p);
    const auto x = to_std(p.x);
    Slot sl;
    sl.len = len(x);
    sl.dlen = norm(s, gradient(s, len, p, opt));
    const TangentVector Vp{p, to_eigen(V(x))};
    sl.nvv = norm(s, covariant_derivative(s, Vp, V, opt));
    slots[i] = sl;
  });

  LengthGeodesicReport out;
  out.length_min = std::numeric_limits<double>::infinity();
  out.length_max = -out.length_min;
  for (const auto& sl : slots) {
    out.length_min = std::min(out.length_min, sl.len);
    out.length_max = std::max(out.length_max, sl.len);
    out.max_dlength = std::max(out.max_dlength, sl.dlen);
    out.max_nabla_vv = std::max(out.max_nabla_vv, sl.nvv);
    out.max_unit_dev = std::max(out.max_unit_dev, std::abs(sl.len - 1));
  }
  const double ref = std::max(1.0, std::abs(out.length_max));
  out.length_constant =
      (out.length_max - out.length_min) < tol.zero * ref && out.max_dlength < tol.zero * ref;
  out.geodesic = out.max_nabla_vv < tol.zero * ref;
  out.unit = out.max_unit_dev < tol.zero;
  return out;
}

}  // namespace tfv

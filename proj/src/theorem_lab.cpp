#include "tfv/theorem_lab.hpp"

#include <algorithm>
#include <cmath>

#include "tfv/parallel.hpp"
#include "tfv/rng.hpp"

namespace tfv {

namespace {

ObstructionReport finish_report(std::string id, std::vector<double> residuals, double tolerance) {
  ObstructionReport rep;
  rep.check_id = std::move(id);
  rep.residuals = std::move(residuals);
  rep.tolerance = tolerance;
  rep.max_residual = 0;
  for (double r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
  rep.pass = rep.max_residual < tolerance;
  return rep;
}

void require_points(const std::vector<Point>& pts, const char* who) {
  if (pts.empty()) throw ConfigError(std::string(who) + ": no sample points given");
}

// Preliminary assertion shared by the obstruction checks: the classifier's
// recovered (f, omega) must agree with the closed-form catalog expressions.
void require_formula_match(const ModelSpace& s, const VectorField& V, const ScalarField& f_formula,
                           const OneFormField* omega_formula, const std::vector<Point>& pts,
                           double match_tolerance, const DiffOptions& opt) {
  std::vector<double> gaps(pts.size(), 0);
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const Point& p = pts[i];
    const auto x = to_std(p.x);
    const TorseDecomposition dec = decompose_at(s, V, p, opt);
    const double fref = f_formula(x);
    double gap = std::abs(dec.f - fref) / std::max(1.0, std::abs(fref));
    if (omega_formula != nullptr) {
      const Vec wref = to_eigen((*omega_formula)(x));
      const TangentVector diff = sharp(s, OneForm{p, dec.omega.w - wref});
      const double wnorm = norm(s, sharp(s, OneForm{p, wref}));
      gap = std::max(gap, norm(s, diff) / std::max(1.0, wnorm));
    }
    gaps[i] = gap;
  });
  const double worst = *std::max_element(gaps.begin(), gaps.end());
  if (!(worst <= match_tolerance))
    throw PreconditionError(
        "obstruction check: classifier output does not match the closed-form field data "
        "(relative gap " +
        std::to_string(worst) + ")");
}

}  // namespace

ObstructionReport curvature_identity_check(const ModelSpace& s, const VectorField& V,
                                           const std::vector<Point>& pts, int pairs_per_point,
                                           std::uint64_t seed, double tolerance,
                                           bool require_curvature_minus_one,
                                           const DiffOptions& opt) {
  require_points(pts, "curvature_identity_check");
  if (pairs_per_point < 1) throw ConfigError("curvature_identity_check: need at least one (X,Y) pair");
  const int n = s.n;

  if (require_curvature_minus_one) {
    const int probes = std::min<int>(3, static_cast<int>(pts.size()));
    for (int i = 0; i < probes; ++i) {
      for (int a = 0; a + 1 < std::min(n, 3); ++a) {
        Vec u = Vec::Zero(n), v = Vec::Zero(n);
        u[a] = 1;
        v[a + 1] = 1;
        const double K =
            sectional_curvature(s, TangentVector{pts[i], u}, TangentVector{pts[i], v}, pts[i], opt);
        if (std::abs(K + 1) > 1e-6)
          throw PreconditionError(
              "curvature_identity_check: space does not have sectional curvature -1 (measured " +
              std::to_string(K) + ")");
      }
    }
  }

  // Draw all random pairs up front so the result is independent of scheduling.
  Rng rng(seed);
  std::vector<Vec> xs(pts.size() * pairs_per_point, Vec(n)), ys(pts.size() * pairs_per_point, Vec(n));
  for (auto& v : xs)
    for (int k = 0; k < n; ++k) v[k] = rng.uniform(-1, 1);
  for (auto& v : ys)
    for (int k = 0; k < n; ++k) v[k] = rng.uniform(-1, 1);

  std::vector<double> residuals(pts.size(), 0);
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const Point& p = pts[i];
    const Vec Vp = to_eigen(V(to_std(p.x)));
    const TangentVector Vt{p, Vp};
    double worst = 0;
    for (int j = 0; j < pairs_per_point; ++j) {
      const TangentVector X{p, xs[i * pairs_per_point + j]};
      const TangentVector Y{p, ys[i * pairs_per_point + j]};
      const TangentVector R = riemann(s, X, Y, Vt, p, opt);
      const Vec rhs = inner(s, X, Vt) * Y.v - inner(s, Y, Vt) * X.v;
      worst = std::max(worst, norm(s, TangentVector{p, R.v - rhs}));
    }
    residuals[i] = worst;
  });
  return finish_report("curvature-identity", std::move(residuals), tolerance);
}

ObstructionPair torqued_obstruction_check(const ModelSpace& s, const VectorField& V,
                                          const ScalarField& f_formula,
                                          const OneFormField& omega_formula,
                                          const std::vector<Point>& pts,
                                          double gradient_tolerance, double domega_tolerance,
                                          const Tolerances& tol, const DiffOptions& opt,
                                          double match_tolerance) {
  require_points(pts, "torqued_obstruction_check");
  const RegionVerdict rv = classify_region(s, V, pts, tol, opt);
  if (!rv.flags.torqued)
    throw PreconditionError(
        "torqued_obstruction_check: field is not torqued on the sampled region");
  require_formula_match(s, V, f_formula, &omega_formula, pts, match_tolerance, opt);

  std::vector<double> grad_res(pts.size(), 0), dw_res(pts.size(), 0);
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const Point& p = pts[i];
    const auto x = to_std(p.x);
    const TangentVector gf = gradient(s, f_formula, p, opt);
    const Vec Vp = to_eigen(V(x));
    const double fp = f_formula(x);
    const TangentVector W = sharp(s, OneForm{p, to_eigen(omega_formula(x))});
    grad_res[i] = norm(s, TangentVector{p, gf.v - Vp - fp * W.v});
    dw_res[i] = exterior_derivative(s, omega_formula, p, opt).norm();
  });
  ObstructionPair out;
  out.gradient = finish_report("torqued-gradient-identity", std::move(grad_res), gradient_tolerance);
  out.closedness = finish_report("torqued-domega", std::move(dw_res), domega_tolerance);
  return out;
}

ObstructionPair antitorqued_obstruction_check(const ModelSpace& s, const VectorField& V,
                                              const ScalarField& f_formula,
                                              const std::vector<Point>& pts,
                                              double gradient_tolerance, double dnu_tolerance,
                                              const Tolerances& tol, const DiffOptions& opt,
                                              double match_tolerance) {
  require_points(pts, "antitorqued_obstruction_check");
  const RegionVerdict rv = classify_region(s, V, pts, tol, opt);
  if (!rv.flags.anti_torqued)
    throw PreconditionError(
        "antitorqued_obstruction_check: field is not anti-torqued on the sampled region");
  require_formula_match(s, V, f_formula, nullptr, pts, match_tolerance, opt);

  const int n = s.n;
  const MetricField metric = s.metric;
  OneFormField nu([metric, V, n](const auto& x) {
    const auto g = metric(x);
    const auto v = V(x);
    using T = typename std::decay_t<decltype(v)>::value_type;
    std::vector<T> w(n, T(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[i] += g(i, j) * v[j];
    return w;
  });

  std::vector<double> grad_res(pts.size(), 0), dnu_res(pts.size(), 0);
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const Point& p = pts[i];
    const auto x = to_std(p.x);
    const TangentVector gf = gradient(s, f_formula, p, opt);
    const Vec Vp = to_eigen(V(x));
    const double fp = f_formula(x);
    grad_res[i] = norm(s, TangentVector{p, gf.v - (1 - fp * fp) * Vp});
    dnu_res[i] = exterior_derivative(s, nu, p, opt).norm();
  });
  ObstructionPair out;
  out.gradient =
      finish_report("antitorqued-gradient-identity", std::move(grad_res), gradient_tolerance);
  out.closedness = finish_report("antitorqued-dnu", std::move(dnu_res), dnu_tolerance);
  return out;
}

FlowTrace gradient_flow_check(const ModelSpace& s, const ScalarField& f, const Point& p0,
                              double t_max, double step, const DiffOptions& opt) {
  if (!(t_max > 0)) throw ConfigError("gradient_flow_check: t_max must be positive");
  if (!(step > 0)) throw ConfigError("gradient_flow_check: step must be positive");
  s.require_valid(p0);

  struct ChartExit {};
  auto tfield = [&](const Vec& xv) -> Vec {
    const Point q{xv};
    if (!s.is_valid(q)) throw ChartExit{};
    const TangentVector gr = gradient(s, f, q, opt);
    const double g2 = inner(s, gr, gr);
    if (!(std::sqrt(g2) > 1e-8))
      throw CriticalPointError("gradient_flow_check: |grad f| <= 1e-8 along the trajectory");
    return gr.v / g2;
  };

  FlowTrace tr;
  tr.start = p0;
  Vec x = p0.x;
  const double f0 = f(to_std(x));
  tr.times.push_back(0);
  tr.points.push_back(p0);
  tr.f_values.push_back(f0);

  const long long nfull = static_cast<long long>(std::floor(t_max / step + 1e-9));
  double rem = t_max - static_cast<double>(nfull) * step;
  if (rem < 1e-12 * std::max(1.0, t_max)) rem = 0;

  auto advance = [&](double h) {
    const Vec k1 = tfield(x);
    const Vec k2 = tfield(x + (0.5 * h) * k1);
    const Vec k3 = tfield(x + (0.5 * h) * k2);
    const Vec k4 = tfield(x + h * k3);
    x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!s.is_valid(Point{x})) throw ChartExit{};
  };

  try {
    for (long long k = 0; k < nfull; ++k) {
      advance(step);
      const double t = (k + 1 == nfull && rem == 0) ? t_max : static_cast<double>(k + 1) * step;
      tr.times.push_back(t);
      tr.points.push_back(Point{x});
      tr.f_values.push_back(f(to_std(x)));
    }
    if (rem > 0) {
      advance(rem);
      tr.times.push_back(t_max);
      tr.points.push_back(Point{x});
      tr.f_values.push_back(f(to_std(x)));
    }
  } catch (const ChartExit&) {
    tr.truncated = true;
  }

  for (std::size_t i = 0; i < tr.times.size(); ++i)
    tr.linearity_error =
        std::max(tr.linearity_error, std::abs(tr.f_values[i] - f0 - tr.times[i]));
  return tr;
}

}  // namespace tfv

#include "desing/gluing.hpp"

#include <cmath>

namespace desing {

namespace {
const double kPi = 3.14159265358979323846264338327950288;

double bump(double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; }
double bump_d1(double s) { return s > 0 ? bump(s) / (s * s) : 0.0; }
double bump_d2(double s) {
  return s > 0 ? bump(s) * (1.0 - 2.0 * s) / (s * s * s * s) : 0.0;
}
}  // namespace

double cutoff_chi(double u) {
  const double a = bump(u - 1.0), b = bump(2.0 - u);
  if (u <= 1) return 0;
  if (u >= 2) return 1;
  return a / (a + b);
}

double cutoff_chi_d1(double u) {
  if (u <= 1 || u >= 2) return 0;
  const double a = bump(u - 1.0), b = bump(2.0 - u);
  const double da = bump_d1(u - 1.0), db = -bump_d1(2.0 - u);
  const double s = a + b;
  return (da * s - a * (da + db)) / (s * s);
}

double cutoff_chi_d2(double u) {
  if (u <= 1 || u >= 2) return 0;
  const double a = bump(u - 1.0), b = bump(2.0 - u);
  const double da = bump_d1(u - 1.0), db = -bump_d1(2.0 - u);
  const double dda = bump_d2(u - 1.0), ddb = bump_d2(2.0 - u);
  const double s = a + b, ds = da + db, dds = dda + ddb;
  // chi = a/s
  return (dda * s * s - 2 * da * ds * s - a * dds * s + 2 * a * ds * ds) /
         (s * s * s);
}

Eigen::Vector3d cutoff_derivative_constants() {
  Eigen::Vector3d C(1.0, 0.0, 0.0);
  for (int i = 0; i <= 2000; ++i) {
    const double u = 1.0 + i / 2000.0;
    C(1) = std::max(C(1), std::abs(cutoff_chi_d1(u)) * u);
    C(2) = std::max(C(2), std::abs(cutoff_chi_d2(u)) * u * u);
  }
  return C;
}

// --- glued profiles ----------------------------------------------------------

namespace {

// Eguchi-Hanson squared profiles as functions of the area radius s (the ALE
// chart the gluing interpolates in), fully closed-form through the cone
// radius r: with p(r) = r^3 - a^4/r,
//   s = p^{1/3},  B^2 = r^2 - a^4/r^2,  C^2 = r^2,  g_ss = 9 r^3 s / p'^2.
struct EHChart {
  double a = 1.0;

  double r_of_s(double s) const {
    const double s3 = s * s * s;
    double r = std::max(s, a * (1.0 + 1e-12));
    for (int it = 0; it < 100; ++it) {
      const double f = r * r * r - std::pow(a, 4.0) / r - s3;
      const double fp = 3 * r * r + std::pow(a, 4.0) / (r * r);
      const double step = f / fp;
      r -= step;
      if (r <= a) r = a * (1.0 + 1e-14);
      if (std::abs(step) < 1e-15 * (1 + r)) break;
    }
    return r;
  }
  double xi_of_s(double s) const {
    const double r = r_of_s(s);
    return std::sqrt(std::max(0.0, std::pow(r / a, 4.0) - 1.0));
  }

  void profiles(double s, ProfileValue* A2, ProfileValue* B2,
                ProfileValue* C2) const {
    const double a4 = std::pow(a, 4.0);
    const double r = r_of_s(s);
    const double p = r * r * r - a4 / r;
    const double p1 = 3 * r * r + a4 / (r * r);
    const double p2 = 6 * r - 2 * a4 / (r * r * r);
    const double p3 = 6 + 6 * a4 / (r * r * r * r);
    const double sv = std::cbrt(p);
    const double s1 = p1 / (3 * std::pow(p, 2.0 / 3.0));           // ds/dr
    const double s2 = p2 / (3 * std::pow(p, 2.0 / 3.0)) -
                      2.0 * p1 * p1 / (9.0 * std::pow(p, 5.0 / 3.0));

    auto to_s = [&](double f, double fr, double frr) {
      // f(r) -> f(s): df/ds = f_r/s_r, d2f/ds2 = (f_rr s_r - f_r s_rr)/s_r^3
      return ProfileValue{f, fr / s1, (frr * s1 - fr * s2) / (s1 * s1 * s1)};
    };
    *B2 = to_s(r * r - a4 / (r * r), 2 * r + 2 * a4 / (r * r * r),
               2 - 6 * a4 / (r * r * r * r));
    *C2 = to_s(r * r, 2 * r, 2.0);

    // g_ss = N/D, N = 9 r^3 s, D = p'^2 (closed form incl. two derivatives)
    const double N = 9 * r * r * r * sv;
    const double N1 = 9 * (3 * r * r * sv + r * r * r * s1);
    const double N2 = 9 * (6 * r * sv + 6 * r * r * s1 + r * r * r * s2);
    const double D = p1 * p1;
    const double D1 = 2 * p1 * p2;
    const double D2 = 2 * (p2 * p2 + p1 * p3);
    const double g0 = N / D;
    const double g1 = (N1 * D - N * D1) / (D * D);
    const double g2 = N2 / D - 2 * N1 * D1 / (D * D) - N * D2 / (D * D) +
                      2 * N * D1 * D1 / (D * D * D);
    *A2 = to_s(g0, g1, g2);
  }
};

ProfileValue square_profile(const ProfileValue& f) {
  return ProfileValue{f.f * f.f, 2 * f.f * f.df,
                      2 * (f.df * f.df + f.f * f.ddf)};
}

ProfileValue sqrt_profile(const ProfileValue& F) {
  const double f = std::sqrt(F.f);
  const double df = F.df / (2 * f);
  const double ddf = (F.ddf - 2 * df * df) / (2 * f);
  return ProfileValue{f, df, ddf};
}

}  // namespace

double GluedRadialMetric::x_chart_min() const {
  // keep clear of the bolt chart degeneracy: s >= 1.1 a
  return bubble.kind == ALEModel::Kind::EguchiHanson
             ? 1.1 * bubble.scale * std::sqrt(t)
             : 1e-6 * std::sqrt(t);
}

double GluedRadialMetric::x_max() const {
  return two_sided ? orbifold.x_max : orbifold.x_max;
}

namespace {

// squared profile of the scaled bubble t*g_b in the chart radius x = sqrt(t) s
void bubble_profiles(const ALEModel& bubble, double t, double x,
                     ProfileValue* A2, ProfileValue* B2, ProfileValue* C2) {
  const double s = x / std::sqrt(t);
  if (bubble.kind == ALEModel::Kind::EguchiHanson) {
    EHChart ch{bubble.scale};
    ProfileValue a2, b2, c2;
    ch.profiles(s, &a2, &b2, &c2);
    // t g_b with s -> x/sqrt(t): dx^2-coefficient t*g_ss*(ds/dx)^2 = g_ss(s)
    // angular coefficients t * B^2(s).  Chain rule d/dx = (1/sqrt t) d/ds.
    *A2 = ProfileValue{a2.f, a2.df / std::sqrt(t), a2.ddf / t};
    *B2 = ProfileValue{t * b2.f, t * b2.df / std::sqrt(t), b2.ddf * t / t};
    *C2 = ProfileValue{t * c2.f, t * c2.df / std::sqrt(t), c2.ddf * t / t};
    B2->ddf = b2.ddf;  // t * (1/t) factors cancel
    C2->ddf = c2.ddf;
  } else {
    // flat cone: t g_e in the chart x: identical to g_e
    *A2 = ProfileValue{1, 0, 0};
    *B2 = ProfileValue{x * x, 2 * x, 2};
    *C2 = *B2;
  }
}

struct GluedPieces {
  ProfileValue orb, bub;
  double chi, dchi, ddchi;  // of x
};

}  // namespace

namespace {
ProfileValue glue_generic(double x, double xo, double sgn, double zone,
                          const ProfileValue& orb, ProfileValue bub) {
  (void)x;
  const double u = xo / zone;
  if (u >= 2) return orb;
  if (sgn < 0) bub.df = -bub.df;
  const double chi = cutoff_chi(u);
  const double dchi = sgn * cutoff_chi_d1(u) / zone;
  const double ddchi = cutoff_chi_d2(u) / (zone * zone);
  ProfileValue out;
  out.f = chi * orb.f + (1 - chi) * bub.f;
  out.df = dchi * (orb.f - bub.f) + chi * orb.df + (1 - chi) * bub.df;
  out.ddf = ddchi * (orb.f - bub.f) + 2 * dchi * (orb.df - bub.df) +
            chi * orb.ddf + (1 - chi) * bub.ddf;
  return out;
}
}  // namespace

ProfileValue GluedRadialMetric::A2(double x) const {
  const double xo = two_sided ? std::min(x, orbifold.x_max - x) : x;
  const double sgn = (two_sided && x > 0.5 * orbifold.x_max) ? -1.0 : 1.0;
  ProfileValue a2, b2, c2;
  if (xo / zone_lo() < 2) bubble_profiles(bubble, t, xo, &a2, &b2, &c2);
  return glue_generic(x, xo, sgn, zone_lo(), square_profile(orbifold.A(x)), a2);
}

ProfileValue GluedRadialMetric::B2(double x) const {
  const double xo = two_sided ? std::min(x, orbifold.x_max - x) : x;
  const double sgn = (two_sided && x > 0.5 * orbifold.x_max) ? -1.0 : 1.0;
  ProfileValue a2, b2, c2;
  if (xo / zone_lo() < 2) bubble_profiles(bubble, t, xo, &a2, &b2, &c2);
  return glue_generic(x, xo, sgn, zone_lo(), square_profile(orbifold.B(x)), b2);
}

ProfileValue GluedRadialMetric::C2(double x) const {
  const double xo = two_sided ? std::min(x, orbifold.x_max - x) : x;
  const double sgn = (two_sided && x > 0.5 * orbifold.x_max) ? -1.0 : 1.0;
  ProfileValue a2, b2, c2;
  if (xo / zone_lo() < 2) bubble_profiles(bubble, t, xo, &a2, &b2, &c2);
  return glue_generic(x, xo, sgn, zone_lo(), square_profile(orbifold.C(x)), c2);
}

RadialMetric GluedRadialMetric::as_radial_metric() const {
  RadialMetric m;
  m.name = "glued:" + orbifold.name + "+" + bubble.name;
  m.gamma_order = orbifold.gamma_order;
  m.x_min = x_chart_min();
  m.x_max = x_max();
  m.closure = "none";
  const GluedRadialMetric* self = this;
  m.A = [self](double x) { return sqrt_profile(self->A2(x)); };
  m.B = [self](double x) { return sqrt_profile(self->B2(x)); };
  m.C = [self](double x) { return sqrt_profile(self->C2(x)); };
  return m;
}

GluedRadialMetric build_gluing(const RadialMetric& orbifold,
                               const ALEModel& bubble, double t, double lambda,
                               bool two_sided, double eps0) {
  if (!(t > 0) || t >= std::pow(eps0, 4.0))
    throw GluingError("gluing scale must satisfy 0 < t < eps0^4");
  if (bubble.kind == ALEModel::Kind::EguchiHanson && bubble.profile) {
    double res = ricci_flat_residual(*bubble.profile, 1e-3, 10.0, 60);
    if (res > 1e-7) throw GluingError("bubble is not Ricci-flat");
  }
  GluedRadialMetric g;
  g.orbifold = orbifold;
  g.bubble = bubble;
  g.t = t;
  g.lambda = lambda;
  g.two_sided = two_sided;
  return g;
}

Eigen::Vector4d glued_ricci_residual(const GluedRadialMetric& g, double x) {
  RadialMetric m = g.as_radial_metric();
  FrameCurvature c = warped_curvature(m, x);
  return c.ric_diag - Eigen::Vector4d::Constant(g.lambda);
}

// --- weighted norms ----------------------------------------------------------

WeightedNormBreakdown weighted_norm(
    const GluedRadialMetric& g,
    const std::function<Eigen::Vector4d(double)>& frame_field,
    const WeightedNormSpec& spec) {
  WeightedNormBreakdown out;
  const double T = g.t;
  const double m = spec.radial_power;
  const double l = spec.conformal_weight;
  const double zone = g.zone_lo();

  // log grid over the chart range
  const int N = spec.shells;
  const double x0 = g.x_chart_min(), x1 = 0.999 * g.x_max();
  std::vector<double> xs(N + 1), val(N + 1), dist(N + 1, 0.0);
  std::vector<Eigen::Vector4d> f(N + 1);
  RadialMetric rm = g.as_radial_metric();
  for (int i = 0; i <= N; ++i) {
    xs[i] = x0 * std::pow(x1 / x0, double(i) / N);
    f[i] = frame_field(xs[i]);
    val[i] = f[i].norm();  // |s|_{g^D} in the orthonormal frame
    if (i > 0)
      dist[i] = dist[i - 1] +
                0.5 * (rm.A(xs[i]).f + rm.A(xs[i - 1]).f) * (xs[i] - xs[i - 1]);
  }

  // partition weights: chi_o = chi(x / t^{1/4}), chi_b = 1 - chi_o
  auto chi_o = [&](double x) {
    const double xo = g.two_sided ? std::min(x, g.orbifold.x_max - x) : x;
    return cutoff_chi(xo / zone);
  };

  auto orbifold_weight = [&](double x, double v) {
    // sup r_o^{-beta} r_o^{-m} |s|_{g_o}; on the orbifold side g^D = g_o
    return std::pow(x, -spec.beta - m) * v;
  };
  auto bubble_weight = [&](double x, double v) {
    // T^{(l-m)/2} r_b^{-beta-m} |s|_{g_b}; r_b = x/sqrt(T),
    // |s|_{g_b} = T^{l/2-l}..: for conformal weight l, |s|_{T g_b} =
    // T^{l/2}|s|_{g_b}, and the field is measured in g^D = T g_b, so
    // |s|_{g_b} = T^{-l/2} |s|_{g^D}
    const double rb = x / std::sqrt(T);
    return std::pow(T, 0.5 * (l - m)) * std::pow(rb, -spec.beta - m) *
           std::pow(T, -0.5 * l) * v;
  };

  for (int i = 0; i <= N; ++i) {
    const double co = chi_o(xs[i]);
    if (co > 0)
      out.orbifold_piece = std::max(out.orbifold_piece, orbifold_weight(xs[i], co * val[i]));
    if (co < 1)
      out.bubble_piece =
          std::max(out.bubble_piece, bubble_weight(xs[i], (1 - co) * val[i]));
  }

  // deep-bubble closed-form contribution for the residual field (constant
  // frame entries): extend the weight monotonically to the bolt
  {
    const double x = x0;
    const double co = chi_o(x);
    (void)co;
    // weight r_b^{-beta-m} with -beta-m > 0 decreases toward the bolt, so the
    // grid boundary dominates; nothing to add
  }

  // Hoelder seminorm by radial pair sampling: for the piece norms we weight
  // pairs by the local r^{k+alpha}-factor at the midpoint
  if (spec.alpha > 0) {
    for (int i = 0; i + 1 <= N; ++i) {
      for (int j = i + 1; j <= N; ++j) {
        const double d = dist[j] - dist[i];
        const double xm = std::sqrt(xs[i] * xs[j]);
        if (d <= 0) continue;
        // fixed, resolution-independent pair window inside the injectivity
        // scale ~ r_D: separations in [0.02, 0.5] x r_D
        if (d > 0.5 * xm) break;
        if (d < 0.02 * xm) continue;
        const double quot = (f[j] - f[i]).norm() / std::pow(d, spec.alpha);
        const double co = chi_o(xm);
        double v = 0;
        if (co > 0.5)
          v = std::pow(xm, -spec.beta - m + spec.alpha) * quot;
        else {
          const double rb = xm / std::sqrt(T);
          // pair distance measured in g_b is d/sqrt(T); quotient rescales
          const double quot_b = (f[j] - f[i]).norm() * std::pow(T, -0.5 * l) /
                                std::pow(d / std::sqrt(T), spec.alpha);
          v = std::pow(T, 0.5 * (l - m)) *
              std::pow(rb, -spec.beta - m + spec.alpha) * quot_b;
        }
        out.seminorm_piece = std::max(out.seminorm_piece, v);
      }
    }
  }

  out.total = out.orbifold_piece + out.bubble_piece + out.seminorm_piece;
  return out;
}

// --- studies -----------------------------------------------------------------

ResidualScalingResult residual_scaling_study(const RadialMetric& orbifold,
                                             const ALEModel& bubble,
                                             const std::vector<double>& t_list,
                                             double beta, double lambda,
                                             int shells) {
  ResidualScalingResult res;
  res.beta = beta;
  auto norm_at = [&](double t, int nsh) {
    GluedRadialMetric g = build_gluing(orbifold, bubble, t, lambda);
    WeightedNormSpec spec;
    spec.beta = beta;
    spec.alpha = 0.5;
    spec.radial_power = -2;
    spec.conformal_weight = -2;
    spec.shells = nsh;
    auto field = [&](double x) { return glued_ricci_residual(g, x); };
    return weighted_norm(g, field, spec).total;
  };
  for (double t : t_list) {
    ResidualScalingRow row;
    row.t = t;
    row.norm = norm_at(t, shells);
    const double refined = norm_at(t, 2 * shells);
    row.error_bar = std::abs(refined - row.norm);
    res.rows.push_back(row);
  }
  for (size_t i = 0; i + 1 < res.rows.size(); ++i)
    if (res.rows[i + 1].t < res.rows[i].t && res.rows[i + 1].norm > res.rows[i].norm)
      throw GluingError("residual norm not monotone in t: refine the grid");

  auto fit = [&](int nsh) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = int(t_list.size());
    for (int i = 0; i < n; ++i) {
      const double X = std::log(t_list[i]);
      const double Y = std::log(norm_at(t_list[i], nsh));
      sx += X; sy += Y; sxx += X * X; sxy += X * Y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  res.fitted_exponent = fit(shells);
  res.grid_drift = std::abs(fit(2 * shells) - res.fitted_exponent);
  res.pass = res.fitted_exponent >= (2.0 - beta) / 4.0 - 0.05;
  return res;
}

PinchingResult pinching_study(const std::vector<double>& t_list,
                              const std::vector<double>& p_list,
                              double eh_scale, int shells) {
  PinchingResult out;
  RadialMetric orb = round_sphere(2.0);
  ALEModel eh = make_eguchi_hanson(eh_scale);
  out.sup_min = std::numeric_limits<double>::infinity();

  for (double t : t_list) {
    GluedRadialMetric g = build_gluing(orb, eh, t, 3.0, /*two_sided=*/true);
    PinchingRow row;
    row.t = t;

    // deep-bubble region (x < chart min): residual is exactly -3 g there,
    // |Ric - 3g|_g = 3 |g|_g = 6, with volume from the EH closed form
    const double x_in = g.x_chart_min();
    const double s_in = x_in / std::sqrt(t);
    const double r_in = eh_cone_radius(eh.scale, EHChart{eh.scale}.xi_of_s(s_in));
    const double vol_link = 2.0 * kPi * kPi / 2.0;
    const double vol_deep =
        t * t * vol_link *
        (std::pow(r_in, 4.0) - std::pow(eh.scale, 4.0)) / 4.0;

    // grid part (both sides): 4D volume element A B C^2 dx * vol_link
    const double x1 = g.x_max() - g.x_chart_min();
    RadialMetric rm = g.as_radial_metric();
    const int N = shells;
    std::map<double, double> lp_acc;
    for (double p : p_list) lp_acc[p] = 2.0 * vol_deep * std::pow(6.0, p);
    double sup = 6.0;
    for (int i = 0; i < N; ++i) {
      // log grid from each end toward the middle, symmetric metric
      const double fr = double(i) / N;
      const double x = g.x_chart_min() *
                       std::pow((0.5 * g.x_max()) / g.x_chart_min(), fr);
      for (double xx : {x, g.x_max() - x}) {
        // keep clear of both bolt charts
        if (xx < g.x_chart_min() || g.x_max() - xx < g.x_chart_min()) continue;
        FrameCurvature c = warped_curvature(rm, xx);
        Eigen::Vector4d resid = c.ric_diag - Eigen::Vector4d::Constant(3.0);
        const double v = resid.norm();
        sup = std::max(sup, v);
        const double xnext = g.x_chart_min() *
                             std::pow((0.5 * g.x_max()) / g.x_chart_min(),
                                      double(i + 1) / N);
        const double dx = (xnext - x);
        const double dv = rm.A(xx).f * rm.B(xx).f * rm.C(xx).f * rm.C(xx).f *
                          vol_link * dx;
        for (double p : p_list) lp_acc[p] += std::pow(v, p) * dv;
      }
    }
    for (double p : p_list) row.lp[p] = std::pow(lp_acc[p], 1.0 / p);
    row.sup = sup;
    out.rows.push_back(row);
    out.sup_min = std::min(out.sup_min, sup);
    out.sup_max = std::max(out.sup_max, sup);
  }
  for (size_t i = 0; i + 1 < out.rows.size(); ++i)
    for (auto& [p, v] : out.rows[i].lp)
      if (out.rows[i + 1].lp[p] >= v) out.lp_monotone = false;
  return out;
}

SinWarpReport sin_warp_report(double eps, double bwarp, double gamma_order) {
  if (bwarp * eps > 0.5)
    std::fprintf(stderr, "[sin-warp] warning: b*eps = %g not small\n",
                 bwarp * eps);
  RadialMetric m = sin_warp_metric(eps, bwarp, gamma_order);
  SinWarpReport rep;
  rep.min_sectional = std::numeric_limits<double>::infinity();
  rep.max_sectional = -rep.min_sectional;
  const int N = 8000;  // log grid: the inner plateau sits at r << 1
  for (int i = 1; i < N; ++i) {
    const double x = m.x_min * std::pow(m.x_max / m.x_min, double(i) / N);
    FrameCurvature c = warped_curvature(m, x);
    rep.min_sectional = std::min(rep.min_sectional, c.min_frame_sectional());
    rep.max_sectional =
        std::max(rep.max_sectional, std::max(c.sec_radial.maxCoeff(),
                                             c.sec_orbital.maxCoeff()));
    if (x < 0.8 * eps) rep.inner_sectional = c.sec_radial(0);
    if (x > 2.0 * bwarp * eps && rep.outer_sectional == 0)
      rep.outer_sectional = c.sec_radial(0);
  }
  rep.measured_C = (1.0 - rep.min_sectional) * std::log(bwarp);
  return rep;
}

}  // namespace desing

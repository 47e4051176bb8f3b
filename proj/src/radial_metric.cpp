#include "desing/radial_metric.hpp"

#include <cmath>
#include <stdexcept>

namespace desing {

double RadialMetric::area_radius(double x) const {
  return std::cbrt(B(x).f * C(x).f * C(x).f);
}

namespace {

struct FrameData {
  double a1, a2, a3;  // log-derivatives f_i'/f_i in arc-length time
  double k1, k2, k3;  // 2 f_i / (f_j f_k)
  double c1, c2, c3;  // connection rotation coefficients
  double dd1, dd2, dd3;  // f_i'' / f_i (arc-length)
};

FrameData frame_data(const RadialMetric& m, double x) {
  const ProfileValue A = m.A(x), B = m.B(x), C2 = m.C(x);
  const double iA = 1.0 / A.f;
  // arc-length derivatives: f' = f_x / A; f'' = (f_xx A - f_x A_x)/A^3
  auto d1 = [&](const ProfileValue& f) { return f.df * iA; };
  auto d2 = [&](const ProfileValue& f) {
    return (f.ddf * A.f - f.df * A.df) * iA * iA * iA;
  };
  FrameData d;
  d.a1 = d1(B) / B.f;
  d.a2 = d1(C2) / C2.f;
  d.a3 = d.a2;
  d.dd1 = d2(B) / B.f;
  d.dd2 = d2(C2) / C2.f;
  d.dd3 = d.dd2;
  d.k1 = 2.0 * B.f / (C2.f * C2.f);
  d.k2 = 2.0 / B.f;
  d.k3 = d.k2;
  d.c1 = 0.5 * (d.k2 + d.k3 - d.k1);
  d.c2 = 0.5 * (d.k3 + d.k1 - d.k2);
  d.c3 = 0.5 * (d.k1 + d.k2 - d.k3);
  return d;
}

}  // namespace

FrameCurvature warped_curvature(const RadialMetric& m, double x) {
  const FrameData d = frame_data(m, x);
  FrameCurvature out;
  out.sec_radial = Eigen::Vector3d(-d.dd1, -d.dd2, -d.dd3);
  out.sec_orbital(0) = d.c1 * d.k1 - d.a2 * d.a3 - d.c2 * d.c3;  // K(e2,e3)
  out.sec_orbital(1) = d.c2 * d.k2 - d.a3 * d.a1 - d.c3 * d.c1;  // K(e3,e1)
  out.sec_orbital(2) = d.c3 * d.k3 - d.a1 * d.a2 - d.c1 * d.c2;  // K(e1,e2)
  out.mixed(0) = d.a1 * d.k1 - d.c3 * d.a2 - d.c2 * d.a3;
  out.mixed(1) = d.a2 * d.k2 - d.c1 * d.a3 - d.c3 * d.a1;
  out.mixed(2) = d.a3 * d.k3 - d.c2 * d.a1 - d.c1 * d.a2;
  out.ric_diag(0) = out.sec_radial.sum();
  for (int i = 0; i < 3; ++i) {
    double s = out.sec_radial(i);
    for (int j = 0; j < 3; ++j)
      if (j != i) s += out.sec_orbital(j);
    out.ric_diag(i + 1) = s;
  }
  out.scal = 2.0 * (out.sec_radial.sum() + out.sec_orbital.sum());
  return out;
}

double curvature_consistency_defect(const RadialMetric& m, double x) {
  // R_{0i jk} computed from Omega^j_k must match c_i' + c_i a_i
  const double h = std::max(1e-6, 1e-6 * std::abs(x));
  const FrameData d0 = frame_data(m, x);
  const FrameData dp = frame_data(m, x + h);
  const FrameData dm = frame_data(m, x - h);
  const double iA = 1.0 / m.A(x).f;
  FrameCurvature base = warped_curvature(m, x);
  double worst = 0;
  const double cp[3] = {dp.c1, dp.c2, dp.c3};
  const double cm[3] = {dm.c1, dm.c2, dm.c3};
  const double c0[3] = {d0.c1, d0.c2, d0.c3};
  const double a0[3] = {d0.a1, d0.a2, d0.a3};
  for (int i = 0; i < 3; ++i) {
    // second Cartan route: R_{jk 0i} = -(c_i' + c_i a_i)
    double cprime = (cp[i] - cm[i]) / (2 * h) * iA;
    double alt = -(cprime + c0[i] * a0[i]);
    worst = std::max(worst, std::abs(alt - base.mixed(i)));
  }
  return worst;
}

double FrameCurvature::weyl_plus_sq() const {
  Eigen::Matrix3d W = Rplus() - Eigen::Matrix3d::Identity() * (scal / 12.0);
  return W.squaredNorm();
}

double FrameCurvature::weyl_minus_sq() const {
  Eigen::Matrix3d W = Rminus() - Eigen::Matrix3d::Identity() * (scal / 12.0);
  return W.squaredNorm();
}

double FrameCurvature::riem_sq() const {
  return scal * scal / 24.0 + weyl_plus_sq() + weyl_minus_sq() +
         2.0 * ric0_block().squaredNorm();
}

RadialMetric flat_cone(double gamma_order, double x_min, double x_max) {
  RadialMetric m;
  m.A = constant_profile(1.0);
  m.B = m.C = [](double x) { return ProfileValue{x, 1, 0}; };
  m.x_min = x_min;
  m.x_max = x_max;
  m.name = "flat-cone";
  m.gamma_order = gamma_order;
  m.closure = "cone";
  m.truncated_end = true;
  return m;
}

RadialMetric round_sphere(double gamma_order, double x_min, double x_max) {
  RadialMetric m;
  m.A = constant_profile(1.0);
  m.B = m.C = [](double x) {
    return ProfileValue{std::sin(x), std::cos(x), -std::sin(x)};
  };
  m.x_min = x_min;
  m.x_max = x_max;
  m.name = "round-sphere";
  m.gamma_order = gamma_order;
  m.closure = gamma_order > 1 ? "cone" : "axis";
  return m;
}

double eh_cone_radius(double a, double x) {
  return a * std::pow(1.0 + x * x, 0.25);
}

double eh_x_of_cone_radius(double a, double r) {
  const double q = std::pow(r / a, 4.0) - 1.0;
  if (q < 0) throw std::invalid_argument("radius inside the bolt");
  return std::sqrt(q);
}

RadialMetric eguchi_hanson_profile(double a, double x_max_cone_radius) {
  // r = a (1+x^2)^{1/4}; the profiles and both derivatives are smooth at the
  // bolt x = 0, which keeps the curvature formulas cancellation-free there.
  //   A = (a/2)(1+x^2)^{-1/4}
  //   B = a x (1+x^2)^{-1/4}
  //   C = a (1+x^2)^{+1/4}
  RadialMetric m;
  auto pw = [](double a_, double p, double x) {
    const double s = 1.0 + x * x;
    const double f = a_ * std::pow(s, p);
    const double df = a_ * p * std::pow(s, p - 1) * 2 * x;
    const double ddf =
        a_ * p * (2 * std::pow(s, p - 1) + (p - 1) * std::pow(s, p - 2) * 4 * x * x);
    return ProfileValue{f, df, ddf};
  };
  m.A = [a, pw](double x) { return pw(a / 2, -0.25, x); };
  m.B = [a, pw](double x) {
    ProfileValue g = pw(a, -0.25, x);  // B = x * g
    return ProfileValue{x * g.f, g.f + x * g.df, 2 * g.df + x * g.ddf};
  };
  m.C = [a, pw](double x) { return pw(a, 0.25, x); };
  m.x_min = 0.0;
  m.x_max = eh_x_of_cone_radius(a, x_max_cone_radius * a);
  m.name = "eguchi-hanson";
  m.gamma_order = 2.0;
  m.closure = "bolt";
  m.truncated_end = true;
  return m;
}

RadialMetric sin_warp_metric(double eps, double bwarp, double gamma_order) {
  if (!(bwarp > 1.0) || !(eps > 0))
    throw std::invalid_argument("sin-warp needs b > 1, eps > 0");
  // chi = 1 on [0, eps], 0 beyond b*eps, chi(r) = log(b eps / r)/log(b)
  // in between: |chi^{(k)}| = O(1/(log b) eps^-k) on the transition zone.
  const double lb = std::log(bwarp);
  RadialMetric m;
  m.A = constant_profile(1.0);
  auto warp = [eps, bwarp, lb](double r) {
    // quintic smoothstep of the log ramp keeps chi C^2 with
    // |chi^{(k)}| = O(1/(log b) r^-k) on the transition zone
    double chi, dchi, ddchi;
    if (r <= eps) {
      chi = 1; dchi = 0; ddchi = 0;
    } else if (r >= bwarp * eps) {
      chi = 0; dchi = 0; ddchi = 0;
    } else {
      const double t = std::log(bwarp * eps / r) / lb;  // 1 -> 0 across zone
      const double dt = -1.0 / (lb * r);
      const double ddt = 1.0 / (lb * r * r);
      const double S = t * t * t * (10 + t * (-15 + 6 * t));
      const double dS = 30 * t * t * (1 - t) * (1 - t);
      const double ddS = 60 * t * (1 - t) * (1 - 2 * t);
      chi = S;
      dchi = dS * dt;
      ddchi = ddS * dt * dt + dS * ddt;
    }
    const double lam = 1.0 + chi;
    const double u = lam * r;
    const double du = lam + r * dchi;
    const double ddu = 2 * dchi + r * ddchi;
    // phi = sin(u)/lam
    const double S = std::sin(u), Cc = std::cos(u);
    const double f = S / lam;
    const double df = (Cc * du * lam - S * dchi) / (lam * lam);
    const double ddf = (Cc * ddu - S * du * du) / lam -
                       2.0 * Cc * du * dchi / (lam * lam) -
                       S * ddchi / (lam * lam) +
                       2.0 * S * dchi * dchi / (lam * lam * lam);
    return ProfileValue{f, df, ddf};
  };
  m.B = m.C = warp;
  m.x_min = 1e-7;
  m.x_max = 3.141592653589793 / 2.0;
  m.name = "sin-warp";
  m.gamma_order = gamma_order;
  m.closure = "cone";
  return m;
}

}  // namespace desing

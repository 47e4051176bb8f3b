#include <random>

#include "doctest.h"

#include "desing/obstruction.hpp"

using namespace desing;

TEST_CASE("sphere jet matches the closed form -(rho^4/3) sum alpha_i^2") {
  QuadraticJet s = sphere_jet();
  CHECK(s.lambda == 3.0);
  // -(rho^4/3) sum alpha_i^2 has components -(r^2 d_ij - x_i x_j)/3
  std::mt19937 rng(1);
  std::normal_distribution<double> N(0, 1);
  for (int t = 0; t < 10; ++t) {
    Vec4 x(N(rng), N(rng), N(rng), N(rng));
    Eigen::Matrix4d H = s.component_matrix(x);
    Eigen::Matrix4d expct =
        -(x.squaredNorm() * Eigen::Matrix4d::Identity() - x * x.transpose()) / 3.0;
    CHECK((H - expct).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(linearized_ricci_check(s) < 1e-12);
  CHECK(linearized_ricci_check(hyperbolic_jet()) < 1e-12);
  CHECK(linearized_ricci_check(flat_jet()) < 1e-12);
}

TEST_CASE("linearized Ricci compatibility holds for all Einstein jets") {
  std::mt19937 rng(2);
  for (int t = 0; t < 20; ++t) {
    QuadraticJet j = random_einstein_jet(rng, t % 3 == 0);
    CHECK(linearized_ricci_check(j) < 1e-10);
  }
  // H_00 = x_1^2 gives dRic = diag(-1,-1,0,0), not proportional to g
  QuadraticJet bad;
  bad.T[0](1, 1) = 1.0;
  bad.lambda = 0;
  CHECK(linearized_ricci_check(bad) > 1e-3);
}

TEST_CASE("linearized Ricci agrees with finite differences of Ric(g_e+eps H)") {
  // central finite-difference Ricci of g = delta + eps H2 at a point:
  // Ric(g)_ij ~ eps * dRic(H2)_ij + O(eps^2)
  std::mt19937 rng(7);
  std::normal_distribution<double> N(0, 1);
  auto num_ricci = [](const std::function<Eigen::Matrix4d(const Vec4&)>& g,
                      const Vec4& x0) {
    const double h = 1e-4;
    // Christoffels by central differences
    auto dg = [&](int k, const Vec4& x) {
      Vec4 xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      return ((g(xp) - g(xm)) / (2 * h)).eval();
    };
    Eigen::Matrix4d ginv = g(x0).inverse();
    double Gamma[4][4][4];
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double s = 0;
          for (int b = 0; b < 4; ++b)
            s += ginv(a, b) *
                 (dg(i, x0)(b, j) + dg(j, x0)(b, i) - dg(b, x0)(i, j));
          Gamma[a][i][j] = 0.5 * s;
        }
    // dGamma by nested differences
    auto Gamma_at = [&](const Vec4& x, int a, int i, int j) {
      Eigen::Matrix4d gv = g(x).inverse();
      double s = 0;
      for (int b = 0; b < 4; ++b) {
        Vec4 xp = x, xm = x;
        double d1, d2, d3;
        xp = x; xp(i) += h; xm = x; xm(i) -= h;
        d1 = (g(xp)(b, j) - g(xm)(b, j)) / (2 * h);
        xp = x; xp(j) += h; xm = x; xm(j) -= h;
        d2 = (g(xp)(b, i) - g(xm)(b, i)) / (2 * h);
        xp = x; xp(b) += h; xm = x; xm(b) -= h;
        d3 = (g(xp)(i, j) - g(xm)(i, j)) / (2 * h);
        s += gv(a, b) * (d1 + d2 - d3);
      }
      return 0.5 * s;
    };
    Eigen::Matrix4d ric;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0;
        for (int a = 0; a < 4; ++a) {
          Vec4 xp = x0, xm = x0;
          xp(a) += h;
          xm(a) -= h;
          s += (Gamma_at(xp, a, i, j) - Gamma_at(xm, a, i, j)) / (2 * h);
          Vec4 yp = x0, ym = x0;
          yp(j) += h;
          ym(j) -= h;
          s -= (Gamma_at(yp, a, i, a) - Gamma_at(ym, a, i, a)) / (2 * h);
        }
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            s += Gamma[a][a][b] * Gamma[b][i][j] - Gamma[a][j][b] * Gamma[b][i][a];
        ric(i, j) = s;
      }
    return ric;
  };

  for (int trial = 0; trial < 3; ++trial) {
    QuadraticJet j = random_einstein_jet(rng, false);
    const double eps = 1e-4;
    Vec4 x0(0.3 * N(rng), 0.3 * N(rng), 0.3 * N(rng), 0.3 * N(rng));
    auto g = [&](const Vec4& x) {
      return (Eigen::Matrix4d::Identity() + eps * j.component_matrix(x)).eval();
    };
    Eigen::Matrix4d ric_fd = num_ricci(g, x0);
    RationalSym2 dr = linearized_ricci_flat(j.as_field());
    Eigen::Matrix4d ric_lin = eps * dr.eval(x0);
    // agreement to O(eps^2) + FD truncation
    CHECK((ric_fd - ric_lin).cwiseAbs().maxCoeff() < 50 * eps * eps + 1e-5);
  }
}

TEST_CASE("jet/curvature round trip and strict-mode rejection") {
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) {
    std::normal_distribution<double> N(0, 1);
    double lam = 3 * N(rng);
    Eigen::Matrix3d Wp, Wm;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        Wp(i, j) = Wp(j, i) = N(rng);
        Wm(i, j) = Wm(j, i) = N(rng);
      }
    Wp -= Eigen::Matrix3d::Identity() * Wp.trace() / 3;
    Wm -= Eigen::Matrix3d::Identity() * Wm.trace() / 3;
    CurvatureOperator R = CurvatureOperator::from_weyl(lam, Wp, Wm);
    QuadraticJet j = jet_from_curvature(R, lam);
    CurvatureOperator R2 = curvature_from_jet(j);
    CHECK((R.Rplus - R2.Rplus).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((R.Rminus - R2.Rminus).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(R2.ric0.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(R.scal - R2.scal) < 1e-9);
  }

  // R = 0 -> H2 = 0
  QuadraticJet z = jet_from_curvature(CurvatureOperator{}, 0.0);
  CHECK(z.max_abs() == 0.0);

  // R x hyperbolic: Ric = diag(0,-2,-2,-2): not Einstein
  // build from sectional curvatures: R(e_i,e_j) planes of H^3 have K=-1
  Curv4 T{};
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j) {
      if (i == j) continue;
      T[i][j][i][j] = -1;
      T[i][j][j][i] = 1;
    }
  CurvatureOperator R = curvature_operator_from_tensor(T);
  CHECK_THROWS_AS(jet_from_curvature(R, -2.0, true), JetError);
}

TEST_CASE("curvature invariants of the model operators") {
  CurvatureOperator s4 = CurvatureOperator::round_sphere(1.0);
  auto dt = det_rplus_test(s4);
  CHECK(std::abs(dt.det_rplus - 1.0) < 1e-14);
  CHECK(std::abs(dt.det_rminus - 1.0) < 1e-14);
  CHECK(std::abs(dt.det_full - dt.det_rplus * dt.det_rminus) < 1e-14);
  CHECK(std::abs(s4.Rplus.trace() - s4.scal / 4) < 1e-14);

  auto flat = det_rplus_test(CurvatureOperator{});
  CHECK(flat.det_rplus == 0.0);

  // rank-2 R+ by planting a zero eigenvalue
  std::mt19937 rng(11);
  QuadraticJet j = random_einstein_jet(rng, true);
  CurvatureOperator R = curvature_from_jet(j);
  auto dt2 = det_rplus_test(R);
  CHECK(std::abs(dt2.det_rplus) < 1e-10);
  CHECK(std::abs(dt2.det_rminus) > 1e-6);
}

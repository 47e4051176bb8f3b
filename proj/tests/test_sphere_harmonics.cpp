#include <random>

#include "doctest.h"

#include "desing/sphere_harmonics.hpp"

using namespace desing;

namespace {
const double kPi = 3.14159265358979323846264338327950288;
}

TEST_CASE("quadrature integrates monomials exactly") {
  auto q0 = build_quadrature(0);
  double total = 0;
  for (double w : q0.weights) total += w;
  CHECK(std::abs(total - 2 * kPi * kPi) < 1e-12);

  auto q2 = build_quadrature(2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0;
      for (size_t n = 0; n < q2.nodes.size(); ++n)
        s += q2.weights[n] * q2.nodes[n](i) * q2.nodes[n](j);
      const double expct = (i == j) ? 2 * kPi * kPi / 4 : 0.0;
      CHECK(std::abs(s - expct) < 1e-12);
    }

  // degree-11 battery against the closed-form beta integrals
  auto q11 = build_quadrature(11);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> D(0, 11);
  for (int trial = 0; trial < 40; ++trial) {
    std::array<int, 4> e{D(rng), 0, 0, 0};
    e[1] = D(rng) % (12 - e[0]);
    e[2] = D(rng) % (12 - e[0] - e[1]);
    e[3] = std::min(D(rng), 11 - e[0] - e[1] - e[2]);
    double s = 0;
    for (size_t n = 0; n < q11.nodes.size(); ++n) {
      double m = q11.weights[n];
      for (int i = 0; i < 4; ++i)
        for (int p = 0; p < e[i]; ++p) m *= q11.nodes[n](i);
      s += m;
    }
    CHECK(std::abs(s - sphere_monomial_integral(e)) < 1e-11);
  }

  CHECK_THROWS(build_quadrature(41));
}

TEST_CASE("invariant harmonic bases: dimensions and orthonormality") {
  GroupAction z2 = make_cyclic_su2(2);
  GroupAction triv = make_trivial_group();

  CHECK(invariant_harmonic_basis(z2, 1).empty());
  CHECK(invariant_harmonic_basis(triv, 2).size() == 9);
  auto b0 = invariant_harmonic_basis(z2, 0);
  REQUIRE(b0.size() == 1);
  // the constant 1/sqrt(2 pi^2)
  CHECK(std::abs(std::abs(b0[0].eval(Vec4(1, 0, 0, 0))) -
                 1.0 / std::sqrt(2 * kPi * kPi)) < 1e-12);

  for (int k = 0; k <= 4; ++k) {
    auto bk = invariant_harmonic_basis(triv, k);
    CHECK(int(bk.size()) == (k + 1) * (k + 1));
    for (size_t a = 0; a < bk.size(); ++a)
      for (size_t b = a; b < bk.size(); ++b) {
        double ip = sphere_l2_inner(bk[a], bk[b]);
        CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-10);
      }
  }

  // dimension counts vs (k+1)^2 / |Gamma| asymptotics for cyclic groups
  for (int n : {2, 3, 4}) {
    GroupAction g = make_cyclic_su2(n);
    int total = 0, full = 0;
    for (int k = 0; k <= 12; ++k) {
      total += int(invariant_harmonic_basis(g, k).size());
      full += (k + 1) * (k + 1);
    }
    CHECK(std::abs(double(total) / full - 1.0 / n) < 0.08);
  }
}

TEST_CASE("restrictions have Laplace eigenvalue k(k+2)") {
  // finite-difference ambient Laplacian of the degree-0 extension, with
  // Richardson refinement; Delta_S phi = -k(k+2) phi
  GroupAction z2 = make_cyclic_su2(2);
  auto quad = build_quadrature(8);
  for (int k : {2, 4}) {
    auto basis = invariant_harmonic_basis(z2, k);
    REQUIRE(!basis.empty());
    const Poly4& phi = basis[0];
    double l2 = 0, l2phi = 0;
    for (size_t n = 0; n < quad.nodes.size(); ++n) {
      const Vec4& x = quad.nodes[n];
      auto lap_fd = [&](double h) {
        double acc = 0;
        for (int i = 0; i < 4; ++i) {
          Vec4 xp = x, xm = x;
          xp(i) += h;
          xm(i) -= h;
          auto ext = [&](const Vec4& y) { return phi.eval(y / y.norm()); };
          acc += (ext(xp) - 2 * ext(x) + ext(xm)) / (h * h);
        }
        return acc;
      };
      const double l1 = lap_fd(1e-3), l2h = lap_fd(5e-4);
      const double lap = (4 * l2h - l1) / 3.0;  // Richardson
      const double resid = lap + k * (k + 2) * phi.eval(x);
      l2 += quad.weights[n] * resid * resid;
      l2phi += quad.weights[n] * phi.eval(x) * phi.eval(x);
    }
    CHECK(std::sqrt(l2) / std::sqrt(l2phi) < 1e-7);
  }
}

TEST_CASE("decompose: constants, orthonormality, Parseval, round trip") {
  GroupAction z2 = make_cyclic_su2(2);
  auto quad = build_quadrature(16);

  // constant tensor -> only k=0
  std::vector<Eigen::Matrix4d> data(quad.nodes.size());
  Eigen::Matrix4d Cst;
  Cst << 1, 2, 3, 4, 2, 5, 6, 7, 3, 6, 8, 9, 4, 7, 9, 10;
  for (auto& d : data) d = Cst;
  auto mc = decompose(data, quad, z2, 6);
  for (auto& [key, v] : mc.coef)
    if (key.k > 0) CHECK(std::abs(v) < 1e-10);
  CHECK(mc.parseval_defect() < 1e-8);

  // single harmonic -> unit coefficient vector
  auto b4 = invariant_harmonic_basis(z2, 4);
  REQUIRE(!b4.empty());
  for (size_t n = 0; n < quad.nodes.size(); ++n) {
    data[n].setZero();
    data[n](1, 2) = data[n](2, 1) = b4[0].eval(quad.nodes[n]);
  }
  auto mc2 = decompose(data, quad, z2, 6);
  double unit = mc2.coef.count({5, 4, 0}) ? mc2.coef[{5, 4, 0}] : 0.0;
  CHECK(std::abs(unit - 1.0) < 1e-10);
  CHECK(mc2.parseval_defect() < 1e-8);

  // non-invariant data rejected with the offending element named
  GroupAction z4 = make_u2_family(1, 2, 1);
  for (size_t n = 0; n < quad.nodes.size(); ++n) {
    data[n].setZero();
    const Vec4& x = quad.nodes[n];
    data[n](0, 0) = x(0);  // odd: not invariant
  }
  CHECK_THROWS_AS(decompose(data, quad, z4, 6), DecomposeError);

  // band-limited reconstruction round trip
  std::mt19937 rng(5);
  std::normal_distribution<double> N(0, 1);
  std::vector<Poly4> pool;
  for (int k : {0, 2, 4})
    for (auto& p : invariant_harmonic_basis(z2, k)) pool.push_back(p);
  std::vector<double> coefs;
  for (auto& p : pool) coefs.push_back(N(rng));
  std::vector<double> scalar(quad.nodes.size(), 0.0);
  for (size_t n = 0; n < quad.nodes.size(); ++n)
    for (size_t t = 0; t < pool.size(); ++t)
      scalar[n] += coefs[t] * pool[t].eval(quad.nodes[n]);
  auto mc3 = decompose_scalar(scalar, quad, z2, 6);
  std::vector<double> rec(quad.nodes.size(), 0.0);
  for (auto& [key, v] : mc3.coef) {
    auto bk = invariant_harmonic_basis(z2, key.k);
    for (size_t n = 0; n < quad.nodes.size(); ++n)
      rec[n] += v * bk[key.index].eval(quad.nodes[n]);
  }
  double err = 0;
  for (size_t n = 0; n < quad.nodes.size(); ++n)
    err = std::max(err, std::abs(rec[n] - scalar[n]));
  CHECK(err < 1e-10);
}

#include <random>

#include "doctest.h"

#include "desing/ale_models.hpp"

using namespace desing;

namespace {
const double kPi = 3.14159265358979323846264338327950288;
const double kVolS3Z2 = kPi * kPi;  // vol(S^3)/2
}

TEST_CASE("O^4 basis: closed forms, traceless, divergence-free, invariant") {
  DeformationBasis B = o4_basis();
  REQUIRE(B.fields.size() == 3);
  for (auto& f : B.fields) {
    CHECK(f.trace().num.max_abs_coef() < 1e-12);
    CHECK(divergence_delta(f).max_abs_num_coef() < 1e-12);
  }
  // leading coefficient 2 drho^2/rho^4
  Vec4 p(0.4, -0.3, 0.6, 0.2);
  p.normalize();
  CHECK(std::abs(double(p.transpose() * B.fields[0].eval(p) * p) - 2.0) < 1e-12);
  // homogeneity degree -4 and Z2-invariance by sampling
  GroupAction z2 = make_cyclic_su2(2);
  std::mt19937 rng(5);
  std::normal_distribution<double> N(0, 1);
  for (int t = 0; t < 10; ++t) {
    Vec4 x(N(rng), N(rng), N(rng), N(rng));
    for (auto& f : B.fields) {
      Eigen::Matrix4d v1 = f.eval(x), v2 = f.eval(2.0 * x);
      CHECK((16.0 * v2 - v1).cwiseAbs().maxCoeff() < 1e-10 * v1.cwiseAbs().maxCoeff());
      for (auto& g : z2.elements) {
        Eigen::Matrix4d w = g.transpose() * f.eval(g * x) * g;
        CHECK((w - v1).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("Kronheimer leading term") {
  DeformationBasis B = o4_basis();
  // zeta_1 = e_1, others 0 -> h = -O^4_1 / 2
  Eigen::MatrixXd zeta = Eigen::MatrixXd::Zero(3, 2);
  zeta(0, 0) = 1.0;
  RationalSym2 h = kronheimer_leading(zeta);
  RationalSym2 diff = h + B.fields[0] * 0.5;
  CHECK(diff.max_abs_num_coef() < 1e-12);

  // zeta = 0 -> 0
  CHECK(kronheimer_leading(Eigen::MatrixXd::Zero(3, 2)).max_abs_num_coef() == 0.0);

  // mixed terms are divergence-free with the paper's relative signs
  Eigen::MatrixXd z2 = Eigen::MatrixXd::Zero(3, 2);
  z2(0, 0) = 1.0;
  z2(1, 1) = 1.0;
  z2(1, 0) = 0.5;  // <z1,z2> = 0.5
  RationalSym2 h2 = kronheimer_leading(z2);
  CHECK(divergence_delta(h2).max_abs_num_coef() < 1e-11);
  CHECK(h2.trace().num.max_abs_coef() < 1e-11);

  // h depends on zeta only through the Gram matrix: an orthogonal map on
  // the R^k index leaves it unchanged
  std::mt19937 rng(7);
  std::normal_distribution<double> N(0, 1);
  Eigen::MatrixXd zr(3, 4);
  for (int i = 0; i < 12; ++i) zr(i / 4, i % 4) = N(rng);
  // orthogonal map on the R^k index (Householder reflection)
  Eigen::Vector4d w(N(rng), N(rng), N(rng), N(rng));
  w.normalize();
  Eigen::Matrix4d Q = Eigen::Matrix4d::Identity() - 2.0 * w * w.transpose();
  RationalSym2 ha = kronheimer_leading(zr);
  RationalSym2 hb = kronheimer_leading((zr * Q).eval());
  CHECK((ha - hb).max_abs_num_coef() < 1e-12);

  // a common rotation of the triple rotates the pure-alpha part by the
  // induced frame rotation: check through the rotation-invariant
  // eigenvalues of the alpha-block Gram coefficient matrix.  (The rho
  // drho.alpha cross terms admit no equivariant completion; see the
  // decisions ledger.)
  Eigen::Matrix3d R = Eigen::Quaterniond::UnitRandom().toRotationMatrix();
  Eigen::MatrixXd zr3(3, 3);
  for (int i = 0; i < 9; ++i) zr3(i / 3, i % 3) = N(rng);
  Eigen::Matrix3d Ga = (zr3 * zr3.transpose());
  Eigen::Matrix3d Gb = (R * zr3) * (R * zr3).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> ea(Ga), eb(Gb);
  CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lambda integrals: model jets and the section-8 identity chain") {
  GroupAction z2 = make_cyclic_su2(2);
  auto quad = build_quadrature(14);
  DeformationBasis B = o4_basis();

  auto lf = lambda_integrals(flat_jet(), B, z2, quad);
  CHECK(lf.cwiseAbs().maxCoeff() < 1e-12);

  // spherical: lambda_1 = +2 vol(S^3/Z2) (obstructed); hyperbolic mirrors
  auto ls = lambda_integrals(sphere_jet(), B, z2, quad);
  CHECK(std::abs(ls(0) - 2.0 * kVolS3Z2) < 1e-9);
  CHECK(std::abs(ls(1)) < 1e-12);
  CHECK(std::abs(ls(2)) < 1e-12);
  auto lh = lambda_integrals(hyperbolic_jet(), B, z2, quad);
  CHECK(std::abs(lh(0) + 2.0 * kVolS3Z2) < 1e-9);

  // linearity and scale equivariance
  std::mt19937 rng(3);
  QuadraticJet j1 = random_einstein_jet(rng, false);
  QuadraticJet j2 = random_einstein_jet(rng, true);
  auto l1 = lambda_integrals(j1, B, z2, quad);
  auto l2 = lambda_integrals(j2, B, z2, quad);
  auto l12 = lambda_integrals(j1 * 0.3 + j2 * (-1.7), B, z2, quad);
  CHECK((l12 - (0.3 * l1 - 1.7 * l2)).cwiseAbs().maxCoeff() < 1e-10);
  for (double s : {2.0, 10.0}) {
    auto lscaled = lambda_integrals(j1 * s, B, z2, quad);
    CHECK((lscaled - s * l1).cwiseAbs().maxCoeff() < 1e-9 * s);
  }

  // spaceform closed form vs quadrature with the o1 leading basis
  auto sd = scaling_deformation(eguchi_hanson_profile(1.0));
  DeformationBasis Bo1 = B;
  Bo1.fields[0] = B.fields[0] * sd.o4_coefficient;
  auto lh1 = lambda_integrals(hyperbolic_jet(), Bo1, z2, quad);
  const double closed = spaceform_obstruction(sd.b, SpaceForm::Hyperbolic, z2);
  CHECK(std::abs(lh1(0) - closed) < 0.01 * std::abs(closed));
  CHECK(std::abs(closed + 8.0 * sd.b * kVolS3Z2) < 1e-12);
  CHECK(spaceform_obstruction(0.0, SpaceForm::Spherical, z2) == 0.0);
  CHECK(std::abs(spaceform_obstruction(1.0, SpaceForm::Hyperbolic, z2) +
                 8.0 * kPi * kPi) < 1e-12);
}

TEST_CASE("lambda_hat: divergence gate, trivial bulk cases") {
  GroupAction z2 = make_cyclic_su2(2);
  auto quad = build_quadrature(14);
  DeformationBasis B = o4_basis();

  // sphere jet is not divergence-free: rejected
  CHECK_THROWS_AS(lambda_hat_integrals(sphere_jet(), Eigen::Matrix4d::Zero(), B,
                                       z2, quad, nullptr),
                  ObstructionError);

  // gauge-fix it first, then: O_o = 0 -> boundary term only = lambda
  auto gt = gauge_transfer_check(sphere_jet(), B, z2, quad);
  CHECK(gt.discrepancy < 1e-8);

  // O_o nonzero without model samples: rejected
  QuadraticJet divfree;  // zero jet is divergence-free
  Eigen::Matrix4d Oo = Eigen::Matrix4d::Identity() * 0.3;
  CHECK_THROWS_AS(lambda_hat_integrals(divfree, Oo, B, z2, quad, nullptr),
                  ObstructionError);

  // with EH samples: a traceless O_o pairs to zero by the orbit average
  // (the frame directions average to I/4 on every orbit); the trace channel
  // survives only through the r^-8 frame-scale corrections and vanishes as
  // the cutoff moves out (Richardson in the truncation radius as oracle)
  auto sd = scaling_deformation(eguchi_hanson_profile(1.0));
  Eigen::Matrix4d Otr = Eigen::Matrix4d::Zero();
  Otr(0, 0) = 1.0;
  Otr(1, 1) = -1.0;  // traceless
  auto lam_tf = lambda_hat_integrals(divfree, Otr, B, z2, quad, &sd.samples);
  CHECK(lam_tf.cwiseAbs().maxCoeff() < 1e-12);

  auto bulk_with_cut = [&](double rcut) {
    RadialObstructionSamples ss = sd.samples;
    ss.r_cut = rcut;
    return lambda_hat_integrals(divfree, Oo, B, z2, quad, &ss)(0);
  };
  const double b1 = bulk_with_cut(10.0), b2 = bulk_with_cut(20.0),
               b4 = bulk_with_cut(40.0);
  // integrand ~ r^-5: pushing the cutoff out shrinks the bulk by ~2^4
  CHECK(std::abs(b1) > 1e-12);
  CHECK(std::abs(b2) < std::abs(b1) / 4);
  CHECK(std::abs(b4) < std::abs(b2) / 4);
}

TEST_CASE("gauge transfer lambda_hat = lambda on 20 random Einstein jets") {
  GroupAction z2 = make_cyclic_su2(2);
  auto quad = build_quadrature(14);
  DeformationBasis B = o4_basis();
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    QuadraticJet j = random_einstein_jet(rng, t % 3 == 0);
    auto gt = gauge_transfer_check(j, B, z2, quad);
    const double scale = std::max(1.0, gt.lambda.cwiseAbs().maxCoeff());
    CHECK(gt.discrepancy < 1e-8 * scale);
    CHECK(gt.gauge_residual < 1e-9);
  }
  // already divergence-free jet: V = 0, identity exact
  QuadraticJet df;
  df.T[sym2_component_index(0, 3)](1, 2) =
      df.T[sym2_component_index(0, 3)](2, 1) = 0.5;
  auto gt0 = gauge_transfer_check(df, B, z2, quad);
  CHECK(gt0.discrepancy < 1e-12);

  // the gauge solve is onto the linear 1-forms: even Einstein-incompatible
  // quadratics admit an exact cubic V (the residual gate is a guard, not a
  // reachable branch); lambda_hat = lambda holds only for compatible jets
  QuadraticJet bad;
  bad.T[0](1, 1) = 1.0;
  auto gtb = gauge_transfer_check(bad, B, z2, quad);
  CHECK(gtb.gauge_residual < 1e-10);
}

TEST_CASE("orientation scan: model verdicts and equivariance") {
  GroupAction z2 = make_cyclic_su2(2);
  auto quad = build_quadrature(14);
  DeformationBasis Bn = o4_basis(true);
  OrientationScanOptions opt;
  opt.grid_points = 500;

  auto rflat = orientation_scan(flat_jet(), Bn, z2, quad, opt);
  CHECK(!rflat.obstructed);
  CHECK(rflat.min_scan_value < 1e-12);

  auto rsph = orientation_scan(sphere_jet(), Bn, z2, quad, opt);
  CHECK(rsph.obstructed);
  CHECK(rsph.min_scan_value > 0.1);
  CHECK(std::abs(rsph.det_rplus - 1.0) < 1e-10);
  auto rhyp = orientation_scan(hyperbolic_jet(), Bn, z2, quad, opt);
  CHECK(rhyp.obstructed);
  CHECK(rhyp.min_scan_value > 0.1);

  // orientation equivariance: lambda(phi^* H2; O) = lambda(H2; (phi^-1)^* O)
  // (change of variables in the boundary integral)
  std::mt19937 rng(2);
  DeformationBasis B = o4_basis();
  QuadraticJet j = random_einstein_jet(rng, false);
  for (int t = 0; t < 4; ++t) {
    std::normal_distribution<double> N(0, 1);
    Eigen::Vector3d v(N(rng), N(rng), N(rng));
    v.normalize();
    Mat4 U = orientation_matrix(v);
    auto lU = lambda_integrals(j.pullback_by(U), B, z2, quad);
    DeformationBasis Bback = B;
    for (auto& f : Bback.fields) f = pullback(f, Mat4(U.transpose()));
    auto lback = lambda_integrals(j, Bback, z2, quad);
    CHECK((lU - lback).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, lU.norm()));
  }
}

TEST_CASE("verdict equivalence with det R+ over random Einstein jets") {
  GroupAction z2 = make_cyclic_su2(2);
  auto quad = build_quadrature(12);
  DeformationBasis Bn = o4_basis(true);
  OrientationScanOptions opt;
  opt.grid_points = 400;
  opt.include_reflection = false;  // SO(4) sheet <-> det R+

  std::mt19937 rng(23);
  int n = 40, agree = 0;
  for (int t = 0; t < n; ++t) {
    QuadraticJet j = random_einstein_jet(rng, t % 2 == 0);
    auto rep = orientation_scan(j, Bn, z2, quad, opt);
    const bool det_zero = std::abs(rep.det_rplus) < 1e-6;
    if ((!rep.obstructed) == det_zero) ++agree;
  }
  CHECK(agree == n);

  // reflection reaches the det R- kernels: plant one on the minus side by
  // pulling a det R+ = 0 jet back by an orientation-reversing map
  QuadraticJet j = random_einstein_jet(rng, true);
  Mat4 refl = Mat4::Identity();
  refl(3, 3) = -1;
  QuadraticJet jr = j.pullback_by(refl);
  auto rep_noref = orientation_scan(jr, Bn, z2, quad, opt);
  CHECK(rep_noref.obstructed);  // SO(4) alone cannot kill it
  OrientationScanOptions opt2 = opt;
  opt2.include_reflection = true;
  auto rep_ref = orientation_scan(jr, Bn, z2, quad, opt2);
  CHECK(!rep_ref.obstructed);
  CHECK(rep_ref.reflection_used);
  CHECK(std::abs(rep_ref.det_rminus) < 1e-6);
}

#include "desing/picard.hpp"

namespace desing {

PicardCertificate picard_solve(const FixedPointProblem& p, int multistart,
                               unsigned seed) {
  PicardCertificate cert;
  const double r = std::min(p.r0, 1.0 / (2.0 * p.q * p.c));
  cert.radius = r;
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(p.dim);
  cert.phi0_norm = p.phi(zero).norm();
  cert.phi0_bound = r / (2.0 * p.c);

  if (!(cert.phi0_norm <= cert.phi0_bound)) {
    cert.admissible = false;
    cert.refusal = "|Phi(0)| = " + std::to_string(cert.phi0_norm) +
                   " exceeds r/(2c) = " + std::to_string(cert.phi0_bound) +
                   " at certified radius r = " + std::to_string(r);
    return cert;
  }
  cert.admissible = true;

  auto iterate = [&](Eigen::VectorXd x) {
    int it = 0;
    for (; it < p.max_iter; ++it) {
      Eigen::VectorXd f = p.phi(x);
      if (f.norm() <= p.target) break;
      x = x - p.inverse_at_zero(f);
      if (x.norm() > r * (1 + 1e-9))
        throw PicardError(
            "iterate left the certified ball: the stated constants are wrong");
    }
    return std::make_pair(x, it);
  };

  auto [x, iters] = iterate(zero);
  cert.solution = x;
  cert.iterations = iters;
  cert.residual = p.phi(x).norm();
  if (cert.residual > std::max(p.target, 1e-10 * (1 + cert.phi0_norm)) &&
      iters >= p.max_iter)
    throw PicardError("iteration failed to converge within the certified ball");

  // uniqueness: multistart from random points inside B(0, r)
  std::mt19937 rng(seed);
  std::normal_distribution<double> N(0, 1);
  for (int m = 0; m < multistart; ++m) {
    Eigen::VectorXd x0(p.dim);
    for (int i = 0; i < p.dim; ++i) x0(i) = N(rng);
    x0 *= (0.8 * r * std::pow(double(m + 1) / multistart, 1.0)) /
          std::max(x0.norm(), 1e-12);
    try {
      auto [xm, itm] = iterate(x0);
      (void)itm;
      cert.uniqueness_spread =
          std::max(cert.uniqueness_spread, (xm - x).norm());
    } catch (const PicardError&) {
      // a start that escapes the ball does not contradict uniqueness of the
      // interior solution; record nothing
    }
  }
  return cert;
}

}  // namespace desing

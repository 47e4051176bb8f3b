#pragma once

#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>

// Quantified fixed-point solver: given an inverse bound c for the
// linearization at 0, a quadratic modulus q for the nonlinearity, and a
// working radius r0, the equation Phi(x) = 0 has a unique solution in B(0,r)
// whenever r <= min(r0, 1/(2qc)) and |Phi(0)| <= r/(2c).  The iteration is
// x_{n+1} = x_n - (d0 Phi)^{-1} Phi(x_n) with the frozen inverse.

namespace desing {

struct FixedPointProblem {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> phi;
  // action of (d0 Phi)^{-1}
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> inverse_at_zero;
  int dim = 1;
  double c = 1.0;       // |(d0 Phi)^{-1}| <= c
  double q = 1.0;       // |Q(x)-Q(y)| <= q (|x|+|y|) |x-y|
  double r0 = 1.0;      // validity radius of the q-bound
  double target = 1e-12;
  int max_iter = 200;
};

struct PicardCertificate {
  bool admissible = false;
  double radius = 0;        // certified r
  double phi0_norm = 0;
  double phi0_bound = 0;    // r/(2c)
  std::string refusal;      // set when the hypotheses fail
  Eigen::VectorXd solution;
  double residual = 0;
  int iterations = 0;
  double uniqueness_spread = 0;  // multistart agreement diameter
};

struct PicardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checks admissibility first (structured refusal, no iteration on failure),
// then iterates to the target and verifies uniqueness by multistart inside
// the certified ball.
PicardCertificate picard_solve(const FixedPointProblem& p,
                               int multistart = 5, unsigned seed = 42);

}  // namespace desing

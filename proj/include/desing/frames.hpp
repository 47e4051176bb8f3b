#pragma once

#include <Eigen/Dense>

// The invariant coframe (drho, alpha1, alpha2, alpha3) on R^4 \ {0} and the
// quaternionic structure behind it.  Coordinates are (x,y,z,t) = (x0,x1,x2,x3).
//
//   alpha1 = (x dy - y dx + z dt - t dz) / rho^2
//   alpha2 = (x dz - z dx + t dy - y dt) / rho^2
//   alpha3 = (x dt - t dx + y dz - z dy) / rho^2
//
// so that rho*alpha_i(J_i x / rho) = 1 with J_i the left quaternion
// multiplications by i, j, k.  This makes {drho, rho*alpha1, rho*alpha2,
// rho*alpha3} orthonormal at every point and d(alpha_i) = 2 alpha_j ^ alpha_k
// cyclically.  (The sign of the dy/dt pair in alpha2 is fixed by the
// orthonormality requirement.)

namespace desing {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

inline const Mat4& J1() {
  static const Mat4 m = [] {
    Mat4 j = Mat4::Zero();
    j(0, 1) = -1; j(1, 0) = 1; j(2, 3) = -1; j(3, 2) = 1;
    return j;
  }();
  return m;
}

inline const Mat4& J2() {
  static const Mat4 m = [] {
    Mat4 j = Mat4::Zero();
    j(0, 2) = -1; j(2, 0) = 1; j(1, 3) = 1; j(3, 1) = -1;
    return j;
  }();
  return m;
}

inline const Mat4& J3() {
  static const Mat4 m = [] {
    Mat4 j = Mat4::Zero();
    j(0, 3) = -1; j(3, 0) = 1; j(1, 2) = -1; j(2, 1) = 1;
    return j;
  }();
  return m;
}

inline const Mat4& Jmat(int i) {
  switch (i) {
    case 1: return J1();
    case 2: return J2();
    default: return J3();
  }
}

// Orthonormal frame at x: e0 = x/|x| (radial), ei = J_i x / |x|.
struct PointFrame {
  Vec4 e[4];
};

inline PointFrame frame_at(const Vec4& x) {
  PointFrame f;
  const double r = x.norm();
  f.e[0] = x / r;
  f.e[1] = J1() * x / r;
  f.e[2] = J2() * x / r;
  f.e[3] = J3() * x / r;
  return f;
}

// --- Quaternion helpers (unit quaternions acting on R^4 = H) ---------------

// q = (w, x, y, z); left multiplication L_q as a 4x4 matrix.  L_q in SO(4)
// for |q| = 1, and conjugation v -> q v q^-1 rotates the imaginary part.
inline Mat4 quat_left_matrix(const Eigen::Vector4d& q) {
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  Mat4 m;
  m << w, -x, -y, -z,
       x,  w, -z,  y,
       y,  z,  w, -x,
       z, -y,  x,  w;
  return m;
}

// Right multiplication v -> v * q; commutes with every left multiplication.
// The SU(2) of the artifact (the group the alpha-coframe descends through)
// is the right-multiplication copy.
inline Mat4 quat_right_matrix(const Eigen::Vector4d& q) {
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  Mat4 m;
  m << w, -x, -y, -z,
       x,  w,  z, -y,
       y, -z,  w,  x,
       z,  y, -x,  w;
  return m;
}

inline Eigen::Vector4d quat_mul(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  return quat_left_matrix(a) * b;
}

inline Eigen::Vector4d quat_conj(const Eigen::Vector4d& q) {
  return Eigen::Vector4d(q(0), -q(1), -q(2), -q(3));
}

// Unit quaternion u with u * i * conj(u) = v for a unit imaginary v.
// SO(4)/U(2) ~ S^2: the gluing-orientation parameter is exactly v.
inline Eigen::Vector4d quat_rotating_i_to(const Eigen::Vector3d& v) {
  const Eigen::Vector4d i(0, 1, 0, 0);
  Eigen::Vector4d vq(0, v(0), v(1), v(2));
  // u = normalize(1 - v*i); degenerate when v = -i, pick the j-axis flip.
  Eigen::Vector4d u = Eigen::Vector4d(1, 0, 0, 0) - quat_mul(vq, i);
  if (u.norm() < 1e-8) u = Eigen::Vector4d(0, 0, 1, 0);
  return u / u.norm();
}

// The SO(4) matrix of left multiplication by that u.  It fixes anti-self-dual
// forms and rotates the self-dual direction omega_1 into the one labelled v.
inline Mat4 orientation_matrix(const Eigen::Vector3d& v) {
  return quat_left_matrix(quat_rotating_i_to(v));
}

}  // namespace desing

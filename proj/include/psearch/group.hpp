#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "psearch/geometry.hpp"
#include "psearch/linalg.hpp"
#include "psearch/plan.hpp"
#include "psearch/reduced.hpp"

// Continuous-angle group layer: Lie generators of the three searches, their
// SU(2) images, the SU(2) -> SO(3) covering map and the two-axis rotation
// decomposition.  Everything here lives in the large-block limit, where
// theta1 = sin(gamma) * theta2; finite-b corrections stay in the statevector
// and reduced modules.
//
// Basis alignment: the reduced axes (|t>, |ntt>, |u>) map to the Pauli axes
// (x, y, z) by the identity.  With R_n(angle) = exp(-i angle/2 n.sigma), the
// covering map below sends the SU(2) image of each search to its reduced 3x3
// matrix with no extra permutation or sign.

namespace psearch {

struct LieGenerator3 {
  Mat3 entries;
  OpKind kind;
};

// First-order coefficient matrices of the three searches (the bracketed
// matrices, with the common angle prefactor stripped).
inline LieGenerator3 lie_generator(OpKind kind, double gamma) {
  const double sg = std::sin(gamma), cg = std::cos(gamma);
  Mat3 t{};
  switch (kind) {
    case OpKind::G1:
      t.m = {{{0.0, sg * sg, sg * cg},
              {-sg * sg, 0.0, 0.0},
              {-sg * cg, 0.0, 0.0}}};
      break;
    case OpKind::G2:
      t.m = {{{0.0, 1.0, 0.0}, {-1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
      break;
    case OpKind::Ga: {
      const double s2 = std::sin(2.0 * gamma), c2 = std::cos(2.0 * gamma);
      t.m = {{{0.0, -c2, s2}, {c2, 0.0, 0.0}, {-s2, 0.0, 0.0}}};
      break;
    }
  }
  return LieGenerator3{t, kind};
}

// Frobenius norm of T_Ga + T_G2 - 2 T_G1; zero for every gamma.
inline double lie_relation_residual(double gamma) {
  const Mat3 r = lie_generator(OpKind::Ga, gamma).entries +
                 lie_generator(OpKind::G2, gamma).entries -
                 2.0 * lie_generator(OpKind::G1, gamma).entries;
  return frobenius_norm(r);
}

struct Spinor2 {
  CMat2 entries;
};

inline CMat2 sigma_x() {
  CMat2 s;
  s.m = {{{{{0.0, 0.0}, {1.0, 0.0}}}, {{{1.0, 0.0}, {0.0, 0.0}}}}};
  return s;
}

inline CMat2 sigma_y() {
  CMat2 s;
  s.m = {{{{{0.0, 0.0}, {0.0, -1.0}}}, {{{0.0, 1.0}, {0.0, 0.0}}}}};
  return s;
}

inline CMat2 sigma_z() {
  CMat2 s;
  s.m = {{{{{1.0, 0.0}, {0.0, 0.0}}}, {{{0.0, 0.0}, {-1.0, 0.0}}}}};
  return s;
}

// SU(2) image of a search power.  The power j may be any real number; the
// half-angle arguments are j*theta1 for G1 and j*theta2 for G2 and Ga.
inline Spinor2 su2_of(OpKind kind, double j, const Angles& angles) {
  const std::complex<double> i1(0.0, 1.0);
  CMat2 u;
  switch (kind) {
    case OpKind::G1: {
      const double c = std::cos(j * angles.theta1), s = std::sin(j * angles.theta1);
      const double sg = std::sin(angles.gamma), cg = std::cos(angles.gamma);
      u.m[0][0] = c + i1 * s * sg;
      u.m[0][1] = -s * cg;
      u.m[1][0] = s * cg;
      u.m[1][1] = c - i1 * s * sg;
      break;
    }
    case OpKind::G2: {
      const double h = j * angles.theta2;
      u.m[0][0] = std::exp(i1 * h);
      u.m[0][1] = 0.0;
      u.m[1][0] = 0.0;
      u.m[1][1] = std::exp(-i1 * h);
      break;
    }
    case OpKind::Ga: {
      const double c = std::cos(j * angles.theta2), s = std::sin(j * angles.theta2);
      const double s2 = std::sin(2.0 * angles.gamma), c2 = std::cos(2.0 * angles.gamma);
      u.m[0][0] = c - i1 * s * c2;
      u.m[0][1] = -s * s2;
      u.m[1][0] = s * s2;
      u.m[1][1] = c + i1 * s * c2;
      break;
    }
  }
  return Spinor2{u};
}

// Covering map by conjugation on the Pauli basis: u (r.sigma) u^dag = (Rr).sigma,
// R_jk = Re(tr(sigma_j u sigma_k u^dag))/2.  Two-to-one: u and -u give the
// same rotation.
inline Mat3 so3_of_su2(const Spinor2& u) {
  if (unitarity_residual(u.entries) > 1e-8)
    throw std::invalid_argument("so3_of_su2 expects a unitary spinor");
  const CMat2 sig[3] = {sigma_x(), sigma_y(), sigma_z()};
  const CMat2 ud = dagger(u.entries);
  Mat3 r;
  for (int k = 0; k < 3; ++k) {
    const CMat2 c = u.entries * sig[k] * ud;
    for (int j = 0; j < 3; ++j) {
      const CMat2 p = sig[j] * c;
      r.m[j][k] = 0.5 * (p.m[0][0] + p.m[1][1]).real();
    }
  }
  return r;
}

// exp(-i angle/2 n.sigma) for a unit axis n
inline Spinor2 axis_rotation(const Vec3& n, double angle) {
  const std::complex<double> i1(0.0, 1.0);
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  CMat2 u;
  u.m[0][0] = c - i1 * s * n[2];
  u.m[0][1] = -s * (n[1] + i1 * n[0]);
  u.m[1][0] = s * (n[1] - i1 * n[0]);
  u.m[1][1] = c + i1 * s * n[2];
  return Spinor2{u};
}

// SU(2) element covering a given rotation matrix (quaternion extraction,
// largest-component branch; the sign of the result is one of the two lifts).
inline Spinor2 su2_of_so3(const Mat3& r) {
  if (orthogonality_residual(r) > 1e-8 || det(r) < 0.0)
    throw std::invalid_argument("su2_of_so3 expects a rotation matrix");
  double w, x, y, z;
  const double tr = r.m[0][0] + r.m[1][1] + r.m[2][2];
  if (tr > 0.0) {
    double q = std::sqrt(1.0 + tr) * 2.0;
    w = 0.25 * q;
    x = (r.m[2][1] - r.m[1][2]) / q;
    y = (r.m[0][2] - r.m[2][0]) / q;
    z = (r.m[1][0] - r.m[0][1]) / q;
  } else if (r.m[0][0] > r.m[1][1] && r.m[0][0] > r.m[2][2]) {
    double q = std::sqrt(1.0 + r.m[0][0] - r.m[1][1] - r.m[2][2]) * 2.0;
    w = (r.m[2][1] - r.m[1][2]) / q;
    x = 0.25 * q;
    y = (r.m[0][1] + r.m[1][0]) / q;
    z = (r.m[0][2] + r.m[2][0]) / q;
  } else if (r.m[1][1] > r.m[2][2]) {
    double q = std::sqrt(1.0 + r.m[1][1] - r.m[0][0] - r.m[2][2]) * 2.0;
    w = (r.m[0][2] - r.m[2][0]) / q;
    x = (r.m[0][1] + r.m[1][0]) / q;
    y = 0.25 * q;
    z = (r.m[1][2] + r.m[2][1]) / q;
  } else {
    double q = std::sqrt(1.0 + r.m[2][2] - r.m[0][0] - r.m[1][1]) * 2.0;
    w = (r.m[1][0] - r.m[0][1]) / q;
    x = (r.m[0][2] + r.m[2][0]) / q;
    y = (r.m[1][2] + r.m[2][1]) / q;
    z = 0.25 * q;
  }
  const std::complex<double> i1(0.0, 1.0);
  CMat2 u;
  u.m[0][0] = w - i1 * z;
  u.m[0][1] = -y - i1 * x;
  u.m[1][0] = y - i1 * x;
  u.m[1][1] = w + i1 * z;
  return Spinor2{u};
}

// Relation u1^j1 ua^{-j2} u1^j1 = u2^j2 with j2 fixed by the principal-branch
// constraint sin(gamma) tan(j2 theta2) = tan(j1 theta1); returns the max-entry
// distance between the two sides.
inline double group_relation_residual(double j1, double gamma, double theta1,
                                      double theta2) {
  if (std::abs(std::cos(j1 * theta1)) < 1e-12)
    throw std::domain_error("j1 theta1 sits at a tangent pole");
  const Angles a{theta1, theta2, gamma};
  const double j2 =
      std::atan(std::tan(j1 * theta1) / std::sin(gamma)) / theta2;
  const Spinor2 u1 = su2_of(OpKind::G1, j1, a);
  const Spinor2 ua = su2_of(OpKind::Ga, -j2, a);
  const Spinor2 u2 = su2_of(OpKind::G2, j2, a);
  const CMat2 lhs = u1.entries * ua.entries * u1.entries;
  return max_abs_diff(lhs, u2.entries);
}

struct NoSolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TwoAxisAngles {
  double lambda;  // first factor, axis n
  double theta;   // middle factor, axis m
  double gamma;   // last factor, axis n
};

// Writes R = R_n(lambda) R_m(theta) R_n(gamma) for two independent unit axes.
// Solved in closed form in the frame where n maps to z and m to the zx plane;
// NoSolution for (nearly) parallel axes, or for non-orthogonal axes when R
// lies outside the reachable set (|middle off-diagonal| > sin of the axis
// angle).
inline TwoAxisAngles two_axis_decompose(const Spinor2& r, const Vec3& n_axis,
                                        const Vec3& m_axis) {
  const Vec3 n = normalized(n_axis);
  const Vec3 m = normalized(m_axis);
  const Vec3 c = cross(n, m);
  const double sin_beta = norm(c);
  if (sin_beta < 1e-8) throw NoSolution("axes are nearly parallel");
  const double cos_beta = dot(n, m);

  // frame (e1, e2, e3) with e3 = n and m in the e3-e1 plane
  const Vec3 e3 = n;
  const Vec3 e1 = normalized({m[0] - cos_beta * n[0], m[1] - cos_beta * n[1],
                              m[2] - cos_beta * n[2]});
  const Vec3 e2 = cross(e3, e1);
  Mat3 q;
  q.m = {{{e1[0], e1[1], e1[2]}, {e2[0], e2[1], e2[2]}, {e3[0], e3[1], e3[2]}}};
  const Spinor2 v = su2_of_so3(q);
  const CMat2 up = v.entries * r.entries * dagger(v.entries);

  // up = R_z(lambda) R_m'(theta) R_z(gamma) with m' = (sin beta, 0, cos beta):
  //   up00 = (cos(theta/2) - i sin(theta/2) cos beta) e^{-i(lambda+gamma)/2}
  //   up01 = -i sin(theta/2) sin beta e^{-i(lambda-gamma)/2}
  const double s_raw = std::abs(up.m[0][1]) / sin_beta;
  if (s_raw > 1.0 + 1e-9)
    throw NoSolution("rotation not reachable about these axes");
  const double s = std::min(s_raw, 1.0);
  const double co = std::sqrt(std::max(0.0, 1.0 - s * s));
  const double theta = 2.0 * std::atan2(s, co);
  const std::complex<double> mid(co, -s * cos_beta);

  TwoAxisAngles out{0.0, theta, 0.0};
  if (std::abs(up.m[0][1]) < 1e-12) {
    out.gamma = 0.0;
    out.lambda = std::abs(mid) < 1e-12 ? 0.0 : -2.0 * std::arg(up.m[0][0] / mid);
  } else if (std::abs(up.m[0][0]) < 1e-12) {
    // theta = pi with orthogonal axes: lambda + gamma unconstrained
    out.gamma = 0.0;
    out.lambda = -2.0 * std::arg(up.m[0][1]) - M_PI;
  } else {
    const double sum = -2.0 * std::arg(up.m[0][0] / mid);
    const double diff = -2.0 * std::arg(up.m[0][1]) - M_PI;
    out.lambda = 0.5 * (sum + diff);
    out.gamma = 0.5 * (sum - diff);
  }
  return out;
}

}  // namespace psearch

#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace psearch {

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<std::complex<double>, 3>;

// Row-major 3x3 real matrix; acts on column vectors from the left.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  double& operator()(int r, int c) { return m[r][c]; }
  double operator()(int r, int c) const { return m[r][c]; }

  static Mat3 identity() {
    Mat3 a;
    a.m = {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    return a;
  }
};

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
      c.m[i][j] = s;
    }
  return c;
}

inline Vec3 operator*(const Mat3& a, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i)
    r[i] = a.m[i][0] * v[0] + a.m[i][1] * v[1] + a.m[i][2] * v[2];
  return r;
}

inline CVec3 operator*(const Mat3& a, const CVec3& v) {
  CVec3 r{};
  for (int i = 0; i < 3; ++i)
    r[i] = a.m[i][0] * v[0] + a.m[i][1] * v[1] + a.m[i][2] * v[2];
  return r;
}

inline Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = a.m[i][j] + b.m[i][j];
  return c;
}

inline Mat3 operator-(const Mat3& a, const Mat3& b) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = a.m[i][j] - b.m[i][j];
  return c;
}

inline Mat3 operator*(double s, const Mat3& a) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = s * a.m[i][j];
  return c;
}

inline Mat3 transpose(const Mat3& a) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = a.m[j][i];
  return c;
}

inline double det(const Mat3& a) {
  return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
         a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
         a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}

inline double frobenius_norm(const Mat3& a) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += a.m[i][j] * a.m[i][j];
  return std::sqrt(s);
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(a.m[i][j] - b.m[i][j]));
  return d;
}

// max |A^T A - I|, zero for orthogonal matrices
inline double orthogonality_residual(const Mat3& a) {
  return max_abs_diff(transpose(a) * a, Mat3::identity());
}

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

inline double max_abs_diff(const Vec3& a, const Vec3& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Column-major sense as above: complex 2x2, acts from the left.
struct CMat2 {
  std::array<std::array<std::complex<double>, 2>, 2> m{};

  std::complex<double>& operator()(int r, int c) { return m[r][c]; }
  std::complex<double> operator()(int r, int c) const { return m[r][c]; }

  static CMat2 identity() {
    CMat2 a;
    a.m = {{{{{1.0, 0.0}, {0.0, 0.0}}}, {{{0.0, 0.0}, {1.0, 0.0}}}}};
    return a;
  }
};

inline CMat2 operator*(const CMat2& a, const CMat2& b) {
  CMat2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      c.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  return c;
}

inline CMat2 operator*(std::complex<double> s, const CMat2& a) {
  CMat2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c.m[i][j] = s * a.m[i][j];
  return c;
}

inline CMat2 operator-(const CMat2& a, const CMat2& b) {
  CMat2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c.m[i][j] = a.m[i][j] - b.m[i][j];
  return c;
}

inline CMat2 dagger(const CMat2& a) {
  CMat2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c.m[i][j] = std::conj(a.m[j][i]);
  return c;
}

inline std::complex<double> det(const CMat2& a) {
  return a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0];
}

inline double max_abs_diff(const CMat2& a, const CMat2& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a.m[i][j] - b.m[i][j]));
  return d;
}

// max |U^dag U - I|, zero for unitary matrices
inline double unitarity_residual(const CMat2& a) {
  return max_abs_diff(dagger(a) * a, CMat2::identity());
}

}  // namespace psearch

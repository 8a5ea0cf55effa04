#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "psearch/geometry.hpp"
#include "psearch/linalg.hpp"
#include "psearch/plan.hpp"

// Dynamics restricted to the three-dimensional invariant subspace spanned by
// |t> (target item), |ntt> (uniform over the other items of the target block)
// and |u> (uniform over all items of the non-target blocks), in that order.
// Matrices act on column vectors of coefficients from the left, so an operator
// string is evaluated right to left.

namespace psearch {

// coeffs = (a, b, c) meaning a|t> + b|ntt> + c|u>
struct ReducedState {
  Vec3 coeffs{};
};

using Rotation3 = Mat3;

struct Eigenpair {
  std::complex<double> value;
  CVec3 vector;
};

struct EigenSystem3 {
  std::array<Eigenpair, 3> pairs;
};

// Rotation by `angle` in the (t, ntt) plane, identity on u.  With
// angle = 2*j2*theta2 this is the local search power, exact at every block
// size.
inline Rotation3 local_rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Rotation3 r;
  r.m = {{{c, s, 0.0}, {-s, c, 0.0}, {0.0, 0.0, 1.0}}};
  return r;
}

// Large-block closed form of the global search power.  angle = 2*j1*theta1,
// parity = (-1)^j1.  At angle 0 with parity -1 this is the reflection left
// over from a single global iteration as the block size grows.
inline Rotation3 asymptotic_g1_matrix(double angle, int parity, double gamma) {
  if (parity != 1 && parity != -1)
    throw std::invalid_argument("parity must be +1 or -1");
  const double c = std::cos(angle), s = std::sin(angle);
  const double sg = std::sin(gamma), cg = std::cos(gamma);
  const double p = static_cast<double>(parity);
  Rotation3 r;
  r.m = {{{c, s * sg, s * cg},
          {-s * sg, p * cg * cg + c * sg * sg, sg * cg * (c - p)},
          {-s * cg, sg * cg * (c - p), p * sg * sg + c * cg * cg}}};
  return r;
}

// Closed form of the auxiliary search power (G1 G2^j G1 with the G1 factors in
// the large-block limit).  angle = 2*ja*theta2.
inline Rotation3 auxiliary_matrix(double angle, double gamma) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double s2 = std::sin(2.0 * gamma), c2 = std::cos(2.0 * gamma);
  Rotation3 r;
  r.m = {{{c, -c2 * s, s2 * s},
          {c2 * s, s2 * s2 + c2 * c2 * c, s2 * c2 * (1.0 - c)},
          {-s2 * s, s2 * c2 * (1.0 - c), c2 * c2 + s2 * s2 * c}}};
  return r;
}

// Exact finite-b matrix of a single iteration.  G1 = -(I - 2 s1 s1^T) I_t with
// s1 = (1/sqrt(N), sqrt((b-1)/N), sqrt(b(K-1)/N)); G2 is the local rotation by
// 2*theta2.
inline Rotation3 exact_matrix(OpKind kind, const SearchSpace& space) {
  if (kind == OpKind::G2) return local_rotation(2.0 * space.ang.theta2);
  if (kind != OpKind::G1)
    throw std::invalid_argument("exact_matrix expects G1 or G2");
  const double n = static_cast<double>(space.n_items);
  const double b = static_cast<double>(space.block_size);
  const double k = static_cast<double>(space.n_blocks);
  const Vec3 s1{1.0 / std::sqrt(n), std::sqrt((b - 1.0) / n),
                std::sqrt(b * (k - 1.0) / n)};
  Rotation3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double refl = (i == j ? 1.0 : 0.0) - 2.0 * s1[i] * s1[j];
      r.m[i][j] = -refl * (j == 0 ? -1.0 : 1.0);
    }
  return r;
}

inline Rotation3 asymptotic_g1_power(std::int64_t j1, double gamma, double theta1) {
  if (j1 < 0) throw std::invalid_argument("j1 must be nonnegative");
  const int parity = (j1 % 2 == 0) ? 1 : -1;
  return asymptotic_g1_matrix(2.0 * static_cast<double>(j1) * theta1, parity, gamma);
}

inline Rotation3 g2_power(std::int64_t j2, double theta2) {
  if (j2 < 0) throw std::invalid_argument("j2 must be nonnegative");
  return local_rotation(2.0 * static_cast<double>(j2) * theta2);
}

inline Rotation3 ga_power(std::int64_t ja, double gamma, double theta2) {
  if (ja < 0) throw std::invalid_argument("ja must be nonnegative");
  return auxiliary_matrix(2.0 * static_cast<double>(ja) * theta2, gamma);
}

// Closed form of the full partial-search product at the optimal continuous
// parameters, as a function of the block count alone:
//   ((0, a, b), (0, b, -a), (-1, 0, 0)) with a^2 + b^2 = 1.
inline Rotation3 grk_matrix(std::int64_t n_blocks) {
  if (n_blocks < 2)
    throw DegenerateGeometry("grk_matrix requires at least two blocks");
  const double k = static_cast<double>(n_blocks);
  const double a = 1.0 / (2.0 * std::sqrt(k - 1.0)) -
                   0.5 * std::sqrt((3.0 * k - 4.0) / k);
  const double b = 0.5 + 0.5 * std::sqrt((3.0 * k - 4.0) / (k * (k - 1.0)));
  Rotation3 r;
  r.m = {{{0.0, a, b}, {0.0, b, -a}, {-1.0, 0.0, 0.0}}};
  return r;
}

enum class ReducedName { s1, s2, t, ntt, u };

inline ReducedState reduced_state(ReducedName name, const SearchSpace& space) {
  const Angles& a = space.ang;
  switch (name) {
    case ReducedName::s1:
      return ReducedState{{std::sin(a.gamma) * std::sin(a.theta2),
                           std::sin(a.gamma) * std::cos(a.theta2),
                           std::cos(a.gamma)}};
    case ReducedName::s2:
      return ReducedState{{std::sin(a.theta2), std::cos(a.theta2), 0.0}};
    case ReducedName::t:
      return ReducedState{{1.0, 0.0, 0.0}};
    case ReducedName::ntt:
      return ReducedState{{0.0, 1.0, 0.0}};
    case ReducedName::u:
      return ReducedState{{0.0, 0.0, 1.0}};
  }
  throw std::invalid_argument("unknown reduced state name");
}

enum class SpectrumKind {
  G1_full,   // exact single global iteration at finite b (j ignored beyond the power)
  G1_power,  // asymptotic global power, includes the (-1)^j eigenvalue
  G2,        // local power
  Ga         // auxiliary power
};

// Closed-form eigenpairs of the reduced matrices.  j is the operator power
// (j1, j2 or ja depending on the kind).  Eigenvalues all have modulus one.
inline EigenSystem3 spectrum(SpectrumKind kind, const SearchSpace& space,
                             std::int64_t j = 1) {
  if (j < 0) throw std::invalid_argument("power must be nonnegative");
  const Angles& a = space.ang;
  const std::complex<double> i1(0.0, 1.0);
  const double jd = static_cast<double>(j);
  const double rt2 = std::sqrt(2.0);
  EigenSystem3 es;
  switch (kind) {
    case SpectrumKind::G1_full: {
      const double n = static_cast<double>(space.n_items);
      const double b = static_cast<double>(space.block_size);
      const double k = static_cast<double>(space.n_blocks);
      const double w1 = std::sqrt((b - 1.0) / (n - 1.0));
      const double w2 = std::sqrt(b * (k - 1.0) / (n - 1.0));
      es.pairs[0] = {std::exp(2.0 * i1 * a.theta1 * jd),
                     {1.0 / rt2, i1 * w1 / rt2, i1 * w2 / rt2}};
      es.pairs[1] = {std::exp(-2.0 * i1 * a.theta1 * jd),
                     {1.0 / rt2, -i1 * w1 / rt2, -i1 * w2 / rt2}};
      es.pairs[2] = {std::pow(-1.0, jd), {0.0, w2, -w1}};
      break;
    }
    case SpectrumKind::G1_power: {
      const double sg = std::sin(a.gamma), cg = std::cos(a.gamma);
      es.pairs[0] = {std::exp(2.0 * i1 * a.theta1 * jd),
                     {1.0 / rt2, i1 * sg / rt2, i1 * cg / rt2}};
      es.pairs[1] = {std::exp(-2.0 * i1 * a.theta1 * jd),
                     {1.0 / rt2, -i1 * sg / rt2, -i1 * cg / rt2}};
      es.pairs[2] = {std::pow(-1.0, jd), {0.0, cg, -sg}};
      break;
    }
    case SpectrumKind::G2: {
      es.pairs[0] = {std::exp(2.0 * i1 * a.theta2 * jd),
                     {1.0 / rt2, i1 / rt2, 0.0}};
      es.pairs[1] = {std::exp(-2.0 * i1 * a.theta2 * jd),
                     {1.0 / rt2, -i1 / rt2, 0.0}};
      es.pairs[2] = {1.0, {0.0, 0.0, 1.0}};
      break;
    }
    case SpectrumKind::Ga: {
      const double s2 = std::sin(2.0 * a.gamma), c2 = std::cos(2.0 * a.gamma);
      es.pairs[0] = {std::exp(2.0 * i1 * a.theta2 * jd),
                     {1.0 / rt2, -i1 * c2 / rt2, i1 * s2 / rt2}};
      es.pairs[1] = {std::exp(-2.0 * i1 * a.theta2 * jd),
                     {1.0 / rt2, i1 * c2 / rt2, -i1 * s2 / rt2}};
      es.pairs[2] = {1.0, {0.0, s2, c2}};
      break;
    }
  }
  return es;
}

// max_i |M v - lambda v|_i for one eigenpair
inline double eigenpair_residual(const Rotation3& m, const Eigenpair& p) {
  const CVec3 mv = m * p.vector;
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    r = std::max(r, std::abs(mv[i] - p.value * p.vector[i]));
  return r;
}

}  // namespace psearch

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "psearch/geometry.hpp"
#include "psearch/plan.hpp"
#include "psearch/reduced.hpp"

// Exact N-dimensional simulation of the search operators.  Every reflection is
// applied as an O(N) rank-one update; no dense matrix is ever formed.
// Amplitudes are stored as complex numbers even though the dynamics are real,
// so the same container serves the complex eigenvector checks.

namespace psearch {

struct FullState {
  std::vector<std::complex<double>> amplitudes;
};

enum class OperatorKind { I_t, I_s1, I_s2, G1, G2 };

inline FullState uniform_state(const SearchSpace& space) {
  const double a = 1.0 / std::sqrt(static_cast<double>(space.n_items));
  return FullState{std::vector<std::complex<double>>(
      static_cast<std::size_t>(space.n_items), std::complex<double>(a, 0.0))};
}

inline double norm(const FullState& psi) {
  double s = 0.0;
  for (const auto& a : psi.amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

inline FullState apply_operator(OperatorKind kind, const SearchSpace& space,
                                FullState psi) {
  const std::size_t n = static_cast<std::size_t>(space.n_items);
  if (psi.amplitudes.size() != n)
    throw std::invalid_argument("state dimension does not match the space");
  auto& amp = psi.amplitudes;
  switch (kind) {
    case OperatorKind::I_t:
      amp[static_cast<std::size_t>(space.target_index)] *= -1.0;
      break;
    case OperatorKind::I_s1: {
      // I - 2|s1><s1| subtracts twice the global mean from every amplitude
      std::complex<double> sum(0.0, 0.0);
      for (const auto& a : amp) sum += a;
      const std::complex<double> shift = 2.0 * sum / static_cast<double>(n);
      for (auto& a : amp) a -= shift;
      break;
    }
    case OperatorKind::I_s2: {
      // direct sum of I - 2|s2><s2| over the blocks
      const std::size_t b = static_cast<std::size_t>(space.block_size);
      for (std::size_t start = 0; start < n; start += b) {
        std::complex<double> sum(0.0, 0.0);
        for (std::size_t x = start; x < start + b; ++x) sum += amp[x];
        const std::complex<double> shift = 2.0 * sum / static_cast<double>(b);
        for (std::size_t x = start; x < start + b; ++x) amp[x] -= shift;
      }
      break;
    }
    case OperatorKind::G1:
      psi = apply_operator(OperatorKind::I_s1, space,
                           apply_operator(OperatorKind::I_t, space, std::move(psi)));
      for (auto& a : psi.amplitudes) a = -a;
      break;
    case OperatorKind::G2:
      psi = apply_operator(OperatorKind::I_s2, space,
                           apply_operator(OperatorKind::I_t, space, std::move(psi)));
      for (auto& a : psi.amplitudes) a = -a;
      break;
  }
  return psi;
}

// Applies the plan to the given state.  The plan is written in operator-string
// order, so steps are applied right to left; Ga:j expands to G1,G2^j,G1.
inline FullState run_sequence(const SearchSpace& space, const IterationPlan& plan,
                              FullState psi) {
  const IterationPlan expanded = expand_auxiliary(plan);
  for (auto it = expanded.steps.rbegin(); it != expanded.steps.rend(); ++it) {
    const OperatorKind op =
        it->kind == OpKind::G1 ? OperatorKind::G1 : OperatorKind::G2;
    for (std::int64_t r = 0; r < it->power; ++r)
      psi = apply_operator(op, space, std::move(psi));
  }
  return psi;
}

inline FullState run_sequence(const SearchSpace& space, const IterationPlan& plan) {
  return run_sequence(space, plan, uniform_state(space));
}

struct ReducedProjection {
  ReducedState reduced;   // real parts of <t|psi>, <ntt|psi>, <u|psi>
  double residual;        // Euclidean norm of the component outside the span
};

inline ReducedProjection project_reduced(const SearchSpace& space,
                                         const FullState& psi) {
  const std::size_t n = static_cast<std::size_t>(space.n_items);
  if (psi.amplitudes.size() != n)
    throw std::invalid_argument("state dimension does not match the space");
  const std::size_t b = static_cast<std::size_t>(space.block_size);
  const std::size_t t = static_cast<std::size_t>(space.target_index);
  const std::size_t t0 = (t / b) * b;

  std::complex<double> in_sum(0.0, 0.0), out_sum(0.0, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    if (x >= t0 && x < t0 + b) {
      if (x != t) in_sum += psi.amplitudes[x];
    } else {
      out_sum += psi.amplitudes[x];
    }
  }
  const double nb = static_cast<double>(b - 1);
  const double nu = static_cast<double>(n - b);
  const std::complex<double> ct = psi.amplitudes[t];
  const std::complex<double> cntt = in_sum / std::sqrt(nb);
  const std::complex<double> cu = out_sum / std::sqrt(nu);

  // residual computed entrywise against the projection to avoid cancellation
  const std::complex<double> mean_in = in_sum / nb;
  const std::complex<double> mean_out = out_sum / nu;
  double r2 = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (x == t) continue;
    const bool inside = (x >= t0 && x < t0 + b);
    r2 += std::norm(psi.amplitudes[x] - (inside ? mean_in : mean_out));
  }
  return ReducedProjection{ReducedState{{ct.real(), cntt.real(), cu.real()}},
                           std::sqrt(r2)};
}

inline std::vector<double> block_probabilities(const SearchSpace& space,
                                               const FullState& psi) {
  const std::size_t n = static_cast<std::size_t>(space.n_items);
  if (psi.amplitudes.size() != n)
    throw std::invalid_argument("state dimension does not match the space");
  const std::size_t b = static_cast<std::size_t>(space.block_size);
  std::vector<double> probs(static_cast<std::size_t>(space.n_blocks), 0.0);
  for (std::size_t x = 0; x < n; ++x)
    probs[x / b] += std::norm(psi.amplitudes[x]);
  return probs;
}

}  // namespace psearch

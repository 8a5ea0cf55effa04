#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "psearch/geometry.hpp"
#include "psearch/plan.hpp"
#include "psearch/reduced.hpp"
#include "psearch/statevector.hpp"

// Optimal partial-search parameters and end-to-end runs of the sequence
// G1 G2^j2 G1^j1 applied to the uniform state.  Success means the final
// amplitude on |u> vanishes, leaving all weight on the target block.

namespace psearch {

struct OptimalParams {
  double eta;
  double alpha;
  std::int64_t K;
};

// eta = sqrt(K)/2 * atan2(sqrt(3K-4), K-2), alpha = acos((K-2)/(2(K-1)))/2.
// The two-argument arctangent keeps K=2 finite, where the K-2 denominator of
// the tangent form vanishes.
inline OptimalParams optimal_params(std::int64_t n_blocks) {
  if (n_blocks < 2)
    throw DegenerateGeometry("optimal_params requires at least two blocks");
  const double k = static_cast<double>(n_blocks);
  const double eta =
      0.5 * std::sqrt(k) * std::atan2(std::sqrt(3.0 * k - 4.0), k - 2.0);
  const double alpha = 0.5 * std::acos((k - 2.0) / (2.0 * (k - 1.0)));
  return OptimalParams{eta, alpha, n_blocks};
}

// Continuous growth laws: j1 = pi/4 sqrt(N) - eta sqrt(N/K), j2 = alpha sqrt(N/K).
inline std::pair<double, double> continuous_counts(const SearchSpace& space) {
  const OptimalParams p = optimal_params(space.n_blocks);
  const double rn = std::sqrt(static_cast<double>(space.n_items));
  const double rnk = std::sqrt(static_cast<double>(space.block_size));
  return {0.25 * M_PI * rn - p.eta * rnk, p.alpha * rnk};
}

// Nearest integers (half away from zero) to the continuous formulas.  j1 hits
// exactly zero at K=2, so a small guard keeps rounding noise from looking like
// an infeasible geometry.
inline std::pair<std::int64_t, std::int64_t> iteration_counts(const SearchSpace& space) {
  const auto [j1c, j2c] = continuous_counts(space);
  if (j1c < -1e-9)
    throw DegenerateGeometry("continuous j1 is negative for this geometry");
  const std::int64_t j1 = std::max<std::int64_t>(0, std::llround(j1c));
  const std::int64_t j2 = std::max<std::int64_t>(0, std::llround(j2c));
  return {j1, j2};
}

// Sum of powers; an auxiliary step Ga:j expands to two global and j local
// iterations, each one oracle query.
inline std::int64_t query_count(const IterationPlan& plan) {
  std::int64_t total = 0;
  for (const PlanStep& s : plan.steps)
    total += (s.kind == OpKind::Ga) ? s.power + 2 : s.power;
  return total;
}

enum class Representation { full, reduced_exact, reduced_asymptotic };

struct GrkRun {
  std::int64_t j1 = 0;
  std::int64_t j2 = 0;
  ReducedState final_state;
  std::optional<FullState> full_state;   // full representation only
  std::vector<double> block_probs;       // full representation only
  double u_amplitude = 0.0;              // signed <u|d>
  double target_block_probability = 0.0;
  std::int64_t queries = 0;              // j1 + j2 + 1
};

namespace detail {

// <u| G1 G2^j2 G1^j1 |s1> in the exact reduced dynamics
inline double exact_u_amplitude(const SearchSpace& space, std::int64_t j1,
                                std::int64_t j2) {
  const Rotation3 g1 = exact_matrix(OpKind::G1, space);
  Vec3 v = reduced_state(ReducedName::s1, space).coeffs;
  for (std::int64_t i = 0; i < j1; ++i) v = g1 * v;
  v = g2_power(j2, space.ang.theta2) * v;
  v = g1 * v;
  return v[2];
}

}  // namespace detail

// Runs the partial search with integer counts.  The rounded (j1, j2) pair is
// refined by a local search over the equal-query neighbours (j1-1, j2+1) and
// (j1+1, j2-1), keeping the pair with the smallest |<u|d>| in the exact
// reduced dynamics (ties go to the smaller j1).  The same pair is then used in
// whichever representation was requested.
inline GrkRun run_grk(const SearchSpace& space, Representation rep) {
  const auto [j1r, j2r] = iteration_counts(space);

  std::int64_t j1 = j1r, j2 = j2r;
  double best = std::abs(detail::exact_u_amplitude(space, j1r, j2r));
  for (const auto& [c1, c2] : {std::pair<std::int64_t, std::int64_t>{j1r - 1, j2r + 1},
                               std::pair<std::int64_t, std::int64_t>{j1r + 1, j2r - 1}}) {
    if (c1 < 0 || c2 < 0) continue;
    const double u = std::abs(detail::exact_u_amplitude(space, c1, c2));
    if (u < best || (u == best && c1 < j1)) {
      best = u;
      j1 = c1;
      j2 = c2;
    }
  }

  GrkRun run;
  run.j1 = j1;
  run.j2 = j2;
  run.queries = j1 + j2 + 1;
  const Angles& a = space.ang;

  switch (rep) {
    case Representation::full: {
      IterationPlan plan;
      plan.steps = {{OpKind::G1, 1}, {OpKind::G2, j2}, {OpKind::G1, j1}};
      FullState d = run_sequence(space, plan);
      const ReducedProjection proj = project_reduced(space, d);
      run.final_state = proj.reduced;
      run.u_amplitude = proj.reduced.coeffs[2];
      run.block_probs = block_probabilities(space, d);
      run.target_block_probability =
          run.block_probs[static_cast<std::size_t>(target_block(space))];
      run.full_state = std::move(d);
      break;
    }
    case Representation::reduced_exact: {
      const Rotation3 g1 = exact_matrix(OpKind::G1, space);
      Vec3 v = reduced_state(ReducedName::s1, space).coeffs;
      for (std::int64_t i = 0; i < j1; ++i) v = g1 * v;
      v = g2_power(j2, a.theta2) * v;
      v = g1 * v;
      run.final_state = ReducedState{v};
      run.u_amplitude = v[2];
      run.target_block_probability = v[0] * v[0] + v[1] * v[1];
      break;
    }
    case Representation::reduced_asymptotic: {
      Vec3 v = reduced_state(ReducedName::s1, space).coeffs;
      v = asymptotic_g1_power(j1, a.gamma, a.theta1) * v;
      v = g2_power(j2, a.theta2) * v;
      v = asymptotic_g1_power(1, a.gamma, a.theta1) * v;
      run.final_state = ReducedState{v};
      run.u_amplitude = v[2];
      run.target_block_probability = v[0] * v[0] + v[1] * v[1];
      break;
    }
  }
  return run;
}

// <u|d> of the large-block model evaluated at the exact continuous optimum
// (2 j1 theta1 = pi/2 - 2 eta/sqrt(K), 2 j2 theta2 = 2 alpha); vanishes up to
// roundoff.
inline double grk_continuous_u_amplitude(std::int64_t n_blocks) {
  const OptimalParams p = optimal_params(n_blocks);
  const double gamma = std::asin(1.0 / std::sqrt(static_cast<double>(n_blocks)));
  Vec3 v{0.0, std::sin(gamma), std::cos(gamma)};
  v = asymptotic_g1_matrix(0.5 * M_PI - 2.0 * p.eta / std::sqrt(static_cast<double>(n_blocks)),
                           -1, gamma) * v;
  v = local_rotation(2.0 * p.alpha) * v;
  v = asymptotic_g1_matrix(0.0, -1, gamma) * v;
  return v[2];
}

// Large-block total j1 + j2 at the continuous optimum.
inline double grk_continuous_queries(std::int64_t n_blocks, std::int64_t n_items) {
  const OptimalParams p = optimal_params(n_blocks);
  const double rn = std::sqrt(static_cast<double>(n_items));
  const double rnk = std::sqrt(static_cast<double>(n_items) /
                               static_cast<double>(n_blocks));
  return 0.25 * M_PI * rn - (p.eta - p.alpha) * rnk;
}

}  // namespace psearch

#include "psearch/planner.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace psearch;

TEST(Planner, OptimalParamsFrozen) {
  // eta and alpha for the first few block counts
  const struct {
    std::int64_t k;
    double eta, alpha;
  } want[] = {{2, 1.1107207345395915, 0.7853981633974483},
              {3, 0.996156105656147, 0.659058035826409},
              {4, 0.9553166181245093, 0.6154797086703874},
              {5, 0.9340971320921154, 0.5931997761496288}};
  for (const auto& w : want) {
    const OptimalParams p = optimal_params(w.k);
    EXPECT_NEAR(p.eta, w.eta, 1e-15) << "K=" << w.k;
    EXPECT_NEAR(p.alpha, w.alpha, 1e-15) << "K=" << w.k;
    EXPECT_EQ(p.K, w.k);
  }
  EXPECT_THROW(optimal_params(1), DegenerateGeometry);
  EXPECT_THROW(optimal_params(0), DegenerateGeometry);
}

TEST(Planner, EtaShrinksAlphaShrinksWithMoreBlocks) {
  double prev_eta = 10.0, prev_alpha = 10.0;
  for (std::int64_t k = 2; k <= 64; ++k) {
    const OptimalParams p = optimal_params(k);
    EXPECT_LT(p.eta, prev_eta) << "K=" << k;
    EXPECT_LT(p.alpha, prev_alpha) << "K=" << k;
    prev_eta = p.eta;
    prev_alpha = p.alpha;
  }
}

TEST(Planner, ContinuousCountsFrozen) {
  const SearchSpace s = make_space(4096, 4, 0);
  const auto [j1c, j2c] = continuous_counts(s);
  EXPECT_NEAR(j1c, 19.695350677452392, 1e-12);
  EXPECT_NEAR(j2c, 19.695350677452396, 1e-12);
  // four blocks sit exactly at eta + alpha = pi/2, so the two counts agree
  EXPECT_NEAR(j1c, j2c, 1e-12);
}

TEST(Planner, IterationCountsRoundTheContinuousLaws) {
  const auto [j1, j2] = iteration_counts(make_space(4096, 4, 0));
  EXPECT_EQ(j1, 20);
  EXPECT_EQ(j2, 20);
}

TEST(Planner, TwoBlocksNeedNoGlobalPhase) {
  // K = 2 puts the continuous j1 at exactly zero; rounding noise must not
  // turn that into an error
  const auto [j1, j2] = iteration_counts(make_space(512, 2, 0));
  EXPECT_EQ(j1, 0);
  EXPECT_EQ(j2, 13);  // round(alpha * 16), alpha = pi/4
}

TEST(Planner, QueryCountAddsPowersAndAuxiliaryOverhead) {
  EXPECT_EQ(query_count(parse_plan("G1:5,G2:3")), 8);
  EXPECT_EQ(query_count(parse_plan("Ga:2")), 4);  // two framing globals
  EXPECT_EQ(query_count(parse_plan("G1:1,G2:20,G1:20")), 41);
  EXPECT_EQ(query_count(parse_plan("")), 0);
}

TEST(Planner, RunGrkRefinesTheRoundedPair) {
  // N = 4096, K = 4: the rounded (20, 20) loses to (19, 21) at equal queries
  const SearchSpace s = make_space(4096, 4, 0);
  const GrkRun run = run_grk(s, Representation::reduced_exact);
  EXPECT_EQ(run.j1, 19);
  EXPECT_EQ(run.j2, 21);
  EXPECT_EQ(run.queries, 41);
  EXPECT_LE(std::abs(run.u_amplitude), 0.05);
  EXPECT_GE(run.target_block_probability, 0.995);
}

TEST(Planner, RepresentationsAgreeOnTheFullRun) {
  const SearchSpace s = make_space(4096, 4, 1234);
  const GrkRun full = run_grk(s, Representation::full);
  const GrkRun exact = run_grk(s, Representation::reduced_exact);
  const GrkRun asym = run_grk(s, Representation::reduced_asymptotic);
  EXPECT_EQ(full.j1, exact.j1);
  EXPECT_EQ(full.j2, exact.j2);
  EXPECT_EQ(full.j1, asym.j1);
  for (int i = 0; i < 3; ++i)
    EXPECT_NEAR(full.final_state.coeffs[i], exact.final_state.coeffs[i], 1e-12);
  EXPECT_NEAR(full.u_amplitude, exact.u_amplitude, 1e-12);
  EXPECT_NEAR(full.target_block_probability, exact.target_block_probability,
              1e-12);
  // the asymptotic model drifts from the exact run by O(1/sqrt(b)), b = 1024
  const double drift = 5.0 / std::sqrt(1024.0);
  EXPECT_NEAR(asym.u_amplitude, exact.u_amplitude, drift);
  ASSERT_TRUE(full.full_state.has_value());
  EXPECT_EQ(full.block_probs.size(), 4u);
  EXPECT_TRUE(exact.block_probs.empty());
}

TEST(Planner, FailureProbabilityFallsWithBlockSize) {
  // same K, growing b: the leftover non-target probability shrinks
  double prev = 1.0;
  for (std::int64_t b : {64, 256, 1024}) {
    const SearchSpace s = make_space(4 * b, 4, 0);
    const GrkRun run = run_grk(s, Representation::reduced_exact);
    const double miss = 1.0 - run.target_block_probability;
    EXPECT_LT(miss, prev) << "b=" << b;
    prev = miss;
  }
  EXPECT_LT(prev, 0.003);
}

TEST(Planner, ContinuousOptimumAnnihilatesU) {
  for (std::int64_t k : {3, 4, 5, 16, 100})
    EXPECT_NEAR(grk_continuous_u_amplitude(k), 0.0, 1e-12) << "K=" << k;
}

TEST(Planner, ContinuousQueriesLowerBoundTheIntegerRun) {
  const SearchSpace s = make_space(4096, 4, 0);
  const GrkRun run = run_grk(s, Representation::reduced_exact);
  const double cont = grk_continuous_queries(4, 4096);
  EXPECT_NEAR(cont, 0.25 * M_PI * 64.0 -
                        (0.9553166181245093 - 0.6154797086703874) * 32.0,
              1e-12);
  EXPECT_GE(static_cast<double>(run.queries), cont);
  EXPECT_LE(static_cast<double>(run.queries), cont + 3.0);
}

TEST(Planner, FewerQueriesThanFullSearch) {
  // partial search must beat the pi/4 sqrt(N) full-search count
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{4096, 4},
                      {4096, 8},
                      {1 << 14, 16}}) {
    const SearchSpace s = make_space(n, k, 0);
    const GrkRun run = run_grk(s, Representation::reduced_exact);
    EXPECT_LT(static_cast<double>(run.queries),
              0.25 * M_PI * std::sqrt(static_cast<double>(n)))
        << "N=" << n << " K=" << k;
  }
}

#include "psearch/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace psearch;

TEST(Geometry, MakeSpaceBasicFields) {
  const SearchSpace s = make_space(64, 4, 17);
  EXPECT_EQ(s.n_items, 64);
  EXPECT_EQ(s.n_blocks, 4);
  EXPECT_EQ(s.block_size, 16);
  EXPECT_EQ(s.target_index, 17);
}

TEST(Geometry, AnglesFrozenValues) {
  // N = 64, K = 4: sin(theta1) = 1/8, sin(theta2) = 1/4, sin(gamma) = 1/2
  const Angles a = angles(make_space(64, 4, 0));
  EXPECT_NEAR(a.theta1, 0.1253278311680654, 1e-15);
  EXPECT_NEAR(a.theta2, 0.25268025514207865, 1e-15);
  EXPECT_NEAR(a.gamma, 0.5235987755982989, 1e-15);
}

TEST(Geometry, AnglesDefiningRelations) {
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{64, 4},
                      {4096, 8},
                      {300, 5},
                      {1 << 20, 16}}) {
    const Angles a = angles_for(n, k);
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    EXPECT_NEAR(std::sin(a.theta1), 1.0 / std::sqrt(nd), 1e-15);
    EXPECT_NEAR(std::sin(a.theta2), std::sqrt(kd / nd), 1e-15);
    EXPECT_NEAR(std::sin(a.gamma), 1.0 / std::sqrt(kd), 1e-15);
    // the finite-b constraint tying the three angles together
    EXPECT_NEAR(std::sin(a.theta1), std::sin(a.gamma) * std::sin(a.theta2), 1e-15);
    EXPECT_LT(a.theta1, a.theta2);
  }
}

TEST(Geometry, SmallestValidSpace) {
  // N = 4, K = 2: all three angles land on textbook values
  const Angles a = angles(make_space(4, 2, 0));
  EXPECT_NEAR(a.theta1, M_PI / 6.0, 1e-15);
  EXPECT_NEAR(a.theta2, M_PI / 4.0, 1e-15);
  EXPECT_NEAR(a.gamma, M_PI / 4.0, 1e-15);
}

TEST(Geometry, RejectsBadShapes) {
  EXPECT_THROW(make_space(100, 7, 0), NonDividing);
  EXPECT_THROW(make_space(64, 4, 64), TargetOutOfRange);
  EXPECT_THROW(make_space(64, 4, -1), TargetOutOfRange);
  EXPECT_THROW(make_space(64, 1, 0), DegenerateGeometry);   // one block
  EXPECT_THROW(make_space(64, 64, 0), DegenerateGeometry);  // one-item blocks
  EXPECT_THROW(make_space(0, 4, 0), SpaceError);
  EXPECT_THROW(make_space(-8, 4, 0), SpaceError);
}

TEST(Geometry, ErrorsShareABase) {
  // callers can catch the whole family at once
  EXPECT_THROW(make_space(100, 7, 0), SpaceError);
  EXPECT_THROW(make_space(64, 4, 99), SpaceError);
}

TEST(Geometry, BlockMembership) {
  const SearchSpace s = make_space(64, 4, 17);
  EXPECT_EQ(block_of(s, 0), 0);
  EXPECT_EQ(block_of(s, 15), 0);
  EXPECT_EQ(block_of(s, 16), 1);
  EXPECT_EQ(block_of(s, 63), 3);
  EXPECT_EQ(target_block(s), 1);
}

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace psearch {

struct SpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// block count does not divide the database size
struct NonDividing : SpaceError {
  using SpaceError::SpaceError;
};

struct TargetOutOfRange : SpaceError {
  using SpaceError::SpaceError;
};

// fewer than two blocks, or blocks of fewer than two items
struct DegenerateGeometry : SpaceError {
  using SpaceError::SpaceError;
};

// theta1: global rotation angle, sin^2(theta1) = 1/N
// theta2: block-local rotation angle, sin^2(theta2) = K/N
// gamma:  block-count angle, sin(gamma) = 1/sqrt(K), in (0, pi/4]
// Exact identity: sin(theta1) = sin(gamma) * sin(theta2).
struct Angles {
  double theta1;
  double theta2;
  double gamma;
};

struct SearchSpace {
  std::int64_t n_items;      // N
  std::int64_t n_blocks;     // K
  std::int64_t block_size;   // b = N/K
  std::int64_t target_index; // in [0, N)
  Angles ang;                // cached at construction
};

inline Angles angles_for(std::int64_t n_items, std::int64_t n_blocks) {
  const double n = static_cast<double>(n_items);
  const double k = static_cast<double>(n_blocks);
  return Angles{std::asin(1.0 / std::sqrt(n)), std::asin(std::sqrt(k / n)),
                std::asin(1.0 / std::sqrt(k))};
}

inline SearchSpace make_space(std::int64_t n_items, std::int64_t n_blocks,
                              std::int64_t target_index) {
  if (n_items < 1 || n_blocks < 1)
    throw DegenerateGeometry("n_items and n_blocks must be positive");
  if (n_items % n_blocks != 0)
    throw NonDividing("n_blocks " + std::to_string(n_blocks) +
                      " does not divide n_items " + std::to_string(n_items));
  const std::int64_t block_size = n_items / n_blocks;
  if (n_blocks < 2 || block_size < 2)
    throw DegenerateGeometry("need n_blocks >= 2 and block_size >= 2, got K=" +
                             std::to_string(n_blocks) + " b=" +
                             std::to_string(block_size));
  if (target_index < 0 || target_index >= n_items)
    throw TargetOutOfRange("target_index " + std::to_string(target_index) +
                           " outside [0, " + std::to_string(n_items) + ")");
  return SearchSpace{n_items, n_blocks, block_size, target_index,
                     angles_for(n_items, n_blocks)};
}

inline const Angles& angles(const SearchSpace& s) { return s.ang; }

inline std::int64_t block_of(const SearchSpace& s, std::int64_t item) {
  return item / s.block_size;
}

inline std::int64_t target_block(const SearchSpace& s) {
  return block_of(s, s.target_index);
}

}  // namespace psearch

#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace arnold {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Mismatched ambient dimensions or mode windows between operands.
struct dimension_error : std::invalid_argument {
  explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

// Mode index or sub-window outside the storage window.
struct window_error : std::out_of_range {
  explicit window_error(const std::string& what) : std::out_of_range(what) {}
};

// Sample count below the anti-aliasing floor for the requested window.
struct aliasing_error : std::invalid_argument {
  explicit aliasing_error(const std::string& what) : std::invalid_argument(what) {}
};

// Invalid run configuration or schema violation in an input file.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// splitmix64; used to derive independent per-task seeds from one run seed.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index = 0) {
  return std::mt19937_64(split_seed(seed, index));
}

}  // namespace arnold

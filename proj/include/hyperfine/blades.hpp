#pragma once

#include <bit>
#include <cassert>
#include <cstdint>

namespace hyperfine {

// Basis blades of the real Clifford algebra R_n with e_i^2 = -1 are encoded
// as bitmasks: bit (i-1) set means the factor e_i is present, so mask 0 is
// the scalar 1 and mask 0b11 is e_1 e_2.  Products XOR masks; the sign below
// accounts for the reordering transpositions plus one flip per shared index.

constexpr std::uint32_t blade_mul_mask(std::uint32_t a, std::uint32_t b) {
  return a ^ b;
}

constexpr int blade_mul_sign(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  std::uint32_t rest = a >> 1;
  while (rest) {
    swaps += std::popcount(rest & b);
    rest >>= 1;
  }
  swaps += std::popcount(a & b);  // e_i e_i = -1
  return (swaps & 1) ? -1 : 1;
}

constexpr int blade_grade(std::uint32_t mask) {
  return std::popcount(mask);
}

// Clifford conjugation on a blade of grade k multiplies by (-1)^(k(k+1)/2):
// identity on the scalar, negation on vectors and bivectors, and so on.
constexpr int blade_conjugation_sign(std::uint32_t mask) {
  const int k = blade_grade(mask);
  return ((k * (k + 1) / 2) & 1) ? -1 : 1;
}

}  // namespace hyperfine

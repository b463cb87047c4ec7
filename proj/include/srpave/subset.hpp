#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "srpave/errors.hpp"

namespace srpave {

/// Subset of a ground set {0, ..., n-1} stored as a bitmask. Bits at or
/// beyond n must be zero; check_mask() enforces this at API boundaries.
using Mask = std::uint32_t;

inline constexpr int kMaxVariables = 24;

constexpr Mask full_mask(int n) {
  return n >= 32 ? ~Mask{0} : ((Mask{1} << n) - 1);
}

constexpr Mask bit(int i) { return Mask{1} << i; }

constexpr bool contains(Mask s, int i) { return (s >> i) & 1u; }

constexpr int popcount(Mask s) { return std::popcount(s); }

constexpr Mask complement(Mask s, int n) { return full_mask(n) & ~s; }

constexpr bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }

inline void check_mask(Mask s, int n) {
  if ((s & ~full_mask(n)) != 0) {
    throw Error(Errc::DimensionMismatch,
                "subset mask has bits beyond n = " + std::to_string(n));
  }
}

inline std::vector<int> to_indices(Mask s) {
  std::vector<int> out;
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

inline Mask from_indices(const std::vector<int>& idx, int n) {
  Mask s = 0;
  for (int i : idx) {
    if (i < 0 || i >= n) {
      throw Error(Errc::DimensionMismatch,
                  "index " + std::to_string(i) + " outside [0, " +
                      std::to_string(n) + ")");
    }
    s |= bit(i);
  }
  return s;
}

/// Gathers the bits of `s` selected by `keep` into a dense mask over
/// |keep| positions (bit order preserved).
inline Mask compress_bits(Mask s, Mask keep) {
  Mask out = 0;
  int pos = 0;
  for (Mask k = keep; k != 0; k &= k - 1) {
    const int i = std::countr_zero(k);
    if (contains(s, i)) out |= bit(pos);
    ++pos;
  }
  return out;
}

/// Inverse of compress_bits: scatters a dense mask back onto `keep`.
inline Mask expand_bits(Mask dense, Mask keep) {
  Mask out = 0;
  int pos = 0;
  for (Mask k = keep; k != 0; k &= k - 1) {
    const int i = std::countr_zero(k);
    if (contains(dense, pos)) out |= bit(i);
    ++pos;
  }
  return out;
}

}  // namespace srpave

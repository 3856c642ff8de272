#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "clapim/base.hpp"

namespace clapim {

/// Per-base occurrence counts of a sequence, in the fixed order (A, T, G, C).
struct BaseHistogram {
  std::uint32_t a = 0;
  std::uint32_t t = 0;
  std::uint32_t g = 0;
  std::uint32_t c = 0;

  std::uint32_t sum() const { return a + t + g + c; }

  auto operator<=>(const BaseHistogram&) const = default;
};

BaseHistogram compute_histogram(const Sequence& seq);

/// L1 distance between two histograms: |A1-A2| + |T1-T2| + |G1-G2| + |C1-C2|.
std::uint32_t histogram_l1(const BaseHistogram& h1, const BaseHistogram& h2);

inline constexpr std::uint32_t kHistogramKeyBits = 18;

/// Packs (a, t, g) into an 18-bit key: a*2^12 + t*2^6 + g. The C count is
/// implied by k. Throws KeyOverflowError when a stored count exceeds 63.
std::uint32_t pack_histogram_key(const BaseHistogram& h);

/// Inverse of pack_histogram_key for a known total k.
BaseHistogram unpack_histogram_key(std::uint32_t key, std::uint32_t k);

// The 18-bit key cannot represent the three k=64 corner histograms whose
// A, T or G count is exactly 64. They are given reserved slots past 2^18 so
// table lookups stay total over all valid histograms.
inline constexpr std::uint32_t kHistogramSlots = (1u << kHistogramKeyBits) + 3;

/// Total mapping from any valid histogram (counts <= 64) to a table slot.
std::uint32_t histogram_slot(const BaseHistogram& h);

/// Inverse of histogram_slot for a known total k.
BaseHistogram histogram_from_slot(std::uint32_t slot, std::uint32_t k);

/// Number of distinct histograms of a k-length sequence: C(k+3, 3).
std::uint64_t count_valid_histograms(std::uint64_t k);

/// All valid histograms with sum k, in lexicographic (a, t, g) order.
std::vector<BaseHistogram> all_histograms(std::uint32_t k);

}  // namespace clapim

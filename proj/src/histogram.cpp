#include "clapim/histogram.hpp"

#include <cstdlib>
#include <string>

#include "clapim/errors.hpp"

namespace clapim {

namespace {

std::uint32_t abs_diff(std::uint32_t x, std::uint32_t y) { return x > y ? x - y : y - x; }

}  // namespace

BaseHistogram compute_histogram(const Sequence& seq) {
  BaseHistogram h;
  for (Base base : seq) {
    switch (base) {
      case Base::A: ++h.a; break;
      case Base::T: ++h.t; break;
      case Base::G: ++h.g; break;
      case Base::C: ++h.c; break;
    }
  }
  return h;
}

std::uint32_t histogram_l1(const BaseHistogram& h1, const BaseHistogram& h2) {
  return abs_diff(h1.a, h2.a) + abs_diff(h1.t, h2.t) + abs_diff(h1.g, h2.g) +
         abs_diff(h1.c, h2.c);
}

std::uint32_t pack_histogram_key(const BaseHistogram& h) {
  if (h.a > 63 || h.t > 63 || h.g > 63) {
    throw KeyOverflowError("histogram count exceeds 6-bit key field");
  }
  return (h.a << 12) | (h.t << 6) | h.g;
}

BaseHistogram unpack_histogram_key(std::uint32_t key, std::uint32_t k) {
  if (key >= (1u << kHistogramKeyBits)) {
    throw KeyOverflowError("key exceeds 18 bits");
  }
  BaseHistogram h;
  h.a = (key >> 12) & 0x3F;
  h.t = (key >> 6) & 0x3F;
  h.g = key & 0x3F;
  const std::uint32_t stored = h.a + h.t + h.g;
  if (stored > k) {
    throw KeyOverflowError("key inconsistent with k: stored counts exceed total");
  }
  h.c = k - stored;
  return h;
}

std::uint32_t histogram_slot(const BaseHistogram& h) {
  constexpr std::uint32_t base = 1u << kHistogramKeyBits;
  if (h.a == 64) return base + 0;
  if (h.t == 64) return base + 1;
  if (h.g == 64) return base + 2;
  return pack_histogram_key(h);
}

BaseHistogram histogram_from_slot(std::uint32_t slot, std::uint32_t k) {
  constexpr std::uint32_t base = 1u << kHistogramKeyBits;
  if (slot >= kHistogramSlots) {
    throw KeyOverflowError("slot out of range");
  }
  if (slot >= base) {
    if (k != 64) {
      throw KeyOverflowError("reserved slot only valid for k = 64");
    }
    BaseHistogram h;
    switch (slot - base) {
      case 0: h.a = 64; break;
      case 1: h.t = 64; break;
      default: h.g = 64; break;
    }
    return h;
  }
  return unpack_histogram_key(slot, k);
}

std::uint64_t count_valid_histograms(std::uint64_t k) {
  // C(k+3, 3), ordered to stay integral at every step.
  return (k + 1) * (k + 2) / 2 * (k + 3) / 3;
}

std::vector<BaseHistogram> all_histograms(std::uint32_t k) {
  std::vector<BaseHistogram> out;
  out.reserve(count_valid_histograms(k));
  for (std::uint32_t a = 0; a <= k; ++a) {
    for (std::uint32_t t = 0; t + a <= k; ++t) {
      for (std::uint32_t g = 0; g + t + a <= k; ++g) {
        out.push_back(BaseHistogram{a, t, g, k - a - t - g});
      }
    }
  }
  return out;
}

}  // namespace clapim

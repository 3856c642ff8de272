#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "clapim/base.hpp"
#include "clapim/sa_model.hpp"

namespace clapim {

/// Per-position edit marks for one (k-mer, query) pair, k <= 64.
/// Bit i set means query base i matched neither the co-located k-mer base
/// nor its left/right neighbor.
struct EditsVector {
  std::uint64_t bits = 0;
  std::uint32_t k = 0;

  int edit_count() const { return std::popcount(bits); }
  bool bit(std::uint32_t i) const { return (bits >> i) & 1u; }

  bool operator==(const EditsVector&) const = default;
};

/// A sequence of up to 64 bases split into two bit planes: bit i of `lo`
/// (`hi`) holds the low (high) code bit of base i. This lets one word op
/// compare all positions at once.
struct PackedSeq {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint32_t k = 0;

  static PackedSeq pack(const Sequence& seq);
};

/// Neighbor-tolerant comparison of a query against a stored k-mer; the exact
/// function the crossbar search program computes. Equals
/// oracle::brute_force_edits_vector bit for bit.
EditsVector edits_vector(const PackedSeq& kmer, const PackedSeq& query);
EditsVector edits_vector(const Sequence& kmer, const Sequence& query);

bool is_hit(const EditsVector& ev, const SaModel& sa, std::mt19937_64* rng = nullptr);

struct MatchResult {
  std::vector<bool> hits;
  std::size_t hit_count = 0;
};

/// Matches one query against a set of stored rows. Stochastic SA mode draws
/// once per row, in row order, from `rng`.
MatchResult match_query_against_rows(std::span<const KMerRecord> rows, const Sequence& query,
                                     const SaModel& sa, std::mt19937_64* rng = nullptr);

}  // namespace clapim

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "clapim/histogram.hpp"

namespace clapim {

/// Inclusive range of crossbar indices holding k-mers of one histogram group.
struct CrossbarRange {
  std::uint32_t first = 0;
  std::uint32_t last = 0;

  auto operator<=>(const CrossbarRange&) const = default;
};

/// Crossbar indices must serialize into three bytes.
inline constexpr std::uint32_t kMaxCrossbarIndex = 0xFFFFFF;

/// Histogram slot -> crossbar ranges of the k-mers stored under it.
using PlacementMap = std::map<std::uint32_t, std::vector<CrossbarRange>>;

/// Eq.-style base-count test: true iff histogram_l1(h1, h2) <= 2*eth,
/// i.e. the pair can still be within edit distance eth.
bool base_count_pass(const BaseHistogram& h1, const BaseHistogram& h2, int eth);

/// All valid histograms h' (sum k, counts >= 0) with L1 distance <= 2*eth
/// from h, including h itself. Lexicographic (a, t, g) order.
std::vector<BaseHistogram> enumerate_neighbors(const BaseHistogram& h, int eth, std::uint32_t k);

/// Precomputed map from a query histogram to the crossbar ranges of every
/// histogram it could hit under the base-count filter. Immutable after build.
class TracingTable {
 public:
  TracingTable(std::uint32_t k, int eth);

  std::uint32_t k() const { return k_; }
  int eth() const { return eth_; }

  std::span<const CrossbarRange> ranges_for(const BaseHistogram& h) const;

  std::size_t populated_slots() const;
  std::size_t total_ranges() const;

  /// Resident size: 4 bytes per slot plus 6 bytes (two 3-byte indices) per
  /// stored range.
  std::size_t footprint_bytes() const;

  /// Binary file: header (magic, version, k, eth, entry count) then records
  /// sorted by slot key, little-endian, 3-byte crossbar indices. Layout
  /// documented in README.md.
  void save(const std::filesystem::path& path) const;
  static TracingTable load(const std::filesystem::path& path);

  bool operator==(const TracingTable&) const = default;

 private:
  friend TracingTable build_tracing_table(const PlacementMap&, int, std::uint32_t);
  std::uint32_t k_;
  int eth_;
  std::vector<std::vector<CrossbarRange>> slots_;
};

/// Builds the table from k-mer placements: the list under each histogram is
/// the concatenation of the ranges of all its neighbors that have any
/// placements. Throws BuildError on keys that are invalid for k.
TracingTable build_tracing_table(const PlacementMap& placements, int eth, std::uint32_t k);

/// Ranges the query must be searched against; empty when nothing can hit.
std::vector<CrossbarRange> trace_query(const TracingTable& table, const Sequence& query);

struct BatchedQuery {
  Sequence query;
  BaseHistogram histogram;
  std::vector<CrossbarRange> ranges;
};

/// Queries admitted together for simultaneous search; pairwise histogram L1
/// distances all exceed 4*eth, so their filter neighborhoods are disjoint.
struct QueryBatch {
  std::vector<BatchedQuery> queries;
  std::size_t examined = 0;
};

/// Greedy first-fit batching over at most `examine_limit` queries from the
/// stream. The first query is always admitted; later ones only when strictly
/// more than 4*eth away from every admitted histogram (distance exactly
/// 4*eth still permits a shared midpoint histogram).
QueryBatch batch_queries(std::span<const Sequence> stream, const TracingTable& table, int eth,
                         std::size_t examine_limit = 350);

}  // namespace clapim

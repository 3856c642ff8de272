#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clapim/base.hpp"
#include "clapim/filter.hpp"

namespace clapim {

/// One memristive chip holds 1M crossbars (128M 64-mers at 8 GB).
inline constexpr std::uint64_t kCrossbarsPerChip = 1'000'000;

/// One crossbar's worth of k-mers. Every crossbar holds k-mers of exactly
/// one (species, histogram) group; groups larger than the row count spill
/// into the following crossbars.
struct CrossbarDescriptor {
  std::uint32_t species_id = 0;
  std::uint32_t histogram_slot = 0;
  std::vector<KMerRecord> kmers;

  bool operator==(const CrossbarDescriptor&) const = default;
};

struct DatabaseLayout {
  std::uint32_t k = 64;
  std::uint32_t rows_per_crossbar = 128;
  std::vector<CrossbarDescriptor> crossbars;
  PlacementMap placements;  ///< histogram slot -> crossbar ranges

  std::size_t total_kmers() const;
  double utilization() const;
  std::uint64_t chips_required() const;
  std::set<std::uint32_t> species() const;

  bool operator==(const DatabaseLayout&) const = default;
};

/// Input unit for the builder: species label plus genome text over
/// {A,C,G,T,N} (N positions exclude overlapping windows from extraction).
using LabeledGenome = std::pair<std::uint32_t, std::string>;

/// Stride-1 (by default) sliding-window extraction. Windows overlapping a
/// non-ACGT symbol are skipped. Throws TooShortError when |genome| < k.
std::vector<KMerRecord> extract_kmers(std::string_view genome, std::uint32_t k,
                                      std::uint32_t species_id, std::size_t stride = 1);
std::vector<KMerRecord> extract_kmers(const Sequence& genome, std::uint32_t k,
                                      std::uint32_t species_id, std::size_t stride = 1);

/// Groups k-mers by (species, histogram), packs each group into sequential
/// crossbars and records the placements. Crossbar indices are assigned in
/// sorted (species, histogram slot) order, so the result does not depend on
/// input order. `dedup` drops repeated k-mer sequences within a group.
DatabaseLayout build_layout(const std::vector<LabeledGenome>& genomes, std::uint32_t k,
                            std::uint32_t rows_per_crossbar = 128, std::size_t stride = 1,
                            bool dedup = false);

/// Versioned binary round trip; see README.md for the byte layout.
void persist_layout(const DatabaseLayout& layout, const std::filesystem::path& path);
DatabaseLayout load_layout(const std::filesystem::path& path);

/// Human-readable build summary (counts, utilization, chips required).
std::string layout_stats_report(const DatabaseLayout& layout);

}  // namespace clapim

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <utility>

#include "clapim/errors.hpp"

namespace clapim {

enum class SaMode { kIdeal, kStochastic };

/// Measured hit probabilities of the count-and-compare sense amplifier,
/// keyed by (edit-distance threshold, number of set bits in the row).
/// Pairs absent from the table fall back to the ideal step function.
class ConfidenceTable {
 public:
  /// The built-in Monte Carlo characterization: thresholds 1-9 over edit
  /// counts 1-13. Shipped as data in data/sa_confidence.txt as well.
  static ConfidenceTable builtin();

  /// Loads rows of `threshold edit_count probability` (whitespace-separated,
  /// probability a decimal in [0,1]; blank lines and '#' comments allowed).
  static ConfidenceTable load(const std::filesystem::path& path);

  void save(const std::filesystem::path& path) const;

  void insert(int threshold, int edit_count, double probability);

  std::optional<double> probability(int threshold, int edit_count) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const ConfidenceTable&) const = default;

 private:
  std::map<std::pair<int, int>, double> entries_;
};

/// The sense-amplifier decision model: an ideal step at `threshold`, or a
/// stochastic draw against the confidence table.
struct SaModel {
  SaMode mode = SaMode::kIdeal;
  int threshold = 0;
  ConfidenceTable confidence;
  std::uint64_t rng_seed = 0;

  static SaModel ideal(int threshold) { return SaModel{SaMode::kIdeal, threshold, {}, 0}; }

  static SaModel stochastic(int threshold, ConfidenceTable table, std::uint64_t seed) {
    return SaModel{SaMode::kStochastic, threshold, std::move(table), seed};
  }
};

/// Uniform double in [0, 1) built from the top 53 bits of the generator,
/// so draws are identical on every platform.
inline double canonical_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Hit decision for a row whose edits vector has `edit_count` set bits.
/// Stochastic mode consumes exactly one draw per call (even when the
/// probability is 0 or 1) so draw streams do not depend on data values.
bool sa_hit(int edit_count, const SaModel& sa, std::mt19937_64* rng = nullptr);

}  // namespace clapim

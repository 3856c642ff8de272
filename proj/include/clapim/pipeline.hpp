#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "clapim/db_builder.hpp"
#include "clapim/filter.hpp"
#include "clapim/matcher.hpp"
#include "clapim/sa_model.hpp"

namespace clapim {

enum class Backend { kFunctional, kGateLevel };

struct ClassificationResult {
  /// Winning species, or empty when no k-mer of the read hit anything.
  std::optional<std::uint32_t> assigned;
  /// Species with at least one hit and their summed hit counts.
  std::map<std::uint32_t, std::uint32_t> per_species_hits;
  /// (k-mer, stored row) pairs examined after filtering; feeds the
  /// filter-efficiency measurement.
  std::uint64_t candidate_rows = 0;
};

/// Assigns the argmax species; ties break to the lowest species id.
std::optional<std::uint32_t> argmax_species(
    const std::map<std::uint32_t, std::uint32_t>& per_species_hits);

/// Read classification against an immutable layout + tracing table. The
/// functional backend evaluates the match function directly on packed rows;
/// the gate-level backend runs the full crossbar program. Both make the
/// same hit decisions under an ideal SA and consume stochastic draws in the
/// same (crossbar, row) order.
class Classifier {
 public:
  Classifier(const DatabaseLayout& layout, const TracingTable& table, SaModel sa,
             Backend backend = Backend::kFunctional);

  /// Extracts the read's k-mers (stride 1), traces each through the filter,
  /// searches only the traced crossbars and sums hits per species.
  /// Throws TooShortError when |read| < k.
  ClassificationResult classify_read(const Sequence& read, std::mt19937_64* rng = nullptr) const;

  /// Same search, but an OR-reduction limited to the target species'
  /// crossbars: true on the first hit.
  bool detect_read(const Sequence& read, std::uint32_t target_species,
                   std::mt19937_64* rng = nullptr) const;

  /// Full-scan reference: ignores the tracing table and examines every
  /// crossbar. Used to validate that filtering only removes rows failing
  /// the base-count test.
  ClassificationResult classify_read_fullscan(const Sequence& read,
                                              std::mt19937_64* rng = nullptr) const;

  const DatabaseLayout& layout() const { return layout_; }
  const TracingTable& table() const { return table_; }
  const SaModel& sa() const { return sa_; }
  std::uint64_t total_rows() const { return total_rows_; }

 private:
  void search_crossbar(std::uint32_t xb_index, const Sequence& window, const PackedSeq& query,
                       ClassificationResult& result, std::mt19937_64* rng) const;

  const DatabaseLayout& layout_;
  const TracingTable& table_;
  SaModel sa_;
  Backend backend_;
  std::vector<std::vector<PackedSeq>> packed_rows_;  // per crossbar
  std::uint64_t total_rows_ = 0;
};

struct QualityMetrics {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  double sensitivity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

/// Sensitivity TP/(TP+FN), precision TP/(TP+FP), F1 their harmonic mean;
/// a zero denominator yields 0 for that metric.
QualityMetrics metrics_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

/// Classification scoring. A read counts TP when assigned its truth label;
/// a wrong assignment is FP (and also FN when the truth was in the
/// database); an unclassified read with in-database truth is FN.
QualityMetrics compute_metrics(std::span<const ClassificationResult> results,
                               std::span<const std::uint32_t> truth_labels,
                               const std::set<std::uint32_t>& db_species);

/// Detection scoring over (detected, is_target_read) pairs.
QualityMetrics detection_metrics(std::span<const std::pair<bool, bool>> outcomes);

}  // namespace clapim

#include "clapim/pipeline.hpp"

#include <algorithm>
#include <bit>

#include "clapim/crossbar.hpp"
#include "clapim/errors.hpp"

namespace clapim {

std::optional<std::uint32_t> argmax_species(
    const std::map<std::uint32_t, std::uint32_t>& per_species_hits) {
  std::optional<std::uint32_t> best;
  std::uint32_t best_hits = 0;
  for (const auto& [species, hits] : per_species_hits) {
    // Map order is ascending species id, so '>' keeps the lowest id on ties.
    if (hits > 0 && hits > best_hits) {
      best = species;
      best_hits = hits;
    }
  }
  return best;
}

Classifier::Classifier(const DatabaseLayout& layout, const TracingTable& table, SaModel sa,
                       Backend backend)
    : layout_(layout), table_(table), sa_(std::move(sa)), backend_(backend) {
  if (layout.k != table.k()) {
    throw ConfigError("layout and tracing table disagree on k");
  }
  packed_rows_.reserve(layout.crossbars.size());
  for (const CrossbarDescriptor& xb : layout.crossbars) {
    std::vector<PackedSeq> rows;
    rows.reserve(xb.kmers.size());
    for (const KMerRecord& rec : xb.kmers) {
      rows.push_back(PackedSeq::pack(rec.sequence));
    }
    total_rows_ += rows.size();
    packed_rows_.push_back(std::move(rows));
  }
}

void Classifier::search_crossbar(std::uint32_t xb_index, const Sequence& window,
                                 const PackedSeq& query, ClassificationResult& result,
                                 std::mt19937_64* rng) const {
  const CrossbarDescriptor& xb = layout_.crossbars[xb_index];
  std::uint32_t hits = 0;

  if (backend_ == Backend::kFunctional) {
    for (const PackedSeq& row : packed_rows_[xb_index]) {
      hits += is_hit(edits_vector(row, query), sa_, rng) ? 1 : 0;
    }
  } else {
    CrossbarState state(layout_.rows_per_crossbar, 512, layout_.k);
    state.load_kmers(xb.kmers);
    const int num_sas =
        static_cast<int>(std::bit_floor(std::min(32u, layout_.rows_per_crossbar)));
    const SearchResult sr = state.run_search_program(window, sa_, num_sas, rng);
    for (const bool hit : sr.hits) hits += hit ? 1 : 0;
  }

  result.candidate_rows += xb.kmers.size();
  if (hits > 0) {
    result.per_species_hits[xb.species_id] += hits;
  }
}

ClassificationResult Classifier::classify_read(const Sequence& read,
                                               std::mt19937_64* rng) const {
  const std::uint32_t k = layout_.k;
  if (read.size() < k) {
    throw TooShortError("read shorter than k");
  }
  ClassificationResult result;
  for (std::size_t pos = 0; pos + k <= read.size(); ++pos) {
    const Sequence window = read.subsequence(pos, k);
    const PackedSeq query = PackedSeq::pack(window);
    for (const CrossbarRange& range : table_.ranges_for(compute_histogram(window))) {
      for (std::uint32_t xb = range.first; xb <= range.last; ++xb) {
        search_crossbar(xb, window, query, result, rng);
      }
    }
  }
  result.assigned = argmax_species(result.per_species_hits);
  return result;
}

ClassificationResult Classifier::classify_read_fullscan(const Sequence& read,
                                                        std::mt19937_64* rng) const {
  const std::uint32_t k = layout_.k;
  if (read.size() < k) {
    throw TooShortError("read shorter than k");
  }
  ClassificationResult result;
  for (std::size_t pos = 0; pos + k <= read.size(); ++pos) {
    const Sequence window = read.subsequence(pos, k);
    const PackedSeq query = PackedSeq::pack(window);
    for (std::uint32_t xb = 0; xb < layout_.crossbars.size(); ++xb) {
      search_crossbar(xb, window, query, result, rng);
    }
  }
  result.assigned = argmax_species(result.per_species_hits);
  return result;
}

bool Classifier::detect_read(const Sequence& read, std::uint32_t target_species,
                             std::mt19937_64* rng) const {
  const std::uint32_t k = layout_.k;
  if (read.size() < k) {
    throw TooShortError("read shorter than k");
  }
  for (std::size_t pos = 0; pos + k <= read.size(); ++pos) {
    const Sequence window = read.subsequence(pos, k);
    const PackedSeq query = PackedSeq::pack(window);
    for (const CrossbarRange& range : table_.ranges_for(compute_histogram(window))) {
      for (std::uint32_t xb = range.first; xb <= range.last; ++xb) {
        if (layout_.crossbars[xb].species_id != target_species) continue;
        for (const PackedSeq& row : packed_rows_[xb]) {
          if (is_hit(edits_vector(row, query), sa_, rng)) {
            return true;
          }
        }
      }
    }
  }
  return false;
}

QualityMetrics metrics_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  QualityMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.sensitivity = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  const double sum = m.sensitivity + m.precision;
  m.f1 = (sum > 0.0) ? 2.0 * m.sensitivity * m.precision / sum : 0.0;
  return m;
}

QualityMetrics compute_metrics(std::span<const ClassificationResult> results,
                               std::span<const std::uint32_t> truth_labels,
                               const std::set<std::uint32_t>& db_species) {
  if (results.size() != truth_labels.size()) {
    throw ConfigError("results and truth labels differ in length");
  }
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& assigned = results[i].assigned;
    const std::uint32_t truth = truth_labels[i];
    const bool truth_in_db = db_species.count(truth) > 0;
    if (assigned.has_value()) {
      if (truth_in_db && *assigned == truth) {
        ++tp;
      } else {
        ++fp;
        if (truth_in_db) ++fn;  // its true match was missed as well
      }
    } else if (truth_in_db) {
      ++fn;
    }
  }
  return metrics_from_counts(tp, fp, fn);
}

QualityMetrics detection_metrics(std::span<const std::pair<bool, bool>> outcomes) {
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (const auto& [detected, is_target] : outcomes) {
    if (detected && is_target) ++tp;
    if (detected && !is_target) ++fp;
    if (!detected && is_target) ++fn;
  }
  return metrics_from_counts(tp, fp, fn);
}

}  // namespace clapim

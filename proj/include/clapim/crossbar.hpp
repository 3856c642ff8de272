#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "clapim/base.hpp"
#include "clapim/sa_model.hpp"

namespace clapim {

/// Half-open column span [begin, begin + width).
struct ColumnSpan {
  std::uint32_t begin = 0;
  std::uint32_t width = 0;

  std::uint32_t end() const { return begin + width; }
  bool contains(std::uint32_t col) const { return col >= begin && col < end(); }
};

/// Where everything lives inside one crossbar row.
///
/// Fixed data regions: the stored k-mer (2 bits per base), the broadcast
/// query (2 bits per base) and the k-column edits vector. The match columns
/// (mc/ml/mr) and the XOR scratch pool are sized for `bases_per_epoch` bases
/// and recycled: the search program re-initializes them between epochs, so a
/// 512-column row fits the whole 64-base program.
struct ColumnLayout {
  std::uint32_t k = 0;
  std::uint32_t bases_per_epoch = 0;

  ColumnSpan kmer_cols;
  ColumnSpan query_cols;
  ColumnSpan edits_cols;
  ColumnSpan mc_cols;
  ColumnSpan ml_cols;
  ColumnSpan mr_cols;
  ColumnSpan scratch_cols;

  /// Throws LayoutError when k bases cannot fit in `cols` columns.
  static ColumnLayout plan(std::uint32_t k, std::uint32_t cols);

  std::uint32_t kmer_bit_col(std::uint32_t base, std::uint32_t bit) const {
    return kmer_cols.begin + 2 * base + bit;
  }
  std::uint32_t query_bit_col(std::uint32_t base, std::uint32_t bit) const {
    return query_cols.begin + 2 * base + bit;
  }
  std::uint32_t edits_col(std::uint32_t base) const { return edits_cols.begin + base; }
  std::uint32_t slot(std::uint32_t base) const { return base % bases_per_epoch; }
  std::uint32_t epoch(std::uint32_t base) const { return base / bases_per_epoch; }
  std::uint32_t epochs() const { return (k + bases_per_epoch - 1) / bases_per_epoch; }
};

struct SearchStats {
  std::uint64_t cycles = 0;       ///< total: query write + MAGIC + SA reads
  std::uint64_t magic_cycles = 0; ///< init + evaluation cycles only
  std::uint64_t sa_reads = 0;
  std::uint64_t writes = 0;       ///< cell drives this search, all rows

  bool operator==(const SearchStats&) const = default;
};

struct SearchResult {
  std::vector<bool> hits;  ///< one entry per populated row
  SearchStats stats;
};

/// Bit-exact model of one memristive crossbar executing the in-place search
/// program. Cells are boolean (true = logical 1 = low resistance); a MAGIC
/// evaluation can only pull an output cell down, so results are wrong unless
/// the schedule initialized the cell first - deliberately, to surface
/// schedule bugs. Per-cell write counters persist across searches for
/// endurance accounting.
class CrossbarState {
 public:
  explicit CrossbarState(std::uint32_t rows = 128, std::uint32_t cols = 512,
                         std::uint32_t k = 64);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  std::uint32_t k() const { return k_; }
  const ColumnLayout& layout() const { return layout_; }

  bool cell(std::uint32_t row, std::uint32_t col) const;
  /// Drives one cell to a value. Counts as a write whether or not the value
  /// changes.
  void set_cell(std::uint32_t row, std::uint32_t col, bool value);

  std::uint32_t write_count(std::uint32_t row, std::uint32_t col) const;
  std::uint64_t total_writes() const { return total_writes_; }
  std::uint64_t cycle_count() const { return cycles_; }
  std::uint64_t magic_cycle_count() const { return magic_cycles_; }

  std::uint32_t populated_rows() const { return populated_; }
  double utilization() const { return static_cast<double>(populated_) / rows_; }

  /// Stores up to `rows()` k-mers, one per row starting at row 0. Remaining
  /// rows are flagged unused. Throws CapacityError / LengthError.
  void load_kmers(std::span<const KMerRecord> kmers);

  /// Broadcasts the query to every row; one write cycle per query column.
  void write_query(const Sequence& query);

  /// Standalone MAGIC NOR (1-3 inputs): one init cycle plus one evaluation.
  void exec_nor(std::span<const std::uint32_t> in_cols, std::uint32_t out_col);

  /// XOR via ((a'+b')' + (a+b)')': five NOR evaluations after a single
  /// batched init cycle. Needs four scratch columns.
  void exec_xor(std::uint32_t a_col, std::uint32_t b_col, std::uint32_t out_col,
                std::span<const std::uint32_t> scratch);

  /// Runs the full search program against the loaded k-mers and returns the
  /// per-row hit decisions plus this search's cycle/write accounting.
  /// `rng` is required in stochastic SA mode: one draw per populated row,
  /// ascending row order.
  SearchResult run_search_program(const Sequence& query, const SaModel& sa, int num_sas,
                                  std::mt19937_64* rng = nullptr);

  /// Number of set bits in a row's edits vector.
  int edits_count(std::uint32_t row) const;

  /// Count-and-compare decision for one row (cycle cost is accounted by
  /// run_search_program's SA phase, not here).
  bool sa_count_and_compare(std::uint32_t row, const SaModel& sa,
                            std::mt19937_64* rng = nullptr) const;

  /// Enables a plain-text execution trace: one line per cycle,
  /// `cycle op out_col in_cols`. Pass nullptr to disable.
  void set_trace(std::ostream* sink) { trace_ = sink; }

 private:
  void check_col(std::uint32_t col) const;
  std::uint64_t row_mask(std::uint32_t word) const;
  void count_column_write(std::uint32_t col);
  void init_cells(std::span<const std::uint32_t> cols);
  void eval_nor(std::span<const std::uint32_t> in_cols, std::uint32_t out_col);
  void run_magic_program();

  std::uint32_t rows_;
  std::uint32_t cols_;
  std::uint32_t k_;
  std::uint32_t words_;
  ColumnLayout layout_;
  std::vector<std::uint64_t> cells_;     // column-major bit planes
  std::vector<std::uint32_t> counts_;    // column-major per-cell write counts
  std::uint32_t populated_ = 0;
  std::uint64_t total_writes_ = 0;
  std::uint64_t cycles_ = 0;
  std::uint64_t magic_cycles_ = 0;
  std::ostream* trace_ = nullptr;
};

}  // namespace clapim

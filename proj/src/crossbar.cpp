#include "clapim/crossbar.hpp"

#include <array>
#include <bit>
#include <ostream>

#include "clapim/errors.hpp"

namespace clapim {

// Canonical search-program schedule
// ---------------------------------
//
// Per base i, the query base is compared against the co-located stored base
// and its left/right neighbors. Each comparison costs 11 evaluation cycles:
// two XOR gates (5 NOR evaluations each, decomposed as
// a^b = ((a'+b')' + (a+b)')') plus one NOR that combines the two XOR outputs
// into a match bit. A final NOR over the available match bits drives the
// edits-vector bit, so an interior base costs 3*11 + 1 = 34 evaluations and
// the two edge bases (one neighbor missing) cost 2*11 + 1 = 23.
//
// Output cells must be initialized to 1 before evaluation. Initializations
// are batched: the scratch pool holds `bases_per_epoch` independent 33-column
// slots (3 match columns + 30 XOR scratch), so one init cycle per epoch
// re-arms everything the next group of bases needs; the k edits cells are
// folded into the first epoch's init.
//
// For k = 64 in a 512-column row the pool fits 5 bases per epoch
// (floor((512 - 5*64) / 33) = 5), giving
//   62*34 + 2*23 = 2154 evaluation cycles
//   ceil(64/5)   =   13 init cycles
//   total          2167 MAGIC cycles per search.
// Query-write cycles and SA read cycles are accounted separately.

namespace {

constexpr std::uint32_t kColumnsPerComparison = 10;  // 2 XORs x 5 driven cells
constexpr std::uint32_t kColumnsPerSlot = 3 * kColumnsPerComparison;

enum Neighbor : std::uint32_t { kCo = 0, kLeft = 1, kRight = 2 };

}  // namespace

ColumnLayout ColumnLayout::plan(std::uint32_t k, std::uint32_t cols) {
  if (k == 0) {
    throw LayoutError("k must be positive");
  }
  if (k > 64) {
    throw LayoutError("a row supports at most 64 bases");
  }
  const std::uint32_t fixed = 5 * k;  // kmer(2k) + query(2k) + edits(k)
  if (cols < fixed + kColumnsPerSlot + 3) {
    throw LayoutError("crossbar too narrow for k=" + std::to_string(k));
  }
  std::uint32_t per_epoch = (cols - fixed) / (kColumnsPerSlot + 3);
  if (per_epoch > k) per_epoch = k;

  ColumnLayout layout;
  layout.k = k;
  layout.bases_per_epoch = per_epoch;
  layout.kmer_cols = {0, 2 * k};
  layout.query_cols = {2 * k, 2 * k};
  layout.edits_cols = {4 * k, k};
  layout.mc_cols = {5 * k, per_epoch};
  layout.ml_cols = {5 * k + per_epoch, per_epoch};
  layout.mr_cols = {5 * k + 2 * per_epoch, per_epoch};
  layout.scratch_cols = {5 * k + 3 * per_epoch, kColumnsPerComparison * 3 * per_epoch};
  return layout;
}

CrossbarState::CrossbarState(std::uint32_t rows, std::uint32_t cols, std::uint32_t k)
    : rows_(rows),
      cols_(cols),
      k_(k),
      words_((rows + 63) / 64),
      layout_(ColumnLayout::plan(k, cols)),
      cells_(static_cast<std::size_t>(cols) * words_, 0),
      counts_(static_cast<std::size_t>(cols) * rows, 0) {
  if (rows_ == 0) {
    throw LayoutError("crossbar needs at least one row");
  }
}

void CrossbarState::check_col(std::uint32_t col) const {
  if (col >= cols_) {
    throw LayoutError("column index out of range");
  }
}

std::uint64_t CrossbarState::row_mask(std::uint32_t word) const {
  const std::uint32_t used = std::min<std::uint32_t>(64, rows_ - word * 64);
  return used == 64 ? ~0ull : ((1ull << used) - 1);
}

bool CrossbarState::cell(std::uint32_t row, std::uint32_t col) const {
  check_col(col);
  if (row >= rows_) throw LayoutError("row index out of range");
  return (cells_[static_cast<std::size_t>(col) * words_ + row / 64] >> (row % 64)) & 1u;
}

void CrossbarState::set_cell(std::uint32_t row, std::uint32_t col, bool value) {
  check_col(col);
  if (row >= rows_) throw LayoutError("row index out of range");
  std::uint64_t& word = cells_[static_cast<std::size_t>(col) * words_ + row / 64];
  const std::uint64_t bit = 1ull << (row % 64);
  word = value ? (word | bit) : (word & ~bit);
  ++counts_[static_cast<std::size_t>(col) * rows_ + row];
  ++total_writes_;
}

std::uint32_t CrossbarState::write_count(std::uint32_t row, std::uint32_t col) const {
  check_col(col);
  if (row >= rows_) throw LayoutError("row index out of range");
  return counts_[static_cast<std::size_t>(col) * rows_ + row];
}

void CrossbarState::count_column_write(std::uint32_t col) {
  std::uint32_t* base = counts_.data() + static_cast<std::size_t>(col) * rows_;
  for (std::uint32_t r = 0; r < rows_; ++r) ++base[r];
  total_writes_ += rows_;
}

void CrossbarState::load_kmers(std::span<const KMerRecord> kmers) {
  if (kmers.size() > rows_) {
    throw CapacityError("crossbar holds at most " + std::to_string(rows_) + " k-mers");
  }
  for (std::size_t row = 0; row < kmers.size(); ++row) {
    const Sequence& seq = kmers[row].sequence;
    if (seq.size() != k_) {
      throw LengthError("k-mer length does not match crossbar k");
    }
    for (std::uint32_t i = 0; i < k_; ++i) {
      const auto code = static_cast<std::uint32_t>(seq[i]);
      set_cell(static_cast<std::uint32_t>(row), layout_.kmer_bit_col(i, 0), code & 1u);
      set_cell(static_cast<std::uint32_t>(row), layout_.kmer_bit_col(i, 1), (code >> 1) & 1u);
    }
  }
  populated_ = static_cast<std::uint32_t>(kmers.size());
}

void CrossbarState::write_query(const Sequence& query) {
  if (query.size() != k_) {
    throw LengthError("query length does not match crossbar k");
  }
  for (std::uint32_t i = 0; i < k_; ++i) {
    const auto code = static_cast<std::uint32_t>(query[i]);
    for (std::uint32_t bit = 0; bit < 2; ++bit) {
      const std::uint32_t col = layout_.query_bit_col(i, bit);
      const std::uint64_t value = ((code >> bit) & 1u) ? ~0ull : 0ull;
      for (std::uint32_t w = 0; w < words_; ++w) {
        cells_[static_cast<std::size_t>(col) * words_ + w] = value & row_mask(w);
      }
      count_column_write(col);
      ++cycles_;
      if (trace_) *trace_ << cycles_ << " write " << col << '\n';
    }
  }
}

void CrossbarState::init_cells(std::span<const std::uint32_t> cols) {
  for (std::uint32_t col : cols) {
    check_col(col);
    for (std::uint32_t w = 0; w < words_; ++w) {
      cells_[static_cast<std::size_t>(col) * words_ + w] = row_mask(w);
    }
    count_column_write(col);
  }
  ++cycles_;
  ++magic_cycles_;
  if (trace_) {
    *trace_ << cycles_ << " init ";
    for (std::size_t i = 0; i < cols.size(); ++i) *trace_ << (i ? "," : "") << cols[i];
    *trace_ << '\n';
  }
}

void CrossbarState::eval_nor(std::span<const std::uint32_t> in_cols, std::uint32_t out_col) {
  std::uint64_t* out = cells_.data() + static_cast<std::size_t>(out_col) * words_;
  for (std::uint32_t w = 0; w < words_; ++w) {
    std::uint64_t acc = 0;
    for (std::uint32_t in : in_cols) {
      acc |= cells_[static_cast<std::size_t>(in) * words_ + w];
    }
    // The gate can only pull an initialized output down.
    out[w] &= ~acc & row_mask(w);
  }
  count_column_write(out_col);
  ++cycles_;
  ++magic_cycles_;
  if (trace_) {
    *trace_ << cycles_ << " nor " << out_col << ' ';
    for (std::size_t i = 0; i < in_cols.size(); ++i) *trace_ << (i ? "," : "") << in_cols[i];
    *trace_ << '\n';
  }
}

void CrossbarState::exec_nor(std::span<const std::uint32_t> in_cols, std::uint32_t out_col) {
  if (in_cols.empty() || in_cols.size() > 3) {
    throw LayoutError("MAGIC NOR takes 1-3 inputs");
  }
  check_col(out_col);
  for (std::uint32_t in : in_cols) {
    check_col(in);
    if (in == out_col) {
      throw LayoutError("NOR output column collides with an input");
    }
  }
  const std::uint32_t out[1] = {out_col};
  init_cells(out);
  eval_nor(in_cols, out_col);
}

void CrossbarState::exec_xor(std::uint32_t a_col, std::uint32_t b_col, std::uint32_t out_col,
                             std::span<const std::uint32_t> scratch) {
  if (scratch.size() < 4) {
    throw LayoutError("XOR needs four scratch columns");
  }
  const std::array<std::uint32_t, 7> used = {a_col,      b_col,      out_col,   scratch[0],
                                             scratch[1], scratch[2], scratch[3]};
  for (std::size_t i = 0; i < used.size(); ++i) {
    check_col(used[i]);
    for (std::size_t j = i + 1; j < used.size(); ++j) {
      if (used[i] == used[j]) {
        throw LayoutError("XOR columns must be distinct");
      }
    }
  }
  const std::uint32_t not_a = scratch[0], not_b = scratch[1];
  const std::uint32_t t_and = scratch[2], t_nor = scratch[3];

  const std::array<std::uint32_t, 5> outs = {not_a, not_b, t_and, t_nor, out_col};
  init_cells(outs);
  eval_nor(std::array{a_col}, not_a);
  eval_nor(std::array{b_col}, not_b);
  eval_nor(std::array{not_a, not_b}, t_and);
  eval_nor(std::array{a_col, b_col}, t_nor);
  eval_nor(std::array{t_and, t_nor}, out_col);
}

void CrossbarState::run_magic_program() {
  const ColumnLayout& L = layout_;
  std::vector<std::uint32_t> init_list;
  init_list.reserve(static_cast<std::size_t>(L.bases_per_epoch) * (kColumnsPerSlot + 3) + k_);

  const auto m_col = [&](std::uint32_t slot, Neighbor n) {
    switch (n) {
      case kCo: return L.mc_cols.begin + slot;
      case kLeft: return L.ml_cols.begin + slot;
      default: return L.mr_cols.begin + slot;
    }
  };
  const auto scratch_base = [&](std::uint32_t slot, Neighbor n) {
    return L.scratch_cols.begin + slot * kColumnsPerSlot + n * kColumnsPerComparison;
  };

  for (std::uint32_t epoch = 0; epoch < L.epochs(); ++epoch) {
    const std::uint32_t first = epoch * L.bases_per_epoch;
    const std::uint32_t last = std::min(k_, first + L.bases_per_epoch);

    // One init cycle re-arms every output cell this epoch drives.
    init_list.clear();
    if (epoch == 0) {
      for (std::uint32_t i = 0; i < k_; ++i) init_list.push_back(L.edits_col(i));
    }
    for (std::uint32_t i = first; i < last; ++i) {
      const std::uint32_t slot = L.slot(i);
      for (Neighbor n : {kCo, kLeft, kRight}) {
        if (n == kLeft && i == 0) continue;
        if (n == kRight && i + 1 == k_) continue;
        init_list.push_back(m_col(slot, n));
        const std::uint32_t s = scratch_base(slot, n);
        for (std::uint32_t c = 0; c < kColumnsPerComparison; ++c) init_list.push_back(s + c);
      }
    }
    init_cells(init_list);

    for (std::uint32_t i = first; i < last; ++i) {
      const std::uint32_t slot = L.slot(i);
      std::array<std::uint32_t, 3> match_cols{};
      std::uint32_t match_count = 0;

      for (Neighbor n : {kCo, kLeft, kRight}) {
        if (n == kLeft && i == 0) continue;
        if (n == kRight && i + 1 == k_) continue;
        const std::uint32_t stored = (n == kCo) ? i : (n == kLeft ? i - 1 : i + 1);
        const std::uint32_t s = scratch_base(slot, n);

        std::array<std::uint32_t, 2> xor_out{};
        for (std::uint32_t bit = 0; bit < 2; ++bit) {
          const std::uint32_t a = L.query_bit_col(i, bit);
          const std::uint32_t b = L.kmer_bit_col(stored, bit);
          const std::uint32_t base = s + 5 * bit;
          const std::uint32_t not_a = base, not_b = base + 1;
          const std::uint32_t t_and = base + 2, t_nor = base + 3, out = base + 4;
          eval_nor(std::array{a}, not_a);
          eval_nor(std::array{b}, not_b);
          eval_nor(std::array{not_a, not_b}, t_and);
          eval_nor(std::array{a, b}, t_nor);
          eval_nor(std::array{t_and, t_nor}, out);
          xor_out[bit] = out;
        }
        // Match iff both bit comparisons came out equal (both XORs are 0).
        const std::uint32_t m = m_col(slot, n);
        eval_nor(xor_out, m);
        match_cols[match_count++] = m;
      }

      eval_nor(std::span<const std::uint32_t>(match_cols.data(), match_count), L.edits_col(i));
    }
  }
}

int CrossbarState::edits_count(std::uint32_t row) const {
  if (row >= rows_) throw LayoutError("row index out of range");
  int count = 0;
  const std::uint32_t word = row / 64;
  const std::uint64_t bit = 1ull << (row % 64);
  for (std::uint32_t i = 0; i < k_; ++i) {
    const std::uint32_t col = layout_.edits_col(i);
    count += (cells_[static_cast<std::size_t>(col) * words_ + word] & bit) ? 1 : 0;
  }
  return count;
}

bool CrossbarState::sa_count_and_compare(std::uint32_t row, const SaModel& sa,
                                         std::mt19937_64* rng) const {
  return sa_hit(edits_count(row), sa, rng);
}

SearchResult CrossbarState::run_search_program(const Sequence& query, const SaModel& sa,
                                               int num_sas, std::mt19937_64* rng) {
  if (populated_ == 0) {
    throw EmptyCrossbarError("no k-mers loaded");
  }
  if (num_sas < 1 || static_cast<std::uint32_t>(num_sas) > rows_ ||
      !std::has_single_bit(static_cast<std::uint32_t>(num_sas))) {
    throw ConfigError("num_sas must be a power of two in [1, rows]");
  }

  const std::uint64_t cycles0 = cycles_;
  const std::uint64_t magic0 = magic_cycles_;
  const std::uint64_t writes0 = total_writes_;

  write_query(query);
  run_magic_program();

  SearchResult result;
  result.stats.sa_reads = (rows_ + num_sas - 1) / static_cast<std::uint32_t>(num_sas);
  cycles_ += result.stats.sa_reads;

  result.hits.reserve(populated_);
  for (std::uint32_t row = 0; row < populated_; ++row) {
    result.hits.push_back(sa_count_and_compare(row, sa, rng));
  }

  result.stats.cycles = cycles_ - cycles0;
  result.stats.magic_cycles = magic_cycles_ - magic0;
  result.stats.writes = total_writes_ - writes0;
  return result;
}

}  // namespace clapim

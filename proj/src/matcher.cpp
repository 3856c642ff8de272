#include "clapim/matcher.hpp"

#include "clapim/errors.hpp"

namespace clapim {

PackedSeq PackedSeq::pack(const Sequence& seq) {
  if (seq.size() > 64) {
    throw LengthError("packed sequences support at most 64 bases");
  }
  PackedSeq p;
  p.k = static_cast<std::uint32_t>(seq.size());
  for (std::uint32_t i = 0; i < p.k; ++i) {
    const auto code = static_cast<std::uint64_t>(seq[i]);
    p.lo |= (code & 1u) << i;
    p.hi |= ((code >> 1) & 1u) << i;
  }
  return p;
}

EditsVector edits_vector(const PackedSeq& kmer, const PackedSeq& query) {
  if (kmer.k != query.k) {
    throw LengthError("edits vector requires equal-length sequences");
  }
  const std::uint32_t k = kmer.k;
  if (k == 0) {
    return EditsVector{0, 0};
  }
  const std::uint64_t mask = (k == 64) ? ~0ull : ((1ull << k) - 1);

  // Position-wise base equality: both code bits agree.
  const std::uint64_t eq_c = ~((query.lo ^ kmer.lo) | (query.hi ^ kmer.hi));
  // Left neighbor: query[i] vs kmer[i-1]; shifting the k-mer planes up by one
  // aligns bit i-1 under bit i. Position 0 has no left neighbor.
  const std::uint64_t eq_l =
      ~((query.lo ^ (kmer.lo << 1)) | (query.hi ^ (kmer.hi << 1))) & ~1ull;
  // Right neighbor: query[i] vs kmer[i+1]; position k-1 has none.
  const std::uint64_t eq_r =
      ~((query.lo ^ (kmer.lo >> 1)) | (query.hi ^ (kmer.hi >> 1))) & ~(1ull << (k - 1));

  return EditsVector{~(eq_c | eq_l | eq_r) & mask, k};
}

EditsVector edits_vector(const Sequence& kmer, const Sequence& query) {
  return edits_vector(PackedSeq::pack(kmer), PackedSeq::pack(query));
}

bool is_hit(const EditsVector& ev, const SaModel& sa, std::mt19937_64* rng) {
  return sa_hit(ev.edit_count(), sa, rng);
}

MatchResult match_query_against_rows(std::span<const KMerRecord> rows, const Sequence& query,
                                     const SaModel& sa, std::mt19937_64* rng) {
  const PackedSeq packed_query = PackedSeq::pack(query);
  MatchResult result;
  result.hits.reserve(rows.size());
  for (const KMerRecord& row : rows) {
    const EditsVector ev = edits_vector(PackedSeq::pack(row.sequence), packed_query);
    const bool hit = is_hit(ev, sa, rng);
    result.hits.push_back(hit);
    result.hit_count += hit ? 1 : 0;
  }
  return result;
}

}  // namespace clapim

#pragma once

#include <vector>

#include "clapim/base.hpp"

namespace clapim {
// Reference implementations used to validate the fast paths. Deliberately
// naive; nothing here may call into matcher or the crossbar simulator.
namespace oracle {

/// Levenshtein distance (substitutions + insertions + deletions) by the
/// standard dynamic program.
int edit_distance(const Sequence& s1, const Sequence& s2);

/// Position-by-position neighbor comparison: bit i is set iff query[i]
/// matches none of kmer[i-1], kmer[i], kmer[i+1]. A missing neighbor at
/// either end counts as a mismatch. Throws LengthError on unequal lengths.
std::vector<bool> brute_force_edits_vector(const Sequence& kmer, const Sequence& query);

}  // namespace oracle
}  // namespace clapim

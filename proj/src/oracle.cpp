#include "clapim/oracle.hpp"

#include <algorithm>

#include "clapim/errors.hpp"

namespace clapim::oracle {

int edit_distance(const Sequence& s1, const Sequence& s2) {
  const std::size_t n = s1.size();
  const std::size_t m = s2.size();
  std::vector<int> prev(m + 1), curr(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    curr[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (s1[i - 1] == s2[j - 1] ? 0 : 1);
      curr[j] = std::min({sub, prev[j] + 1, curr[j - 1] + 1});
    }
    std::swap(prev, curr);
  }
  return prev[m];
}

std::vector<bool> brute_force_edits_vector(const Sequence& kmer, const Sequence& query) {
  if (kmer.size() != query.size()) {
    throw LengthError("edits vector requires equal-length sequences");
  }
  const std::size_t k = kmer.size();
  std::vector<bool> bits(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    bool matched = false;
    if (i > 0 && kmer[i - 1] == query[i]) matched = true;
    if (kmer[i] == query[i]) matched = true;
    if (i + 1 < k && kmer[i + 1] == query[i]) matched = true;
    bits[i] = !matched;
  }
  return bits;
}

}  // namespace clapim::oracle

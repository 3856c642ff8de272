#include <random>

#include "clapim/histogram.hpp"
#include "clapim/oracle.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace clapim;
using testutil::random_seq;

namespace {

int popcount(const std::vector<bool>& bits) {
  int n = 0;
  for (bool b : bits) n += b ? 1 : 0;
  return n;
}

int hamming(const Sequence& a, const Sequence& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] == b[i] ? 0 : 1;
  return d;
}

}  // namespace

TEST_CASE("edit_distance examples") {
  CHECK(oracle::edit_distance(Sequence::from_string("CAC"), Sequence::from_string("AAA")) == 2);
  CHECK(oracle::edit_distance(Sequence::from_string("ACGT"), Sequence::from_string("CGTT")) == 2);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_seq(rng, 1 + rng() % 20);
    CHECK(oracle::edit_distance(s, s) == 0);
  }
}

TEST_CASE("edit_distance is symmetric and satisfies the triangle inequality") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto a = random_seq(rng, 1 + rng() % 16);
    const auto b = random_seq(rng, 1 + rng() % 16);
    const auto c = random_seq(rng, 1 + rng() % 16);
    const int ab = oracle::edit_distance(a, b);
    const int bc = oracle::edit_distance(b, c);
    const int ac = oracle::edit_distance(a, c);
    CHECK(ab == oracle::edit_distance(b, a));
    CHECK(ac <= ab + bc);
    CHECK(ab <= static_cast<int>(std::max(a.size(), b.size())));
  }
}

TEST_CASE("brute_force_edits_vector examples") {
  SUBCASE("identical sequences have no edits") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
      const auto s = random_seq(rng, 1 + rng() % 64);
      CHECK(popcount(oracle::brute_force_edits_vector(s, s)) == 0);
    }
  }

  SUBCASE("AAAA vs AATA marks only position 2") {
    const auto bits = oracle::brute_force_edits_vector(Sequence::from_string("AAAA"),
                                                       Sequence::from_string("AATA"));
    CHECK(bits == std::vector<bool>{false, false, true, false});
  }

  SUBCASE("a single shift is fully absorbed by neighbor matching") {
    const auto bits = oracle::brute_force_edits_vector(Sequence::from_string("ACGT"),
                                                       Sequence::from_string("CGTT"));
    CHECK(popcount(bits) == 0);
  }

  CHECK_THROWS_AS(oracle::brute_force_edits_vector(Sequence::from_string("AA"),
                                                   Sequence::from_string("AAA")),
                  LengthError);
}

TEST_CASE("counted edits never exceed the Hamming distance") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t k = 1 + rng() % 32;
    const auto kmer = random_seq(rng, k);
    const auto query = random_seq(rng, k);
    CHECK(popcount(oracle::brute_force_edits_vector(kmer, query)) <= hamming(kmer, query));
  }
}

TEST_CASE("histogram L1 lower-bounds twice the edit distance") {
  // The soundness basis of the base-count filter; checked exhaustively for
  // short strings here and at scale in the acceptance suite.
  for (std::size_t k = 1; k <= 4; ++k) {
    const std::uint64_t total = 1ull << (2 * k);
    for (std::uint64_t i = 0; i < total; ++i) {
      for (std::uint64_t j = 0; j < total; ++j) {
        const auto s1 = testutil::nth_seq(i, k);
        const auto s2 = testutil::nth_seq(j, k);
        CHECK(histogram_l1(compute_histogram(s1), compute_histogram(s2)) <=
              2u * static_cast<unsigned>(oracle::edit_distance(s1, s2)));
      }
    }
  }
}

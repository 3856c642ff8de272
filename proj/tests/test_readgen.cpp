#include <random>

#include "clapim/errors.hpp"
#include "clapim/readgen.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace clapim;

TEST_CASE("builtin profiles carry the published rates verbatim") {
  const auto [low, high] = builtin_profiles();
  CHECK(low.substitution_rate == 0.036);
  CHECK(low.insertion_rate == 0.002);
  CHECK(low.deletion_rate == 0.002);
  CHECK(high.substitution_rate == 0.01);
  CHECK(high.insertion_rate == 0.07);
  CHECK(high.deletion_rate == 0.07);
  CHECK(low.total() < 1.0);
  CHECK(high.total() < 1.0);
}

TEST_CASE("inject_errors") {
  std::mt19937_64 rng(123);
  const auto seq = testutil::random_seq(rng, 64);

  SUBCASE("the zero profile is the identity") {
    CHECK(inject_errors(seq, ErrorProfile{}, 5) == seq);
  }

  SUBCASE("substitution rate 1 flips every base and keeps the length") {
    const auto mutated = inject_errors(seq, ErrorProfile{1.0, 0.0, 0.0}, 7);
    REQUIRE(mutated.size() == seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      CHECK(mutated[i] != seq[i]);
    }
  }

  SUBCASE("deterministic under a fixed seed") {
    const auto [low, high] = builtin_profiles();
    CHECK(inject_errors(seq, high, 42) == inject_errors(seq, high, 42));
    CHECK(inject_errors(seq, high, 42) != inject_errors(seq, high, 43));
  }

  SUBCASE("rates out of range are rejected") {
    CHECK_THROWS_AS(inject_errors(seq, ErrorProfile{-0.1, 0, 0}, 1), ConfigError);
    CHECK_THROWS_AS(inject_errors(seq, ErrorProfile{0, 1.5, 0}, 1), ConfigError);
  }
}

TEST_CASE("measured event rates track the profile within 0.2 percentage points") {
  const auto [low, high] = builtin_profiles();
  for (const ErrorProfile& profile : {low, high}) {
    std::mt19937_64 rng(2024);
    const auto window = testutil::random_seq(rng, 1024);
    InjectionStats stats;
    while (stats.source_bases < 1'000'000) {
      // Oversized target so the whole window is processed each pass.
      inject_errors(window, profile, 2 * window.size(), rng, &stats);
    }
    const double n = static_cast<double>(stats.source_bases);
    CHECK(std::abs(stats.substitutions / n - profile.substitution_rate) < 0.002);
    CHECK(std::abs(stats.deletions / n - profile.deletion_rate) < 0.002);
    CHECK(std::abs(stats.insertions / n - profile.insertion_rate) < 0.002);
  }
}

TEST_CASE("generate_sample") {
  const std::string g1 = synthetic_genome(5000, 404);
  const std::string g2 = synthetic_genome(4000, 405);
  const auto [low, high] = builtin_profiles();

  SUBCASE("labels, lengths and determinism") {
    const auto a = generate_sample({{3, g1}, {8, g2}}, 50, 64, high, 99);
    const auto b = generate_sample({{3, g1}, {8, g2}}, 50, 64, high, 99);
    CHECK(a == b);
    REQUIRE(a.size() == 100);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].sequence.size() == 64);
      CHECK(a[i].truth_species == (i < 50 ? 3u : 8u));
      CHECK(a[i].origin_offset <= (i < 50 ? g1.size() : g2.size()) - 64);
    }
    CHECK(a != generate_sample({{3, g1}, {8, g2}}, 50, 64, high, 100));
  }

  SUBCASE("a zero profile reproduces genome windows verbatim") {
    const auto reads = generate_sample({{1, g1}}, 40, 64, ErrorProfile{}, 7);
    for (const auto& read : reads) {
      CHECK(read.sequence.to_string() == g1.substr(read.origin_offset, 64));
    }
  }

  SUBCASE("too-short genomes are rejected") {
    CHECK_THROWS_AS(generate_sample({{1, "ACGT"}}, 1, 64, low, 1), TooShortError);
  }

  SUBCASE("windows with ambiguity codes are redrawn") {
    std::string genome = g1;
    for (std::size_t i = 1000; i < 3500; ++i) genome[i] = 'N';
    const auto reads = generate_sample({{1, genome}}, 30, 64, low, 5);
    for (const auto& read : reads) {
      const auto window = genome.substr(read.origin_offset, 64);
      CHECK(window.find('N') == std::string::npos);
    }
  }
}

TEST_CASE("reads FASTA round trip keeps truth labels") {
  const auto reads =
      generate_sample({{5, synthetic_genome(2000, 1)}}, 20, 64, builtin_profiles().first, 3);
  testutil::TempDir tmp;
  const auto path = tmp.path / "reads.fasta";
  write_reads_fasta(path, reads);
  CHECK(read_reads_fasta(path) == reads);

  SUBCASE("two writes are byte-identical") {
    const auto again = tmp.path / "again.fasta";
    write_reads_fasta(again, reads);
    CHECK(testutil::slurp(path) == testutil::slurp(again));
  }
}

TEST_CASE("synthetic genomes are deterministic and composition-skewed") {
  const auto g = synthetic_genome(30000, 8);
  CHECK(g == synthetic_genome(30000, 8));
  CHECK(g != synthetic_genome(30000, 9));
  CHECK(g.size() == 30000);
  CHECK(g.find_first_not_of("ACGT") == std::string::npos);

  // Distinct segments should show visibly different compositions.
  const auto hist = [&](std::size_t from) {
    std::array<int, 4> counts{};
    for (std::size_t i = from; i < from + 2048; ++i) {
      counts[static_cast<int>(encode_base(g[i]))]++;
    }
    return counts;
  };
  const auto h0 = hist(0);
  const auto h5 = hist(5 * 2048);
  int delta = 0;
  for (int b = 0; b < 4; ++b) delta += std::abs(h0[b] - h5[b]);
  CHECK(delta > 200);
}

TEST_CASE("derive_seed separates streams stably") {
  CHECK(derive_seed(42, 0) == derive_seed(42, 0));
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

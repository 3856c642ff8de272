#include <algorithm>
#include <fstream>
#include <random>

#include "clapim/db_builder.hpp"
#include "clapim/errors.hpp"
#include "clapim/histogram.hpp"
#include "clapim/readgen.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace clapim;

TEST_CASE("extract_kmers") {
  SUBCASE("a genome of length k yields exactly one record") {
    const auto records = extract_kmers("ACGT", 4, 9);
    REQUIRE(records.size() == 1);
    CHECK(records[0].sequence.to_string() == "ACGT");
    CHECK(records[0].species_id == 9);
    CHECK(records[0].source_offset == 0);
  }

  SUBCASE("stride-1 sliding window") {
    const auto records = extract_kmers("ACGTA", 4, 1);
    REQUIRE(records.size() == 2);
    CHECK(records[0].sequence.to_string() == "ACGT");
    CHECK(records[1].sequence.to_string() == "CGTA");
    CHECK(records[1].source_offset == 1);
  }

  SUBCASE("windows overlapping an N are skipped") {
    const auto records = extract_kmers("ACGTNACGTT", 4, 1);
    REQUIRE(records.size() == 3);  // positions 0 and 5,6 survive
    CHECK(records[0].source_offset == 0);
    CHECK(records[1].source_offset == 5);
    CHECK(records[2].source_offset == 6);
  }

  SUBCASE("repeated k-mers produce repeated records") {
    const auto records = extract_kmers("AAAAAA", 3, 1);
    CHECK(records.size() == 4);
    for (const auto& r : records) CHECK(r.sequence.to_string() == "AAA");
  }

  SUBCASE("stride > 1") {
    CHECK(extract_kmers("ACGTACGTACGT", 4, 1, 4).size() == 3);
  }

  CHECK_THROWS_AS(extract_kmers("ACG", 4, 1), TooShortError);
}

TEST_CASE("build_layout packing") {
  std::mt19937_64 rng(5);

  SUBCASE("one full group fills one crossbar at 100% utilization") {
    // 128 k-mers, all the same histogram (permutations of one composition).
    std::string genome;
    for (int i = 0; i < 131; ++i) genome.push_back("ACGT"[i % 4]);
    const auto layout = build_layout({{1, genome}}, 4, 128);
    CHECK(layout.total_kmers() == 128);
    CHECK(layout.crossbars.size() == 1);
    CHECK(layout.utilization() == doctest::Approx(1.0));
    CHECK(layout.placements.size() == 1);
  }

  SUBCASE("129 k-mers of one group spill into two sequential crossbars") {
    std::string genome;
    for (int i = 0; i < 132; ++i) genome.push_back("ACGT"[i % 4]);
    const auto layout = build_layout({{1, genome}}, 4, 128);
    CHECK(layout.total_kmers() == 129);
    CHECK(layout.crossbars.size() == 2);
    CHECK(layout.crossbars[0].kmers.size() == 128);
    CHECK(layout.crossbars[1].kmers.size() == 1);
    CHECK(layout.utilization() == doctest::Approx(129.0 / 256.0));
    REQUIRE(layout.placements.size() == 1);
    CHECK(layout.placements.begin()->second == std::vector<CrossbarRange>{{0, 1}});
  }

  SUBCASE("every crossbar holds a single (species, histogram) group") {
    const std::string g1 = synthetic_genome(3000, 21);
    const std::string g2 = synthetic_genome(2500, 22);
    const auto layout = build_layout({{1, g1}, {2, g2}}, 8, 16);
    CHECK(layout.total_kmers() == (3000 - 8 + 1) + (2500 - 8 + 1));
    for (const auto& xb : layout.crossbars) {
      CHECK(!xb.kmers.empty());
      CHECK(xb.kmers.size() <= 16);
      for (const auto& rec : xb.kmers) {
        CHECK(rec.species_id == xb.species_id);
        CHECK(histogram_slot(compute_histogram(rec.sequence)) == xb.histogram_slot);
      }
    }

    SUBCASE("placements cover every crossbar exactly once") {
      std::vector<bool> covered(layout.crossbars.size(), false);
      for (const auto& [slot, ranges] : layout.placements) {
        for (const auto& range : ranges) {
          for (std::uint32_t i = range.first; i <= range.last; ++i) {
            CHECK_FALSE(covered[i]);
            covered[i] = true;
            CHECK(layout.crossbars[i].histogram_slot == slot);
          }
        }
      }
      CHECK(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));
    }
  }

  SUBCASE("crossbar assignment does not depend on genome input order") {
    const std::string g1 = synthetic_genome(1200, 31);
    const std::string g2 = synthetic_genome(900, 32);
    const std::string g3 = synthetic_genome(700, 33);
    const auto a = build_layout({{1, g1}, {2, g2}, {3, g3}}, 8, 32);
    const auto b = build_layout({{3, g3}, {1, g1}, {2, g2}}, 8, 32);
    CHECK(a == b);
  }

  SUBCASE("dedup keeps one copy per repeated sequence") {
    const auto layout = build_layout({{1, "AAAAAA"}}, 3, 128, 1, true);
    CHECK(layout.total_kmers() == 1);
  }

  CHECK_THROWS_AS(build_layout({}, 4), ConfigError);
}

TEST_CASE("layout persistence round-trips") {
  const std::string g1 = synthetic_genome(2000, 77);
  const std::string g2 = synthetic_genome(1500, 78);
  const auto layout = build_layout({{7, g1}, {12, g2}}, 12, 64);

  testutil::TempDir tmp;
  const auto path = tmp.path / "layout.bin";
  persist_layout(layout, path);
  const auto loaded = load_layout(path);
  CHECK(loaded == layout);

  SUBCASE("wrong magic is rejected") {
    std::ofstream(path, std::ios::binary) << "JUNKJUNKJUNK";
    CHECK_THROWS_AS(load_layout(path), LoadError);
  }

  SUBCASE("version mismatches are rejected") {
    auto bytes = testutil::slurp(path);
    bytes[4] = 9;  // version field
    std::ofstream(path, std::ios::binary) << bytes;
    CHECK_THROWS_AS(load_layout(path), LoadError);
  }

  SUBCASE("truncated files are rejected") {
    auto bytes = testutil::slurp(path);
    std::ofstream(path, std::ios::binary) << bytes.substr(0, bytes.size() - 7);
    CHECK_THROWS_AS(load_layout(path), LoadError);
  }
}

TEST_CASE("every stored k-mer is self-retrievable through the tracing table") {
  const std::string genome = synthetic_genome(1500, 99);
  const auto layout = build_layout({{1, genome}}, 8, 16);
  const auto table = build_tracing_table(layout.placements, 2, 8);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto& xb_index = rng() % layout.crossbars.size();
    const auto& xb = layout.crossbars[xb_index];
    const auto& rec = xb.kmers[rng() % xb.kmers.size()];
    bool found = false;
    for (const CrossbarRange& range : table.ranges_for(compute_histogram(rec.sequence))) {
      found = found || (xb_index >= range.first && xb_index <= range.last);
    }
    CHECK(found);
  }
}

TEST_CASE("stats report and chip accounting") {
  const auto layout = build_layout({{1, synthetic_genome(800, 3)}}, 8, 16);
  CHECK(layout.chips_required() == 1);
  const auto report = layout_stats_report(layout);
  CHECK(report.find("k-mers: 793") != std::string::npos);
  CHECK(report.find("utilization") != std::string::npos);
  CHECK(report.find("chips required") != std::string::npos);
}

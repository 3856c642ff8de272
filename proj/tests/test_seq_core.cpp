#include <fstream>
#include <random>

#include "clapim/base.hpp"
#include "clapim/errors.hpp"
#include "clapim/fasta.hpp"
#include "clapim/histogram.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace clapim;

TEST_CASE("base encoding is the fixed 2-bit bijection") {
  CHECK(static_cast<int>(encode_base('A')) == 0b00);
  CHECK(static_cast<int>(encode_base('T')) == 0b01);
  CHECK(static_cast<int>(encode_base('G')) == 0b10);
  CHECK(static_cast<int>(encode_base('C')) == 0b11);
  CHECK(encode_base('a') == Base::A);
  CHECK(encode_base('c') == Base::C);
  for (char c : {'A', 'T', 'G', 'C'}) {
    CHECK(base_to_char(encode_base(c)) == c);
  }
  CHECK_THROWS_AS(encode_base('N'), InvalidBaseError);
  CHECK_THROWS_AS(encode_base('x'), InvalidBaseError);
  CHECK_THROWS_AS(encode_base(' '), InvalidBaseError);
}

TEST_CASE("sequence round-trips through its string form") {
  const auto s = Sequence::from_string("ACGTacgt");
  CHECK(s.size() == 8);
  CHECK(s.to_string() == "ACGTACGT");
  CHECK(s.subsequence(2, 4).to_string() == "GTAC");
  CHECK_THROWS_AS(s.subsequence(6, 4), LengthError);
  CHECK_THROWS_AS(Sequence::from_string("ACGN"), InvalidBaseError);
}

TEST_CASE("compute_histogram counts per base") {
  CHECK(compute_histogram(Sequence::from_string("AAAA")) == BaseHistogram{4, 0, 0, 0});
  CHECK(compute_histogram(Sequence::from_string("ACGT")) == BaseHistogram{1, 1, 1, 1});
  CHECK(compute_histogram(Sequence::from_string("CAC")) == BaseHistogram{1, 0, 0, 2});

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto seq = testutil::random_seq(rng, 1 + rng() % 80);
    CHECK(compute_histogram(seq).sum() == seq.size());
  }
}

TEST_CASE("histogram key packing") {
  CHECK(pack_histogram_key(BaseHistogram{0, 0, 0, 64}) == 0);
  CHECK(pack_histogram_key(BaseHistogram{1, 1, 1, 61}) == 4161);
  CHECK_THROWS_AS(pack_histogram_key(BaseHistogram{64, 0, 0, 0}), KeyOverflowError);

  SUBCASE("pack then unpack is the identity for every histogram with counts <= 63") {
    for (std::uint32_t k : {1u, 5u, 63u}) {
      for (const BaseHistogram& h : all_histograms(k)) {
        CHECK(unpack_histogram_key(pack_histogram_key(h), k) == h);
      }
    }
  }

  SUBCASE("slot mapping stays total at k = 64, including the corner histograms") {
    for (const BaseHistogram& h : all_histograms(64)) {
      const std::uint32_t slot = histogram_slot(h);
      CHECK(slot < kHistogramSlots);
      CHECK(histogram_from_slot(slot, 64) == h);
    }
    CHECK(histogram_slot(BaseHistogram{64, 0, 0, 0}) >= (1u << kHistogramKeyBits));
  }

  CHECK_THROWS_AS(unpack_histogram_key(1u << 18, 64), KeyOverflowError);
  CHECK_THROWS_AS(unpack_histogram_key(pack_histogram_key(BaseHistogram{3, 3, 3, 0}), 4),
                  KeyOverflowError);
}

TEST_CASE("count_valid_histograms") {
  CHECK(count_valid_histograms(1) == 4);
  CHECK(count_valid_histograms(2) == 10);
  CHECK(count_valid_histograms(64) == 47905);

  // Against direct enumeration of 4-part compositions.
  for (std::uint32_t k = 0; k <= 12; ++k) {
    CHECK(count_valid_histograms(k) == all_histograms(k).size());
  }
}

TEST_CASE("histogram_l1") {
  CHECK(histogram_l1(BaseHistogram{1, 0, 0, 2}, BaseHistogram{3, 0, 0, 0}) == 4);
  CHECK(histogram_l1(BaseHistogram{2, 5, 1, 0}, BaseHistogram{2, 5, 1, 0}) == 0);
  CHECK(histogram_l1(BaseHistogram{4, 0, 0, 0}, BaseHistogram{0, 4, 0, 0}) == 8);
}

TEST_CASE("parse_fasta") {
  testutil::TempDir tmp;

  SUBCASE("single record") {
    const auto path = tmp.path / "one.fasta";
    std::ofstream(path) << ">x\nACGT\n";
    const auto records = parse_fasta(path);
    REQUIRE(records.size() == 1);
    CHECK(records[0].name == "x");
    CHECK(records[0].bases == "ACGT");
  }

  SUBCASE("line wrapping, case folding and multiple records") {
    const auto path = tmp.path / "multi.fasta";
    std::ofstream(path) << ">first record\nacg t\nTTAA\n>second\nGG\nCC\n";
    const auto records = parse_fasta(path);
    REQUIRE(records.size() == 2);
    CHECK(records[0].name == "first record");
    CHECK(records[0].bases == "ACGTTTAA");
    CHECK(records[1].bases == "GGCC");
  }

  SUBCASE("ambiguity codes survive as N, other garbage is an error") {
    const auto path = tmp.path / "amb.fasta";
    std::ofstream(path) << ">x\nACgnRYT\n";
    CHECK(parse_fasta(path)[0].bases == "ACGNNNT");

    const auto bad = tmp.path / "bad.fasta";
    std::ofstream(bad) << ">x\nAC1T\n";
    CHECK_THROWS_AS(parse_fasta(bad), ParseError);
  }

  SUBCASE("empty file and headerless data are parse errors") {
    const auto path = tmp.path / "empty.fasta";
    std::ofstream(path) << "";
    CHECK_THROWS_AS(parse_fasta(path), ParseError);

    const auto headerless = tmp.path / "hl.fasta";
    std::ofstream(headerless) << "ACGT\n";
    CHECK_THROWS_AS(parse_fasta(headerless), ParseError);

    CHECK_THROWS_AS(parse_fasta(tmp.path / "missing.fasta"), ParseError);
  }

  SUBCASE("parse errors carry the line number") {
    const auto path = tmp.path / "line.fasta";
    std::ofstream(path) << ">x\nACGT\nAC!T\n";
    try {
      parse_fasta(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }

  SUBCASE("write then parse round-trips") {
    const auto path = tmp.path / "rt.fasta";
    const std::vector<FastaRecord> records = {{"a", "ACGTACGTACGT"}, {"b", "TTTT"}};
    write_fasta(path, records, 5);
    CHECK(parse_fasta(path) == records);
  }
}

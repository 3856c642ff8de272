#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clapim/errors.hpp"

namespace clapim {

/// One DNA base with its fixed 2-bit code: A=00, T=01, G=10, C=11.
enum class Base : std::uint8_t { A = 0b00, T = 0b01, G = 0b10, C = 0b11 };

inline constexpr std::uint8_t kInvalidBaseCode = 0xFF;

/// 256-entry LUT from ASCII to the 2-bit code (case-insensitive);
/// everything else maps to kInvalidBaseCode.
inline constexpr std::array<std::uint8_t, 256> kBaseCodeTable = [] {
  std::array<std::uint8_t, 256> t{};
  t.fill(kInvalidBaseCode);
  t['A'] = t['a'] = 0b00;
  t['T'] = t['t'] = 0b01;
  t['G'] = t['g'] = 0b10;
  t['C'] = t['c'] = 0b11;
  return t;
}();

inline bool is_acgt(char symbol) {
  return kBaseCodeTable[static_cast<unsigned char>(symbol)] != kInvalidBaseCode;
}

/// Maps a symbol to its 2-bit code. Throws InvalidBaseError for non-ACGT input.
Base encode_base(char symbol);

char base_to_char(Base base);

/// An immutable string over {A,T,G,C}. Ambiguity codes never enter a
/// Sequence; they are handled at ingestion (see fasta.hpp / db_builder.hpp).
class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(std::vector<Base> bases) : bases_(std::move(bases)) {}

  /// Throws InvalidBaseError on any symbol outside ACGT (case-insensitive).
  static Sequence from_string(std::string_view text);

  std::string to_string() const;

  std::size_t size() const { return bases_.size(); }
  bool empty() const { return bases_.empty(); }
  Base operator[](std::size_t i) const { return bases_[i]; }
  const std::vector<Base>& bases() const { return bases_; }

  Sequence subsequence(std::size_t pos, std::size_t len) const;

  auto begin() const { return bases_.begin(); }
  auto end() const { return bases_.end(); }

  bool operator==(const Sequence&) const = default;

 private:
  std::vector<Base> bases_;
};

/// A database entry: one k-length window of a genome with its label.
struct KMerRecord {
  Sequence sequence;
  std::uint32_t species_id = 0;
  std::uint64_t source_offset = 0;

  bool operator==(const KMerRecord&) const = default;
};

}  // namespace clapim

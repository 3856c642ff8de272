#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace clapim {

/// One FASTA record. `bases` is uppercase and normalized to the alphabet
/// {A,C,G,T,N}: any IUPAC ambiguity code becomes N. Positions covered by N
/// are excluded from k-mer extraction downstream, never silently mutated.
struct FastaRecord {
  std::string name;
  std::string bases;

  bool operator==(const FastaRecord&) const = default;
};

/// Parses a (possibly line-wrapped, multi-record) FASTA file.
/// Throws ParseError with a line number on structural problems, including an
/// input with no records at all.
std::vector<FastaRecord> parse_fasta(const std::filesystem::path& path);

/// Same, from an in-memory buffer (used by tests and the readers).
std::vector<FastaRecord> parse_fasta_text(const std::string& text);

void write_fasta(const std::filesystem::path& path, const std::vector<FastaRecord>& records,
                 std::size_t wrap = 70);

}  // namespace clapim

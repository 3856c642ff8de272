#include "clapim/fasta.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "clapim/base.hpp"
#include "clapim/errors.hpp"

namespace clapim {

namespace {

// IUPAC nucleotide codes (and U) that collapse to N.
bool is_iupac_ambiguity(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'N': case 'R': case 'Y': case 'S': case 'W': case 'K': case 'M':
    case 'B': case 'D': case 'H': case 'V': case 'U':
      return true;
    default:
      return false;
  }
}

std::vector<FastaRecord> parse_stream(std::istream& in) {
  std::vector<FastaRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool in_record = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line[0] == '>') {
      std::string name = line.substr(1);
      // Trim leading/trailing blanks from the header.
      const auto first = name.find_first_not_of(" \t");
      const auto last = name.find_last_not_of(" \t");
      name = (first == std::string::npos) ? std::string{} : name.substr(first, last - first + 1);
      if (name.empty()) {
        throw ParseError("FASTA record with empty name", line_no);
      }
      records.push_back(FastaRecord{std::move(name), {}});
      in_record = true;
      continue;
    }

    if (!in_record) {
      throw ParseError("sequence data before any '>' header", line_no);
    }
    std::string& bases = records.back().bases;
    for (char c : line) {
      if (c == ' ' || c == '\t') continue;
      if (is_acgt(c)) {
        bases.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      } else if (is_iupac_ambiguity(c)) {
        bases.push_back('N');
      } else {
        throw ParseError(std::string("unexpected character '") + c + "' in sequence", line_no);
      }
    }
  }

  if (records.empty()) {
    throw ParseError("no FASTA records found", line_no);
  }
  for (const FastaRecord& r : records) {
    if (r.bases.empty()) {
      throw ParseError("record '" + r.name + "' has no sequence data");
    }
  }
  return records;
}

}  // namespace

std::vector<FastaRecord> parse_fasta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open FASTA file: " + path.string());
  }
  return parse_stream(in);
}

std::vector<FastaRecord> parse_fasta_text(const std::string& text) {
  std::istringstream in(text);
  return parse_stream(in);
}

void write_fasta(const std::filesystem::path& path, const std::vector<FastaRecord>& records,
                 std::size_t wrap) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot open for writing: " + path.string());
  }
  for (const FastaRecord& r : records) {
    out << '>' << r.name << '\n';
    for (std::size_t i = 0; i < r.bases.size(); i += wrap) {
      out << r.bases.substr(i, wrap) << '\n';
    }
  }
}

}  // namespace clapim

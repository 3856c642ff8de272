#include "clapim/db_builder.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "clapim/errors.hpp"
#include "clapim/histogram.hpp"

namespace clapim {

namespace {

constexpr char kLayoutMagic[4] = {'C', 'L', 'D', 'B'};
constexpr std::uint32_t kLayoutVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_bytes(std::ifstream& in, int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    const int byte = in.get();
    if (byte == std::ifstream::traits_type::eof()) {
      throw LoadError("layout file truncated");
    }
    v |= static_cast<std::uint64_t>(byte) << (8 * i);
  }
  return v;
}

// 2-bit packing of a k-length sequence, 4 bases per byte, little-endian
// within the byte.
std::vector<std::uint8_t> pack_sequence(const Sequence& seq) {
  std::vector<std::uint8_t> bytes((seq.size() + 3) / 4, 0);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    bytes[i / 4] |= static_cast<std::uint8_t>(seq[i]) << (2 * (i % 4));
  }
  return bytes;
}

Sequence unpack_sequence(const std::vector<std::uint8_t>& bytes, std::uint32_t k) {
  std::vector<Base> bases;
  bases.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    bases.push_back(static_cast<Base>((bytes[i / 4] >> (2 * (i % 4))) & 0b11));
  }
  return Sequence(std::move(bases));
}

}  // namespace

std::size_t DatabaseLayout::total_kmers() const {
  std::size_t n = 0;
  for (const auto& xb : crossbars) n += xb.kmers.size();
  return n;
}

double DatabaseLayout::utilization() const {
  if (crossbars.empty()) return 0.0;
  return static_cast<double>(total_kmers()) /
         (static_cast<double>(crossbars.size()) * rows_per_crossbar);
}

std::uint64_t DatabaseLayout::chips_required() const {
  return (crossbars.size() + kCrossbarsPerChip - 1) / kCrossbarsPerChip;
}

std::set<std::uint32_t> DatabaseLayout::species() const {
  std::set<std::uint32_t> out;
  for (const auto& xb : crossbars) out.insert(xb.species_id);
  return out;
}

std::vector<KMerRecord> extract_kmers(std::string_view genome, std::uint32_t k,
                                      std::uint32_t species_id, std::size_t stride) {
  if (k == 0 || stride == 0) {
    throw ConfigError("k and stride must be positive");
  }
  if (genome.size() < k) {
    throw TooShortError("genome shorter than k");
  }
  std::vector<KMerRecord> records;
  records.reserve((genome.size() - k) / stride + 1);

  // next_bad[i] = smallest index >= i holding a non-ACGT symbol.
  std::size_t bad = genome.size();
  std::vector<std::size_t> next_bad(genome.size() + 1);
  next_bad[genome.size()] = genome.size();
  for (std::size_t i = genome.size(); i-- > 0;) {
    if (!is_acgt(genome[i])) bad = i;
    next_bad[i] = bad;
  }

  for (std::size_t pos = 0; pos + k <= genome.size(); pos += stride) {
    if (next_bad[pos] < pos + k) continue;  // window spans an ambiguity code
    records.push_back(KMerRecord{Sequence::from_string(genome.substr(pos, k)), species_id,
                                 static_cast<std::uint64_t>(pos)});
  }
  return records;
}

std::vector<KMerRecord> extract_kmers(const Sequence& genome, std::uint32_t k,
                                      std::uint32_t species_id, std::size_t stride) {
  return extract_kmers(genome.to_string(), k, species_id, stride);
}

DatabaseLayout build_layout(const std::vector<LabeledGenome>& genomes, std::uint32_t k,
                            std::uint32_t rows_per_crossbar, std::size_t stride, bool dedup) {
  if (genomes.empty()) {
    throw ConfigError("at least one genome required");
  }
  if (rows_per_crossbar == 0) {
    throw ConfigError("rows_per_crossbar must be positive");
  }

  // (species, histogram slot) -> k-mers, ordered so crossbar indices come
  // out the same for any input order of the same genomes.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<KMerRecord>> groups;
  for (const auto& [species_id, genome] : genomes) {
    for (KMerRecord& rec : extract_kmers(genome, k, species_id, stride)) {
      const std::uint32_t slot = histogram_slot(compute_histogram(rec.sequence));
      groups[{species_id, slot}].push_back(std::move(rec));
    }
  }

  DatabaseLayout layout;
  layout.k = k;
  layout.rows_per_crossbar = rows_per_crossbar;

  for (auto& [key, kmers] : groups) {
    if (dedup) {
      std::unordered_set<std::string> seen;
      std::vector<KMerRecord> unique;
      unique.reserve(kmers.size());
      for (KMerRecord& rec : kmers) {
        if (seen.insert(rec.sequence.to_string()).second) {
          unique.push_back(std::move(rec));
        }
      }
      kmers = std::move(unique);
    }
    const std::uint32_t first = static_cast<std::uint32_t>(layout.crossbars.size());
    for (std::size_t i = 0; i < kmers.size(); i += rows_per_crossbar) {
      CrossbarDescriptor xb;
      xb.species_id = key.first;
      xb.histogram_slot = key.second;
      const std::size_t end = std::min(kmers.size(), i + rows_per_crossbar);
      xb.kmers.assign(kmers.begin() + static_cast<std::ptrdiff_t>(i),
                      kmers.begin() + static_cast<std::ptrdiff_t>(end));
      layout.crossbars.push_back(std::move(xb));
    }
    const std::uint32_t last = static_cast<std::uint32_t>(layout.crossbars.size()) - 1;
    layout.placements[key.second].push_back(CrossbarRange{first, last});
  }
  return layout;
}

void persist_layout(const DatabaseLayout& layout, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw LoadError("cannot write layout: " + path.string());
  }
  out.write(kLayoutMagic, 4);
  put_u32(out, kLayoutVersion);
  put_u32(out, layout.k);
  put_u32(out, layout.rows_per_crossbar);
  put_u64(out, layout.crossbars.size());
  for (const CrossbarDescriptor& xb : layout.crossbars) {
    put_u32(out, xb.species_id);
    put_u32(out, xb.histogram_slot);
    put_u32(out, static_cast<std::uint32_t>(xb.kmers.size()));
    for (const KMerRecord& rec : xb.kmers) {
      put_u64(out, rec.source_offset);
      const auto bytes = pack_sequence(rec.sequence);
      out.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
    }
  }
  if (!out) {
    throw LoadError("write failure: " + path.string());
  }
}

DatabaseLayout load_layout(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LoadError("cannot open layout: " + path.string());
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kLayoutMagic, 4) != 0) {
    throw LoadError("not a layout file");
  }
  const auto version = static_cast<std::uint32_t>(get_bytes(in, 4));
  if (version != kLayoutVersion) {
    throw LoadError("unsupported layout version " + std::to_string(version));
  }

  DatabaseLayout layout;
  layout.k = static_cast<std::uint32_t>(get_bytes(in, 4));
  layout.rows_per_crossbar = static_cast<std::uint32_t>(get_bytes(in, 4));
  if (layout.k == 0 || layout.k > 64 || layout.rows_per_crossbar == 0) {
    throw LoadError("layout header out of range");
  }
  const std::uint64_t crossbar_count = get_bytes(in, 8);
  const std::uint32_t seq_bytes = (layout.k + 3) / 4;

  layout.crossbars.reserve(crossbar_count);
  for (std::uint64_t i = 0; i < crossbar_count; ++i) {
    CrossbarDescriptor xb;
    xb.species_id = static_cast<std::uint32_t>(get_bytes(in, 4));
    xb.histogram_slot = static_cast<std::uint32_t>(get_bytes(in, 4));
    const auto kmer_count = static_cast<std::uint32_t>(get_bytes(in, 4));
    if (kmer_count == 0 || kmer_count > layout.rows_per_crossbar) {
      throw LoadError("crossbar row count out of range");
    }
    xb.kmers.reserve(kmer_count);
    for (std::uint32_t j = 0; j < kmer_count; ++j) {
      KMerRecord rec;
      rec.species_id = xb.species_id;
      rec.source_offset = get_bytes(in, 8);
      std::vector<std::uint8_t> bytes(seq_bytes);
      in.read(reinterpret_cast<char*>(bytes.data()), seq_bytes);
      if (!in) {
        throw LoadError("layout file truncated");
      }
      rec.sequence = unpack_sequence(bytes, layout.k);
      xb.kmers.push_back(std::move(rec));
    }
    layout.crossbars.push_back(std::move(xb));
  }

  // Placements are derived data; rebuild them from the descriptors.
  for (std::uint32_t i = 0; i < layout.crossbars.size();) {
    const CrossbarDescriptor& xb = layout.crossbars[i];
    std::uint32_t j = i;
    while (j + 1 < layout.crossbars.size() &&
           layout.crossbars[j + 1].species_id == xb.species_id &&
           layout.crossbars[j + 1].histogram_slot == xb.histogram_slot) {
      ++j;
    }
    layout.placements[xb.histogram_slot].push_back(CrossbarRange{i, j});
    i = j + 1;
  }
  return layout;
}

std::string layout_stats_report(const DatabaseLayout& layout) {
  std::ostringstream out;
  out << "k-mers: " << layout.total_kmers() << '\n';
  out << "crossbars: " << layout.crossbars.size() << " (" << layout.rows_per_crossbar
      << " rows each)\n";
  out << "species: " << layout.species().size() << '\n';
  out << "histogram groups: " << layout.placements.size() << '\n';
  out << "utilization: " << layout.utilization() * 100.0 << "%\n";
  out << "chips required (1M crossbars each): " << layout.chips_required() << '\n';
  return out.str();
}

}  // namespace clapim

#include "clapim/readgen.hpp"

#include <algorithm>
#include <charconv>

#include "clapim/errors.hpp"
#include "clapim/fasta.hpp"
#include "clapim/sa_model.hpp"

namespace clapim {

namespace {

Base random_base(std::mt19937_64& rng) {
  return static_cast<Base>(rng() & 0b11);
}

Base random_other_base(Base original, std::mt19937_64& rng) {
  // Uniform over the three bases != original.
  const auto offset = 1 + (rng() % 3);
  return static_cast<Base>((static_cast<std::uint64_t>(original) + offset) & 0b11);
}

}  // namespace

std::pair<ErrorProfile, ErrorProfile> builtin_profiles() {
  const ErrorProfile low{0.036, 0.002, 0.002};
  const ErrorProfile high{0.01, 0.07, 0.07};
  return {low, high};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master ^ (stream + 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Sequence inject_errors(const Sequence& window, const ErrorProfile& profile,
                       std::size_t target_len, std::mt19937_64& rng, InjectionStats* stats) {
  if (window.empty()) {
    throw TooShortError("cannot inject errors into an empty window");
  }
  for (double rate : {profile.substitution_rate, profile.insertion_rate, profile.deletion_rate}) {
    if (rate < 0.0 || rate > 1.0) {
      throw ConfigError("error rates must lie in [0, 1]");
    }
  }
  std::vector<Base> out;
  out.reserve(target_len + 1);
  for (std::size_t i = 0; i < window.size() && out.size() < target_len; ++i) {
    // Three draws per source base, always consumed, so the draw stream does
    // not depend on which events fire.
    const double u_del = canonical_uniform(rng);
    const double u_ins = canonical_uniform(rng);
    const double u_sub = canonical_uniform(rng);
    if (stats) ++stats->source_bases;
    if (u_ins < profile.insertion_rate) {
      if (stats) ++stats->insertions;
      out.push_back(random_base(rng));
    }
    if (u_del < profile.deletion_rate) {
      if (stats) ++stats->deletions;
      continue;
    }
    if (out.size() >= target_len) break;
    if (u_sub < profile.substitution_rate) {
      if (stats) ++stats->substitutions;
      out.push_back(random_other_base(window[i], rng));
    } else {
      out.push_back(window[i]);
    }
  }
  while (out.size() < target_len) {
    out.push_back(random_base(rng));
  }
  out.resize(target_len);
  return Sequence(std::move(out));
}

Sequence inject_errors(const Sequence& seq, const ErrorProfile& profile, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return inject_errors(seq, profile, seq.size(), rng);
}

std::vector<SyntheticRead> generate_sample(const std::vector<LabeledGenome>& genomes,
                                           std::size_t reads_per_genome, std::size_t read_len,
                                           const ErrorProfile& profile, std::uint64_t seed) {
  if (read_len == 0) {
    throw ConfigError("read length must be positive");
  }
  std::vector<SyntheticRead> reads;
  reads.reserve(genomes.size() * reads_per_genome);

  for (std::size_t gi = 0; gi < genomes.size(); ++gi) {
    const auto& [species_id, genome] = genomes[gi];
    if (genome.size() < read_len) {
      throw TooShortError("genome shorter than the read length");
    }
    std::mt19937_64 rng(derive_seed(seed, gi));
    for (std::size_t r = 0; r < reads_per_genome; ++r) {
      std::uint64_t pos = 0;
      std::size_t window_len = 0;
      std::string_view window_text;
      for (int attempt = 0;; ++attempt) {
        pos = rng() % (genome.size() - read_len + 1);
        window_len = std::min(genome.size() - pos, 2 * read_len);
        window_text = std::string_view(genome).substr(pos, window_len);
        if (window_text.find_first_not_of("ACGTacgt") == std::string_view::npos) break;
        if (attempt > 10000) {
          throw TooShortError("genome has no ambiguity-free window of the read length");
        }
      }
      const Sequence window = Sequence::from_string(window_text);
      reads.push_back(
          SyntheticRead{inject_errors(window, profile, read_len, rng), species_id, pos});
    }
  }
  return reads;
}

std::string synthetic_genome(std::size_t length, std::uint64_t seed, std::size_t segment_len) {
  if (segment_len == 0) {
    throw ConfigError("segment length must be positive");
  }
  std::mt19937_64 rng(seed);
  std::string genome;
  genome.reserve(length);
  static constexpr char kBases[4] = {'A', 'T', 'G', 'C'};
  double cumulative[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < length; ++i) {
    if (i % segment_len == 0) {
      // Fresh composition for this segment; squaring the raw weights skews
      // segments toward one or two dominant bases.
      double w[4];
      double sum = 0.0;
      for (double& x : w) {
        const double u = canonical_uniform(rng);
        x = u * u + 0.02;
        sum += x;
      }
      double acc = 0.0;
      for (int b = 0; b < 4; ++b) {
        acc += w[b] / sum;
        cumulative[b] = acc;
      }
      cumulative[3] = 1.0;
    }
    const double u = canonical_uniform(rng);
    int b = 0;
    while (b < 3 && u >= cumulative[b]) ++b;
    genome.push_back(kBases[b]);
  }
  return genome;
}

void write_reads_fasta(const std::filesystem::path& path,
                       const std::vector<SyntheticRead>& reads) {
  std::vector<FastaRecord> records;
  records.reserve(reads.size());
  for (std::size_t i = 0; i < reads.size(); ++i) {
    records.push_back(FastaRecord{"read_" + std::to_string(i) +
                                      "|species=" + std::to_string(reads[i].truth_species) +
                                      "|pos=" + std::to_string(reads[i].origin_offset),
                                  reads[i].sequence.to_string()});
  }
  write_fasta(path, records);
}

std::vector<SyntheticRead> read_reads_fasta(const std::filesystem::path& path) {
  std::vector<SyntheticRead> reads;
  for (const FastaRecord& rec : parse_fasta(path)) {
    SyntheticRead read;
    read.sequence = Sequence::from_string(rec.bases);

    const auto parse_field = [&](std::string_view tag) -> std::uint64_t {
      const auto at = rec.name.find(tag);
      if (at == std::string::npos) {
        throw ParseError("read name missing '" + std::string(tag) + "': " + rec.name);
      }
      std::uint64_t value = 0;
      const char* begin = rec.name.data() + at + tag.size();
      const char* end = rec.name.data() + rec.name.size();
      const auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc{} || ptr == begin) {
        throw ParseError("bad numeric field in read name: " + rec.name);
      }
      return value;
    };
    read.truth_species = static_cast<std::uint32_t>(parse_field("species="));
    read.origin_offset = parse_field("pos=");
    reads.push_back(std::move(read));
  }
  return reads;
}

}  // namespace clapim

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "clapim/base.hpp"
#include "clapim/db_builder.hpp"

namespace clapim {

/// Per-base sequencing-error probabilities.
struct ErrorProfile {
  double substitution_rate = 0.0;
  double insertion_rate = 0.0;
  double deletion_rate = 0.0;

  double total() const { return substitution_rate + insertion_rate + deletion_rate; }
  bool operator==(const ErrorProfile&) const = default;
};

/// The two published sequencer profiles: low error (second generation,
/// 3.6% / 0.2% / 0.2%) and high error (third generation, 1% / 7% / 7%).
std::pair<ErrorProfile, ErrorProfile> builtin_profiles();

struct SyntheticRead {
  Sequence sequence;
  std::uint32_t truth_species = 0;
  std::uint64_t origin_offset = 0;

  bool operator==(const SyntheticRead&) const = default;
};

/// Deterministic per-stream seed derivation (splitmix64 over master ^ id),
/// fixed here so samples are reproducible across runs and thread counts.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Event tallies from one injection pass, for rate diagnostics.
struct InjectionStats {
  std::uint64_t substitutions = 0;
  std::uint64_t insertions = 0;
  std::uint64_t deletions = 0;
  std::uint64_t source_bases = 0;
};

/// Walks `window` injecting per-base events and emits exactly `target_len`
/// bases (random padding if the window runs out first, which a window of
/// 2*target_len makes vanishingly rare). Event order per source base, each
/// decided by its own draw: deletion first, then insertion-before-base, then
/// substitution; an inserted base is uniform over ACGT, a substituted base
/// uniform over the three others.
Sequence inject_errors(const Sequence& window, const ErrorProfile& profile,
                       std::size_t target_len, std::mt19937_64& rng,
                       InjectionStats* stats = nullptr);

/// Length-preserving convenience form: target length = |seq|.
Sequence inject_errors(const Sequence& seq, const ErrorProfile& profile, std::uint64_t seed);

/// Draws `reads_per_genome` reads per genome from uniformly random start
/// positions, injects errors and attaches the truth label. Start windows
/// containing an ambiguity code are rejected and redrawn. Fixed seed and
/// genome order give a byte-identical sample.
std::vector<SyntheticRead> generate_sample(const std::vector<LabeledGenome>& genomes,
                                           std::size_t reads_per_genome, std::size_t read_len,
                                           const ErrorProfile& profile, std::uint64_t seed);

/// Random genome with drifting base composition: every `segment_len` bases a
/// fresh weight vector is drawn, mimicking the compositional heterogeneity
/// of real chromosomes (a uniform i.i.d. genome would make every k-mer
/// histogram look alike and defeat base-count pruning).
std::string synthetic_genome(std::size_t length, std::uint64_t seed,
                             std::size_t segment_len = 2048);

/// FASTA with the truth encoded in record names:
/// `>read_<n>|species=<id>|pos=<p>`.
void write_reads_fasta(const std::filesystem::path& path,
                       const std::vector<SyntheticRead>& reads);
std::vector<SyntheticRead> read_reads_fasta(const std::filesystem::path& path);

}  // namespace clapim

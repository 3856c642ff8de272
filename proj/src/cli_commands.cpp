#include "cli_commands.hpp"

#include <algorithm>
#include <bit>
#include <iostream>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "clapim/crossbar.hpp"
#include "clapim/errors.hpp"
#include "clapim/fasta.hpp"
#include "clapim/perf_model.hpp"
#include "json.hpp"

namespace clapim {

namespace {

using nlohmann::ordered_json;

struct LoadedRead {
  std::string id;
  Sequence sequence;
  std::optional<std::uint32_t> truth;
};

std::vector<LoadedRead> load_reads(const std::filesystem::path& path) {
  std::vector<LoadedRead> reads;
  for (const FastaRecord& rec : parse_fasta(path)) {
    LoadedRead read;
    read.id = rec.name.substr(0, rec.name.find('|'));
    read.sequence = Sequence::from_string(rec.bases);
    const auto at = rec.name.find("species=");
    if (at != std::string::npos) {
      std::uint32_t value = 0;
      const char* begin = rec.name.data() + at + 8;
      const char* end = rec.name.data() + rec.name.size();
      if (std::from_chars(begin, end, value).ec == std::errc{}) {
        read.truth = value;
      }
    }
    reads.push_back(std::move(read));
  }
  return reads;
}

std::vector<LabeledGenome> load_genomes(const RunConfig& config) {
  if (config.genome_specs.empty()) {
    throw ConfigError("at least one --genome id=path is required");
  }
  std::vector<LabeledGenome> genomes;
  for (const auto& [species_id, path] : config.genome_specs) {
    // Each FASTA record is an independent sequence of the species; windows
    // never straddle record boundaries.
    for (const FastaRecord& rec : parse_fasta(path)) {
      genomes.emplace_back(species_id, rec.bases);
    }
  }
  return genomes;
}

ErrorProfile profile_by_name(const std::string& name) {
  const auto [low, high] = builtin_profiles();
  if (name == "low") return low;
  if (name == "high") return high;
  if (name == "none") return ErrorProfile{};
  throw ConfigError("unknown error profile '" + name + "' (expected low|high|none)");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw LoadError("cannot write: " + path.string());
  }
  return out;
}

/// Static partition of [0, n) over `threads` workers; slot-indexed output
/// keeps results identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

ordered_json metrics_json(const QualityMetrics& m) {
  return ordered_json{{"tp", m.tp},
                      {"fp", m.fp},
                      {"fn", m.fn},
                      {"sensitivity", m.sensitivity},
                      {"precision", m.precision},
                      {"f1", m.f1}};
}

std::string format_result_line(const std::string& read_id, const ClassificationResult& res) {
  std::ostringstream line;
  line << read_id << '\t';
  if (res.assigned) {
    line << *res.assigned;
  } else {
    line << "unclassified";
  }
  std::uint64_t total = 0;
  for (const auto& [species, hits] : res.per_species_hits) total += hits;
  line << '\t' << total << '\t';
  bool first = true;
  for (const auto& [species, hits] : res.per_species_hits) {
    line << (first ? "" : ";") << species << '=' << hits;
    first = false;
  }
  if (res.per_species_hits.empty()) line << '-';
  return line.str();
}

constexpr std::uint64_t kProbeStream = 0x50524F4245ull;

/// One full-crossbar search on the gate-level model, used to source the
/// measured cycle and write counts for the analytical model.
SearchStats probe_search_stats(const RunConfig& config, std::uint32_t rows_per_crossbar,
                               std::uint32_t k) {
  CrossbarState state(rows_per_crossbar, 512, k);
  std::mt19937_64 rng(derive_seed(config.seed, kProbeStream));
  std::vector<KMerRecord> rows;
  rows.reserve(rows_per_crossbar);
  for (std::uint32_t r = 0; r < rows_per_crossbar; ++r) {
    std::vector<Base> bases;
    bases.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) bases.push_back(static_cast<Base>(rng() & 3));
    rows.push_back(KMerRecord{Sequence(std::move(bases)), 0, 0});
  }
  state.load_kmers(rows);
  std::vector<Base> q;
  for (std::uint32_t i = 0; i < k; ++i) q.push_back(static_cast<Base>(rng() & 3));
  const int num_sas = std::min<int>(config.num_sas,
                                    static_cast<int>(std::bit_floor(rows_per_crossbar)));
  return state.run_search_program(Sequence(std::move(q)), SaModel::ideal(config.eth), num_sas)
      .stats;
}

TracingTable obtain_table(const RunConfig& config, const DatabaseLayout& layout, int eth) {
  if (!config.table_path.empty() && std::filesystem::exists(config.table_path)) {
    TracingTable table = TracingTable::load(config.table_path);
    if (table.k() == layout.k && table.eth() == eth) {
      return table;
    }
  }
  return build_tracing_table(layout.placements, eth, layout.k);
}

}  // namespace

SaModel RunConfig::make_sa_model() const {
  if (sa_mode == SaMode::kIdeal) {
    return SaModel::ideal(effective_threshold());
  }
  ConfidenceTable table = sa_table_path.empty() ? ConfidenceTable::builtin()
                                                : ConfidenceTable::load(sa_table_path);
  return SaModel::stochastic(effective_threshold(), std::move(table), seed);
}

void RunConfig::validate() const {
  if (k < 1 || k > 64) {
    throw ConfigError("k must be in [1, 64]");
  }
  if (eth < 0) {
    throw ConfigError("eth must be non-negative");
  }
  if (num_sas < 1 || num_sas > static_cast<int>(rows_per_crossbar) ||
      !std::has_single_bit(static_cast<unsigned>(num_sas))) {
    throw ConfigError("num_sas must be a power of two within the row count");
  }
  if (threads < 1) {
    throw ConfigError("threads must be at least 1");
  }
  if (examine_limit < 1) {
    throw ConfigError("examine-limit must be at least 1");
  }
  if (stride < 1) {
    throw ConfigError("stride must be at least 1");
  }
  if (read_len < k) {
    throw ConfigError("read length must be at least k");
  }
}

std::pair<std::uint32_t, std::string> parse_genome_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("genome spec must be id=path, got '" + spec + "'");
  }
  std::uint32_t id = 0;
  const char* begin = spec.data();
  const auto [ptr, ec] = std::from_chars(begin, begin + eq, id);
  if (ec != std::errc{} || ptr != begin + eq) {
    throw ConfigError("genome spec id must be an integer: '" + spec + "'");
  }
  return {id, spec.substr(eq + 1)};
}

int cmd_build_db(const RunConfig& config) {
  config.validate();
  const auto genomes = load_genomes(config);
  const DatabaseLayout layout =
      build_layout(genomes, config.k, config.rows_per_crossbar, config.stride, config.dedup);
  const TracingTable table = build_tracing_table(layout.placements, config.eth, config.k);

  std::filesystem::create_directories(config.out_dir);
  persist_layout(layout, config.out_dir / "layout.bin");
  table.save(config.out_dir / "tracing.bin");

  std::string stats = layout_stats_report(layout);
  stats += "tracing slots populated: " + std::to_string(table.populated_slots()) + '\n';
  stats += "tracing footprint bytes: " + std::to_string(table.footprint_bytes()) + '\n';
  open_out(config.out_dir / "stats.txt") << stats;
  std::cout << stats;
  return 0;
}

int cmd_gen_reads(const RunConfig& config) {
  config.validate();
  const auto genomes = load_genomes(config);
  const auto reads = generate_sample(genomes, config.reads_per_genome, config.read_len,
                                     profile_by_name(config.profile), config.seed);
  std::filesystem::create_directories(config.out_dir);
  write_reads_fasta(config.out_dir / "reads.fasta", reads);
  std::cout << "wrote " << reads.size() << " reads\n";
  return 0;
}

namespace {

struct ClassifyOutcome {
  std::vector<ClassificationResult> results;
  QualityMetrics metrics;
  bool have_truth = false;
  std::uint64_t candidate_pairs = 0;
  std::uint64_t scanned_pairs_bound = 0;  // reads' windows x total rows
};

ClassifyOutcome run_classification(const RunConfig& config, const DatabaseLayout& layout,
                                   const TracingTable& table,
                                   const std::vector<LoadedRead>& reads, int threshold) {
  SaModel sa = config.make_sa_model();
  sa.threshold = threshold;
  const Classifier classifier(layout, table, std::move(sa), config.backend);

  ClassifyOutcome outcome;
  outcome.results.resize(reads.size());
  parallel_for(reads.size(), config.threads, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(config.seed, i));
    outcome.results[i] = classifier.classify_read(reads[i].sequence, &rng);
  });

  std::vector<std::uint32_t> truths;
  std::vector<ClassificationResult> scored;
  for (std::size_t i = 0; i < reads.size(); ++i) {
    outcome.candidate_pairs += outcome.results[i].candidate_rows;
    const std::size_t windows = reads[i].sequence.size() - layout.k + 1;
    outcome.scanned_pairs_bound += windows * classifier.total_rows();
    if (reads[i].truth) {
      truths.push_back(*reads[i].truth);
      scored.push_back(outcome.results[i]);
    }
  }
  if (!truths.empty()) {
    outcome.have_truth = true;
    outcome.metrics = compute_metrics(scored, truths, layout.species());
  }
  return outcome;
}

}  // namespace

int cmd_classify(const RunConfig& config) {
  config.validate();
  if (config.layout_path.empty()) {
    throw ConfigError("classify requires --layout");
  }
  const DatabaseLayout layout = load_layout(config.layout_path);
  if (layout.k != config.k) {
    throw ConfigError("layout was built with k=" + std::to_string(layout.k));
  }
  const TracingTable table = obtain_table(config, layout, config.eth);
  const auto reads = load_reads(config.reads_path);

  const ClassifyOutcome outcome =
      run_classification(config, layout, table, reads, config.effective_threshold());

  std::filesystem::create_directories(config.out_dir);
  {
    auto tsv = open_out(config.out_dir / "results.tsv");
    for (std::size_t i = 0; i < reads.size(); ++i) {
      tsv << format_result_line(reads[i].id, outcome.results[i]) << '\n';
    }
  }
  if (outcome.have_truth) {
    open_out(config.out_dir / "metrics.json") << metrics_json(outcome.metrics).dump(2) << '\n';
  }

  // Analytical report from the measured gate-level counts plus the measured
  // filter pruning on this workload.
  {
    const SearchStats probe = probe_search_stats(config, layout.rows_per_crossbar, layout.k);
    const double reduction =
        outcome.candidate_pairs > 0
            ? static_cast<double>(outcome.scanned_pairs_bound) /
                  static_cast<double>(outcome.candidate_pairs)
            : 1.0;
    const QueryBatch batch = [&] {
      std::vector<Sequence> queries;
      queries.reserve(reads.size());
      for (const LoadedRead& r : reads) {
        if (r.sequence.size() >= layout.k) {
          queries.push_back(r.sequence.subsequence(0, layout.k));
        }
      }
      return batch_queries(queries, table, config.eth, config.examine_limit);
    }();
    const PerfConstants constants = config.constants_path.empty()
                                        ? PerfConstants{}
                                        : PerfConstants::from_file(config.constants_path);
    const double writes_per_kmer =
        static_cast<double>(probe.writes) / layout.rows_per_crossbar;
    const PerfReport report = make_perf_report(
        config.num_sas, probe.magic_cycles, writes_per_kmer, 1.0, reduction,
        static_cast<double>(std::max<std::size_t>(1, batch.queries.size())), constants,
        config.endurance, config.writes_per_cell,
        static_cast<int>(layout.rows_per_crossbar));
    open_out(config.out_dir / "perf.json") << report.to_json().dump(2) << '\n';
  }

  if (config.eth_sweep_max >= 0) {
    auto csv = open_out(config.out_dir / "eth_sweep.csv");
    csv << "eth,tp,fp,fn,sensitivity,precision,f1\n";
    for (int eth = 0; eth <= config.eth_sweep_max; ++eth) {
      const TracingTable sweep_table = build_tracing_table(layout.placements, eth, layout.k);
      const int threshold = config.sa_threshold >= 0 ? config.sa_threshold : eth;
      const ClassifyOutcome sweep =
          run_classification(config, layout, sweep_table, reads, threshold);
      const QualityMetrics& m = sweep.metrics;
      csv << eth << ',' << m.tp << ',' << m.fp << ',' << m.fn << ',' << m.sensitivity << ','
          << m.precision << ',' << m.f1 << '\n';
    }
  }

  if (outcome.have_truth) {
    std::cout << "classified " << reads.size() << " reads; f1=" << outcome.metrics.f1 << '\n';
  } else {
    std::cout << "classified " << reads.size() << " reads\n";
  }
  return 0;
}

int cmd_detect(const RunConfig& config) {
  config.validate();
  if (!config.target_set) {
    throw ConfigError("detect requires --target");
  }
  if (config.layout_path.empty()) {
    throw ConfigError("detect requires --layout");
  }
  const DatabaseLayout layout = load_layout(config.layout_path);
  if (layout.k != config.k) {
    throw ConfigError("layout was built with k=" + std::to_string(layout.k));
  }
  const TracingTable table = obtain_table(config, layout, config.eth);
  const auto reads = load_reads(config.reads_path);

  const Classifier classifier(layout, table, config.make_sa_model(), config.backend);
  std::vector<char> detected(reads.size(), 0);
  parallel_for(reads.size(), config.threads, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(config.seed, i));
    detected[i] = classifier.detect_read(reads[i].sequence, config.target_species, &rng) ? 1 : 0;
  });

  std::filesystem::create_directories(config.out_dir);
  {
    auto tsv = open_out(config.out_dir / "detect.tsv");
    for (std::size_t i = 0; i < reads.size(); ++i) {
      tsv << reads[i].id << '\t' << static_cast<int>(detected[i]) << '\n';
    }
  }

  std::vector<std::pair<bool, bool>> outcomes;
  bool have_truth = false;
  for (std::size_t i = 0; i < reads.size(); ++i) {
    if (reads[i].truth) {
      have_truth = true;
      outcomes.emplace_back(detected[i] != 0, *reads[i].truth == config.target_species);
    }
  }
  if (have_truth) {
    const QualityMetrics m = detection_metrics(outcomes);
    open_out(config.out_dir / "metrics.json") << metrics_json(m).dump(2) << '\n';
    std::cout << "detection f1=" << m.f1 << '\n';
  }
  return 0;
}

int cmd_bench(const RunConfig& config) {
  config.validate();
  if (config.layout_path.empty()) {
    throw ConfigError("bench requires --layout");
  }
  const DatabaseLayout layout = load_layout(config.layout_path);
  const TracingTable table = obtain_table(config, layout, config.eth);

  // Measured filter pruning: fraction of stored rows a query histogram
  // traces to, over sample queries (the reads file when given, otherwise
  // stored k-mers replayed as queries).
  std::vector<Sequence> queries;
  if (!config.reads_path.empty()) {
    for (const LoadedRead& r : load_reads(config.reads_path)) {
      if (r.sequence.size() >= layout.k) {
        queries.push_back(r.sequence.subsequence(0, layout.k));
      }
    }
  } else {
    std::mt19937_64 rng(config.seed);
    const std::size_t want = std::min<std::size_t>(1000, layout.total_kmers());
    for (std::size_t i = 0; i < want; ++i) {
      const auto& xb = layout.crossbars[rng() % layout.crossbars.size()];
      queries.push_back(xb.kmers[rng() % xb.kmers.size()].sequence);
    }
  }
  if (queries.empty()) {
    throw ConfigError("bench needs at least one query");
  }

  std::uint64_t candidate = 0;
  for (const Sequence& q : queries) {
    for (const CrossbarRange& range : table.ranges_for(compute_histogram(q))) {
      for (std::uint32_t xb = range.first; xb <= range.last; ++xb) {
        candidate += layout.crossbars[xb].kmers.size();
      }
    }
  }
  const double total_pairs =
      static_cast<double>(queries.size()) * static_cast<double>(layout.total_kmers());
  const double pass_fraction = candidate > 0 ? static_cast<double>(candidate) / total_pairs : 0.0;
  const double reduction = pass_fraction > 0 ? 1.0 / pass_fraction : 1.0;

  const double parallelism = static_cast<double>(
      std::max<std::size_t>(1, batch_queries(queries, table, config.eth,
                                             config.examine_limit)
                                   .queries.size()));

  const SearchStats probe = probe_search_stats(config, layout.rows_per_crossbar, layout.k);
  const double writes_per_kmer =
      static_cast<double>(probe.writes) / layout.rows_per_crossbar;
  const PerfConstants constants = config.constants_path.empty()
                                      ? PerfConstants{}
                                      : PerfConstants::from_file(config.constants_path);

  ordered_json sweep = ordered_json::array();
  for (const int num_sas : {1, 2, 4, 8, 16, 32, 64, 128}) {
    if (num_sas > static_cast<int>(layout.rows_per_crossbar)) continue;
    for (const bool with_filter : {false, true}) {
      const PerfReport report = make_perf_report(
          num_sas, probe.magic_cycles, writes_per_kmer, 1.0,
          with_filter ? reduction : 1.0, with_filter ? parallelism : 1.0, constants,
          config.endurance, config.writes_per_cell,
          static_cast<int>(layout.rows_per_crossbar));
      ordered_json entry = report.to_json();
      entry["filter"] = with_filter;
      entry["measured_pass_fraction"] = with_filter ? pass_fraction : 1.0;
      sweep.push_back(std::move(entry));
    }
  }

  ordered_json out;
  out["pass_fraction"] = pass_fraction;
  out["filter_reduction"] = reduction;
  out["batch_parallelism"] = parallelism;
  out["sweep"] = std::move(sweep);

  std::filesystem::create_directories(config.out_dir);
  open_out(config.out_dir / "bench.json") << out.dump(2) << '\n';
  std::cout << "pass fraction " << pass_fraction << ", reduction " << reduction
            << "x, parallelism " << parallelism << '\n';
  return 0;
}

}  // namespace clapim

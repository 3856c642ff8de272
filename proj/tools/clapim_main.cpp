#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clapim/errors.hpp"
#include "cli_commands.hpp"

namespace {

using clapim::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& config,
                        std::vector<std::string>& genome_specs) {
  cmd->add_option("--k", config.k, "k-mer length (1-64)")->capture_default_str();
  cmd->add_option("--eth", config.eth, "edit-distance threshold for the base-count filter")
      ->capture_default_str();
  cmd->add_option("--threshold", config.sa_threshold,
                  "sense-amplifier hit threshold (-1: follow --eth)")
      ->capture_default_str();
  cmd->add_option("--num-sas", config.num_sas, "sense amplifiers per crossbar")
      ->capture_default_str();
  cmd->add_option("--sa-mode", config.sa_mode, "ideal|stochastic")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, clapim::SaMode>{{"ideal", clapim::SaMode::kIdeal},
                                                {"stochastic", clapim::SaMode::kStochastic}}))
      ->capture_default_str();
  cmd->add_option("--backend", config.backend, "functional|gate-level")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, clapim::Backend>{{"functional", clapim::Backend::kFunctional},
                                                 {"gate-level", clapim::Backend::kGateLevel}}))
      ->capture_default_str();
  cmd->add_option("--seed", config.seed, "master RNG seed")->capture_default_str();
  cmd->add_option("--threads", config.threads, "worker threads (output is thread-count independent)")
      ->capture_default_str();
  cmd->add_option("--examine-limit", config.examine_limit,
                  "queries the batching stage examines per batch")
      ->capture_default_str();
  cmd->add_option("--rows", config.rows_per_crossbar, "crossbar rows")->capture_default_str();
  cmd->add_option("--out", config.out_dir, "output directory")->required();
  cmd->add_option("--genome", genome_specs, "reference genome as id=fasta-path (repeatable)");
  cmd->add_option("--sa-table", config.sa_table_path, "confidence-table file for stochastic mode");
  cmd->add_option("--constants", config.constants_path, "perf-constants key=value file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edit-tolerant k-mer classifier with an in-crossbar search simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file with one [subcommand] section; give it before the "
                 "subcommand; command-line flags win");

  RunConfig config;
  std::vector<std::string> genome_specs;

  CLI::App* build = app.add_subcommand("build-db", "extract k-mers and build layout + tracing table");
  add_common_options(build, config, genome_specs);
  build->add_option("--stride", config.stride, "extraction stride")->capture_default_str();
  build->add_flag("--dedup", config.dedup, "drop duplicate k-mers within a group");

  CLI::App* gen = app.add_subcommand("gen-reads", "generate an error-injected synthetic sample");
  add_common_options(gen, config, genome_specs);
  gen->add_option("--reads-per-genome", config.reads_per_genome, "reads drawn per genome")
      ->capture_default_str();
  gen->add_option("--read-len", config.read_len, "read length")->capture_default_str();
  gen->add_option("--profile", config.profile, "error profile: low|high|none")
      ->capture_default_str();

  CLI::App* classify = app.add_subcommand("classify", "classify reads against a database");
  add_common_options(classify, config, genome_specs);
  classify->add_option("--layout", config.layout_path, "layout.bin from build-db")->required();
  classify->add_option("--table", config.table_path, "tracing.bin from build-db (rebuilt if absent)");
  classify->add_option("--reads", config.reads_path, "reads FASTA")->required();
  classify->add_option("--eth-sweep", config.eth_sweep_max,
                       "also emit eth_sweep.csv for eth 0..N");

  CLI::App* detect = app.add_subcommand("detect", "single-species detection (any-hit reduction)");
  add_common_options(detect, config, genome_specs);
  detect->add_option("--layout", config.layout_path, "layout.bin from build-db")->required();
  detect->add_option("--table", config.table_path, "tracing.bin from build-db (rebuilt if absent)");
  detect->add_option("--reads", config.reads_path, "reads FASTA")->required();
  detect->add_option("--target", config.target_species, "species id to detect")->required();

  CLI::App* bench = app.add_subcommand("bench", "latency/throughput/energy/lifetime sweep");
  add_common_options(bench, config, genome_specs);
  bench->add_option("--layout", config.layout_path, "layout.bin from build-db")->required();
  bench->add_option("--table", config.table_path, "tracing.bin from build-db (rebuilt if absent)");
  bench->add_option("--reads", config.reads_path, "optional query reads FASTA");
  bench->add_option("--endurance", config.endurance, "device endurance in writes")
      ->capture_default_str();
  bench->add_option("--writes-per-cell", config.writes_per_cell,
                    "wear-leveled writes per cell per search")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    for (const std::string& spec : genome_specs) {
      config.genome_specs.push_back(clapim::parse_genome_spec(spec));
    }
    if (build->parsed()) return clapim::cmd_build_db(config);
    if (gen->parsed()) return clapim::cmd_gen_reads(config);
    if (classify->parsed()) return clapim::cmd_classify(config);
    if (detect->parsed()) {
      config.target_set = true;
      return clapim::cmd_detect(config);
    }
    if (bench->parsed()) return clapim::cmd_bench(config);
    return 1;
  } catch (const clapim::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const clapim::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "clapim/pipeline.hpp"
#include "clapim/readgen.hpp"
#include "clapim/sa_model.hpp"

namespace clapim {

/// Everything a command run needs; populated by the CLI (flags win over the
/// config file) and validated before dispatch.
struct RunConfig {
  std::uint32_t k = 64;
  int eth = 4;
  int sa_threshold = -1;  ///< -1: follow eth
  int num_sas = 32;
  SaMode sa_mode = SaMode::kIdeal;
  Backend backend = Backend::kFunctional;
  std::uint64_t seed = 42;
  int threads = 1;
  std::size_t examine_limit = 350;
  std::size_t stride = 1;
  bool dedup = false;
  std::uint32_t rows_per_crossbar = 128;

  /// Reference inputs as (species id, FASTA path).
  std::vector<std::pair<std::uint32_t, std::string>> genome_specs;
  std::filesystem::path reads_path;
  std::filesystem::path layout_path;
  std::filesystem::path table_path;
  std::filesystem::path out_dir;
  std::filesystem::path sa_table_path;   ///< optional confidence-table file
  std::filesystem::path constants_path;  ///< optional perf-constants file

  std::size_t reads_per_genome = 100;
  std::size_t read_len = 64;
  std::string profile = "low";  ///< low | high | none

  std::uint32_t target_species = 0;
  bool target_set = false;

  int eth_sweep_max = -1;  ///< >= 0: classify additionally sweeps eth 0..max

  double endurance = 1e9;
  double writes_per_cell = 7.0;

  int effective_threshold() const { return sa_threshold >= 0 ? sa_threshold : eth; }
  SaModel make_sa_model() const;
  void validate() const;  // throws ConfigError
};

int cmd_build_db(const RunConfig& config);
int cmd_gen_reads(const RunConfig& config);
int cmd_classify(const RunConfig& config);
int cmd_detect(const RunConfig& config);
int cmd_bench(const RunConfig& config);

/// `id=path` -> (id, path); throws ConfigError on malformed specs.
std::pair<std::uint32_t, std::string> parse_genome_spec(const std::string& spec);

}  // namespace clapim

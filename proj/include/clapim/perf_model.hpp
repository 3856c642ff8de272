#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace clapim {

/// Device and periphery parameters; defaults are the published cell and
/// sense-amplifier figures, overridable via key=value file.
struct PerfConstants {
  double magic_cycle_ns = 3.0;
  double switching_energy_fj = 6.4;
  double sa_latency_ns = 36.0;
  double sa_energy_pj = 11.5;
  double cell_area_um2 = 9e-4;

  static PerfConstants from_file(const std::filesystem::path& path);
  void validate() const;  // all strictly positive

  bool operator==(const PerfConstants&) const = default;
};

/// Search latency in microseconds: the MAGIC program plus the sensing
/// passes, `magic_cycles * cycle + sa_latency * ceil(rows / num_sas)`.
double search_latency_us(int num_sas, std::uint64_t magic_cycles,
                         const PerfConstants& c = {}, int rows = 128);

/// Classification throughput in Gbases/min; linear in the number of queries
/// the batching stage runs in parallel.
double throughput_gbases_per_min(double batch_parallelism, double latency_us,
                                 double bases_per_query = 64.0);

/// Energy of one search in picojoules from the write and SA-read counts,
/// divided by `filter_reduction` when the filtering stage is modeled (the
/// filter activates 1/reduction of the crossbars).
double energy_per_search_pj(double writes, double sa_reads, double filter_reduction = 1.0,
                            const PerfConstants& c = {});

/// Searches until the endurance budget is exhausted, assuming wear-leveled
/// rows: endurance * filter_reduction / writes_per_cell.
double lifetime_searches(double endurance_writes, double filter_reduction = 250.0,
                         double writes_per_cell = 7.0);

/// Measured periphery area cost per SA count (data table; no interpolation).
double area_overhead(int num_sas);

struct PerfReport {
  int num_sas = 32;
  std::uint64_t magic_cycles = 0;
  double filter_reduction = 1.0;
  double batch_parallelism = 1.0;
  double writes_per_search = 0.0;
  double sa_reads_per_search = 0.0;

  double search_latency_us = 0.0;
  double throughput_gbases_per_min = 0.0;
  double energy_per_search_pj = 0.0;
  double energy_without_filter_pj = 0.0;
  double energy_reduction_ratio = 1.0;
  double lifetime_searches = 0.0;
  double area_overhead_fraction = 0.0;

  nlohmann::ordered_json to_json() const;
};

/// Fills every derived PerfReport field from the count inputs.
PerfReport make_perf_report(int num_sas, std::uint64_t magic_cycles, double writes,
                            double sa_reads, double filter_reduction, double batch_parallelism,
                            const PerfConstants& c = {}, double endurance_writes = 1e9,
                            double writes_per_cell = 7.0, int rows = 128,
                            double bases_per_query = 64.0);

}  // namespace clapim

#include "clapim/perf_model.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "clapim/errors.hpp"

namespace clapim {

PerfConstants PerfConstants::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open constants file: " + path.string());
  }
  PerfConstants c;
  std::map<std::string, double*> fields = {
      {"magic_cycle_ns", &c.magic_cycle_ns},
      {"switching_energy_fj", &c.switching_energy_fj},
      {"sa_latency_ns", &c.sa_latency_ns},
      {"sa_energy_pj", &c.sa_energy_pj},
      {"cell_area_um2", &c.cell_area_um2},
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw ParseError("expected key=value", line_no);
      }
      continue;
    }
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const auto it = fields.find(key);
    if (it == fields.end()) {
      throw ParseError("unknown constant '" + key + "'", line_no);
    }
    std::istringstream value(line.substr(eq + 1));
    if (!(value >> *it->second)) {
      throw ParseError("bad numeric value for '" + key + "'", line_no);
    }
  }
  c.validate();
  return c;
}

void PerfConstants::validate() const {
  for (double v : {magic_cycle_ns, switching_energy_fj, sa_latency_ns, sa_energy_pj,
                   cell_area_um2}) {
    if (v <= 0.0) {
      throw ConfigError("performance constants must be strictly positive");
    }
  }
}

double search_latency_us(int num_sas, std::uint64_t magic_cycles, const PerfConstants& c,
                         int rows) {
  if (num_sas < 1) {
    throw ConfigError("num_sas must be at least 1");
  }
  if (rows < 1) {
    throw ConfigError("rows must be at least 1");
  }
  const auto sensing_passes = static_cast<double>((rows + num_sas - 1) / num_sas);
  const double latency_ns =
      static_cast<double>(magic_cycles) * c.magic_cycle_ns + c.sa_latency_ns * sensing_passes;
  return latency_ns / 1000.0;
}

double throughput_gbases_per_min(double batch_parallelism, double latency_us,
                                 double bases_per_query) {
  if (batch_parallelism <= 0.0 || latency_us <= 0.0 || bases_per_query <= 0.0) {
    throw ConfigError("throughput inputs must be positive");
  }
  const double bases_per_second = batch_parallelism * bases_per_query / (latency_us * 1e-6);
  return bases_per_second * 60.0 / 1e9;
}

double energy_per_search_pj(double writes, double sa_reads, double filter_reduction,
                            const PerfConstants& c) {
  if (writes < 0.0 || sa_reads < 0.0) {
    throw ConfigError("counts must be non-negative");
  }
  if (filter_reduction <= 0.0) {
    throw ConfigError("filter_reduction must be positive");
  }
  const double pj = writes * (c.switching_energy_fj / 1000.0) + sa_reads * c.sa_energy_pj;
  return pj / filter_reduction;
}

double lifetime_searches(double endurance_writes, double filter_reduction,
                         double writes_per_cell) {
  if (endurance_writes <= 0.0 || filter_reduction <= 0.0 || writes_per_cell <= 0.0) {
    throw ConfigError("lifetime inputs must be positive");
  }
  return endurance_writes * filter_reduction / writes_per_cell;
}

double area_overhead(int num_sas) {
  switch (num_sas) {
    case 1: return 0.00;
    case 2: return 0.00;
    case 4: return 0.01;
    case 8: return 0.02;
    case 16: return 0.04;
    case 32: return 0.09;
    case 64: return 0.16;
    case 128: return 0.28;
    default: throw ConfigError("num_sas outside the characterized set {1,2,...,128}");
  }
}

PerfReport make_perf_report(int num_sas, std::uint64_t magic_cycles, double writes,
                            double sa_reads, double filter_reduction, double batch_parallelism,
                            const PerfConstants& c, double endurance_writes,
                            double writes_per_cell, int rows, double bases_per_query) {
  c.validate();
  PerfReport report;
  report.num_sas = num_sas;
  report.magic_cycles = magic_cycles;
  report.filter_reduction = filter_reduction;
  report.batch_parallelism = batch_parallelism;
  report.writes_per_search = writes;
  report.sa_reads_per_search = sa_reads;

  report.search_latency_us = search_latency_us(num_sas, magic_cycles, c, rows);
  report.throughput_gbases_per_min =
      throughput_gbases_per_min(batch_parallelism, report.search_latency_us, bases_per_query);
  report.energy_without_filter_pj = energy_per_search_pj(writes, sa_reads, 1.0, c);
  report.energy_per_search_pj = energy_per_search_pj(writes, sa_reads, filter_reduction, c);
  report.energy_reduction_ratio =
      report.energy_without_filter_pj / report.energy_per_search_pj;
  report.lifetime_searches = lifetime_searches(endurance_writes, filter_reduction,
                                               writes_per_cell);
  report.area_overhead_fraction = area_overhead(num_sas);
  return report;
}

nlohmann::ordered_json PerfReport::to_json() const {
  return nlohmann::ordered_json{
      {"num_sas", num_sas},
      {"magic_cycles", magic_cycles},
      {"filter_reduction", filter_reduction},
      {"batch_parallelism", batch_parallelism},
      {"writes_per_search", writes_per_search},
      {"sa_reads_per_search", sa_reads_per_search},
      {"search_latency_us", search_latency_us},
      {"throughput_gbases_per_min", throughput_gbases_per_min},
      {"energy_per_search_pj", energy_per_search_pj},
      {"energy_without_filter_pj", energy_without_filter_pj},
      {"energy_reduction_ratio", energy_reduction_ratio},
      {"lifetime_searches", lifetime_searches},
      {"area_overhead_fraction", area_overhead_fraction},
  };
}

}  // namespace clapim

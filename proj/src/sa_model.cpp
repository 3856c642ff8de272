#include "clapim/sa_model.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace clapim {

ConfidenceTable ConfidenceTable::builtin() {
  // Measured hit probability per threshold for edit counts 1..13.
  struct Series {
    int threshold;
    double p[13];
  };
  static constexpr Series kSeries[] = {
      {1, {0.719, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {2, {1, 0.7713, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {3, {1, 0.997, 0.791, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {4, {1, 1, 0.9905, 0.798, 0.001, 0, 0, 0, 0, 0, 0, 0, 0}},
      {5, {1, 1, 1, 0.974, 0.79, 0.002, 0, 0, 0, 0, 0, 0, 0}},
      {6, {1, 1, 1, 1, 0.936, 0.7776, 0.002, 0, 0, 0, 0, 0, 0}},
      {7, {1, 1, 1, 1, 1, 0.894, 0.767, 0.006, 0, 0, 0, 0, 0}},
      {8, {1, 1, 1, 1, 1, 0.998, 0.864, 0.751, 0.017, 0.001, 0, 0, 0}},
      {9, {1, 1, 1, 1, 1, 1, 1, 0.987, 0.756, 0.271, 0.0328, 0.002, 0}},
  };
  ConfidenceTable table;
  for (const Series& series : kSeries) {
    for (int count = 1; count <= 13; ++count) {
      table.insert(series.threshold, count, series.p[count - 1]);
    }
  }
  return table;
}

ConfidenceTable ConfidenceTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open confidence table: " + path.string());
  }
  ConfidenceTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    int threshold = 0;
    int count = 0;
    double p = 0.0;
    if (!(row >> threshold)) continue;  // blank line
    if (!(row >> count >> p)) {
      throw ParseError("confidence table row needs `threshold edit_count probability`", line_no);
    }
    if (p < 0.0 || p > 1.0) {
      throw ParseError("confidence probability outside [0,1]", line_no);
    }
    table.insert(threshold, count, p);
  }
  return table;
}

void ConfidenceTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw LoadError("cannot write confidence table: " + path.string());
  }
  out << "# threshold edit_count probability\n";
  char buf[32];
  for (const auto& [key, p] : entries_) {
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
    out << key.first << ' ' << key.second << ' ' << std::string_view(buf, end) << '\n';
  }
}

void ConfidenceTable::insert(int threshold, int edit_count, double probability) {
  if (probability < 0.0 || probability > 1.0) {
    throw ConfigError("confidence probability outside [0,1]");
  }
  entries_[{threshold, edit_count}] = probability;
}

std::optional<double> ConfidenceTable::probability(int threshold, int edit_count) const {
  const auto it = entries_.find({threshold, edit_count});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool sa_hit(int edit_count, const SaModel& sa, std::mt19937_64* rng) {
  const bool ideal = edit_count <= sa.threshold;
  if (sa.mode == SaMode::kIdeal) {
    return ideal;
  }
  if (rng == nullptr) {
    throw ConfigError("stochastic SA decision requires a generator");
  }
  const double p = sa.confidence.probability(sa.threshold, edit_count).value_or(ideal ? 1.0 : 0.0);
  return canonical_uniform(*rng) < p;
}

}  // namespace clapim

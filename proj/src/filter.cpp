#include "clapim/filter.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "clapim/errors.hpp"

namespace clapim {

namespace {

constexpr char kTableMagic[4] = {'C', 'L', 'T', 'T'};
constexpr std::uint8_t kTableVersion = 1;

void put_u8(std::ofstream& out, std::uint8_t v) { out.put(static_cast<char>(v)); }

void put_u24(std::ofstream& out, std::uint32_t v) {
  for (int i = 0; i < 3; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u32(std::ofstream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_bytes(std::ifstream& in, int n) {
  std::uint32_t v = 0;
  for (int i = 0; i < n; ++i) {
    const int byte = in.get();
    if (byte == std::ifstream::traits_type::eof()) {
      throw LoadError("tracing table file truncated");
    }
    v |= static_cast<std::uint32_t>(byte) << (8 * i);
  }
  return v;
}

}  // namespace

bool base_count_pass(const BaseHistogram& h1, const BaseHistogram& h2, int eth) {
  return histogram_l1(h1, h2) <= 2u * static_cast<std::uint32_t>(eth);
}

std::vector<BaseHistogram> enumerate_neighbors(const BaseHistogram& h, int eth, std::uint32_t k) {
  const std::uint32_t budget = 2u * static_cast<std::uint32_t>(eth);
  const auto lo = [&](std::uint32_t v) { return v > budget ? v - budget : 0; };
  const auto hi = [&](std::uint32_t v) { return std::min(k, v + budget); };
  const auto diff = [](std::uint32_t x, std::uint32_t y) { return x > y ? x - y : y - x; };

  std::vector<BaseHistogram> out;
  for (std::uint32_t a = lo(h.a); a <= hi(h.a); ++a) {
    for (std::uint32_t t = lo(h.t); t <= hi(h.t) && a + t <= k; ++t) {
      for (std::uint32_t g = lo(h.g); g <= hi(h.g) && a + t + g <= k; ++g) {
        const BaseHistogram cand{a, t, g, k - a - t - g};
        if (diff(a, h.a) + diff(t, h.t) + diff(g, h.g) + diff(cand.c, h.c) <= budget) {
          out.push_back(cand);
        }
      }
    }
  }
  return out;
}

TracingTable::TracingTable(std::uint32_t k, int eth)
    : k_(k), eth_(eth), slots_(kHistogramSlots) {}

std::span<const CrossbarRange> TracingTable::ranges_for(const BaseHistogram& h) const {
  return slots_[histogram_slot(h)];
}

std::size_t TracingTable::populated_slots() const {
  std::size_t n = 0;
  for (const auto& list : slots_) n += list.empty() ? 0 : 1;
  return n;
}

std::size_t TracingTable::total_ranges() const {
  std::size_t n = 0;
  for (const auto& list : slots_) n += list.size();
  return n;
}

std::size_t TracingTable::footprint_bytes() const {
  return slots_.size() * 4 + total_ranges() * 6;
}

TracingTable build_tracing_table(const PlacementMap& placements, int eth, std::uint32_t k) {
  TracingTable table(k, eth);
  for (const auto& [slot, ranges] : placements) {
    if (slot >= kHistogramSlots) {
      throw BuildError("placement key out of slot range");
    }
    BaseHistogram h;
    try {
      h = histogram_from_slot(slot, k);
    } catch (const KeyOverflowError& e) {
      throw BuildError(std::string("placement key invalid for k: ") + e.what());
    }
    for (const CrossbarRange& r : ranges) {
      if (r.first > r.last || r.last > kMaxCrossbarIndex) {
        throw BuildError("malformed crossbar range");
      }
    }
    // Neighborhood symmetry: appending this group's ranges to every neighbor
    // slot yields exactly the per-query neighbor union.
    for (const BaseHistogram& n : enumerate_neighbors(h, eth, k)) {
      auto& list = table.slots_[histogram_slot(n)];
      list.insert(list.end(), ranges.begin(), ranges.end());
    }
  }
  for (auto& list : table.slots_) {
    std::sort(list.begin(), list.end());
  }
  return table;
}

std::vector<CrossbarRange> trace_query(const TracingTable& table, const Sequence& query) {
  const auto ranges = table.ranges_for(compute_histogram(query));
  return {ranges.begin(), ranges.end()};
}

void TracingTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw LoadError("cannot write tracing table: " + path.string());
  }
  out.write(kTableMagic, 4);
  put_u8(out, kTableVersion);
  put_u8(out, static_cast<std::uint8_t>(k_));
  put_u8(out, static_cast<std::uint8_t>(eth_));
  std::uint32_t populated = 0;
  for (const auto& list : slots_) populated += list.empty() ? 0 : 1;
  put_u32(out, populated);
  for (std::uint32_t slot = 0; slot < slots_.size(); ++slot) {
    const auto& list = slots_[slot];
    if (list.empty()) continue;
    put_u32(out, slot);
    put_u32(out, static_cast<std::uint32_t>(list.size()));
    for (const CrossbarRange& r : list) {
      put_u24(out, r.first);
      put_u24(out, r.last);
    }
  }
  if (!out) {
    throw LoadError("write failure: " + path.string());
  }
}

TracingTable TracingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LoadError("cannot open tracing table: " + path.string());
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kTableMagic, 4) != 0) {
    throw LoadError("not a tracing table file");
  }
  const std::uint32_t version = get_bytes(in, 1);
  if (version != kTableVersion) {
    throw LoadError("unsupported tracing table version " + std::to_string(version));
  }
  const std::uint32_t k = get_bytes(in, 1);
  const int eth = static_cast<int>(get_bytes(in, 1));
  const std::uint32_t populated = get_bytes(in, 4);

  TracingTable table(k, eth);
  std::uint32_t prev_slot = 0;
  for (std::uint32_t i = 0; i < populated; ++i) {
    const std::uint32_t slot = get_bytes(in, 4);
    if (slot >= kHistogramSlots || (i > 0 && slot <= prev_slot)) {
      throw LoadError("tracing table slots out of order or out of range");
    }
    prev_slot = slot;
    const std::uint32_t count = get_bytes(in, 4);
    auto& list = table.slots_[slot];
    list.reserve(count);
    for (std::uint32_t j = 0; j < count; ++j) {
      CrossbarRange r;
      r.first = get_bytes(in, 3);
      r.last = get_bytes(in, 3);
      if (r.first > r.last) {
        throw LoadError("malformed range in tracing table");
      }
      list.push_back(r);
    }
  }
  return table;
}

QueryBatch batch_queries(std::span<const Sequence> stream, const TracingTable& table, int eth,
                         std::size_t examine_limit) {
  if (examine_limit < 1) {
    throw ConfigError("examine_limit must be at least 1");
  }
  QueryBatch batch;
  const std::uint32_t gap = 4u * static_cast<std::uint32_t>(eth);
  for (const Sequence& query : stream) {
    if (batch.examined == examine_limit) break;
    ++batch.examined;
    const BaseHistogram h = compute_histogram(query);
    bool disjoint = true;
    for (const BatchedQuery& admitted : batch.queries) {
      if (histogram_l1(h, admitted.histogram) <= gap) {
        disjoint = false;
        break;
      }
    }
    if (batch.queries.empty() || disjoint) {
      batch.queries.push_back(BatchedQuery{query, h, trace_query(table, query)});
    }
  }
  return batch;
}

}  // namespace clapim

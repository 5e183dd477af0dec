#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include <json.hpp>

#include "caif/contract/types.hpp"
#include "caif/sim/types.hpp"

namespace caif::nonrt {

using contract::Scope;

struct PerfHistoryEntry {
    int cell_id = 0;
    int slice_id = 0;
    int prb_allocated = 0;
    double avg_cqi = 0.0;
    double achieved_throughput_mbps = 0.0;
    long timestamp_s = 0;  // simulated seconds

    bool operator==(const PerfHistoryEntry&) const = default;
};

nlohmann::json history_entry_to_json(const PerfHistoryEntry& e);
PerfHistoryEntry history_entry_from_json(const nlohmann::json& doc);

inline constexpr std::size_t kDefaultHistoryCapacity = 86400;

// O1-fed table of past performance, bounded per scope. One writer, many readers.
class PerfStore {
public:
    explicit PerfStore(std::size_t capacity_per_scope = kDefaultHistoryCapacity);

    // Needed by the feasibility check: PRB ceiling of each cell.
    void set_cell_prb(int cell_id, int total_prb);
    std::optional<int> cell_prb(int cell_id) const;

    // Appends every row also to an NDJSON file (append-only).
    void attach_log(const std::filesystem::path& path);

    // One row per report; the timestamp is tick * tick_s.
    void ingest_o1(std::span<const sim::KpmReport> reports, int tick_s = 1);
    void append(const PerfHistoryEntry& entry);

    std::vector<PerfHistoryEntry> rows(Scope scope) const;
    std::vector<PerfHistoryEntry> cell_rows(int cell_id) const;
    std::size_t size(Scope scope) const;
    std::size_t capacity() const { return capacity_; }

    // Replays an NDJSON history file into the store.
    void load_ndjson(const std::filesystem::path& path);

private:
    std::size_t capacity_;
    mutable std::shared_mutex mu_;
    std::map<Scope, std::deque<PerfHistoryEntry>> rows_;
    std::map<int, int> cell_prb_;
    std::unique_ptr<std::ofstream> log_;
};

}  // namespace caif::nonrt

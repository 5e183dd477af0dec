#include "caif/nonrt/perf_store.hpp"

#include <stdexcept>
#include <string>

namespace caif::nonrt {

using nlohmann::json;

json history_entry_to_json(const PerfHistoryEntry& e) {
    return {{"cell_id", e.cell_id},
            {"slice_id", e.slice_id},
            {"prb_allocated", e.prb_allocated},
            {"avg_cqi", e.avg_cqi},
            {"achieved_throughput_mbps", e.achieved_throughput_mbps},
            {"timestamp_s", e.timestamp_s}};
}

PerfHistoryEntry history_entry_from_json(const json& doc) {
    PerfHistoryEntry e;
    e.cell_id = doc.at("cell_id").get<int>();
    e.slice_id = doc.at("slice_id").get<int>();
    e.prb_allocated = doc.at("prb_allocated").get<int>();
    e.avg_cqi = doc.at("avg_cqi").get<double>();
    e.achieved_throughput_mbps = doc.at("achieved_throughput_mbps").get<double>();
    e.timestamp_s = doc.at("timestamp_s").get<long>();
    if (e.achieved_throughput_mbps < 0.0) throw std::invalid_argument("negative throughput in history row");
    return e;
}

PerfStore::PerfStore(std::size_t capacity_per_scope) : capacity_(capacity_per_scope) {
    if (capacity_ == 0) throw std::invalid_argument("history capacity must be positive");
}

void PerfStore::set_cell_prb(int cell_id, int total_prb) {
    std::unique_lock lock(mu_);
    cell_prb_[cell_id] = total_prb;
}

std::optional<int> PerfStore::cell_prb(int cell_id) const {
    std::shared_lock lock(mu_);
    auto it = cell_prb_.find(cell_id);
    if (it == cell_prb_.end()) return std::nullopt;
    return it->second;
}

void PerfStore::attach_log(const std::filesystem::path& path) {
    std::unique_lock lock(mu_);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    log_ = std::make_unique<std::ofstream>(path, std::ios::app);
    if (!*log_) throw std::runtime_error("cannot open history log " + path.string());
}

void PerfStore::ingest_o1(std::span<const sim::KpmReport> reports, int tick_s) {
    for (const auto& r : reports) {
        append({r.cell_id, r.slice_id, r.prb_used, r.avg_cqi, r.dl_throughput_mbps, r.tick * tick_s});
    }
}

void PerfStore::append(const PerfHistoryEntry& entry) {
    if (entry.achieved_throughput_mbps < 0.0) throw std::invalid_argument("negative throughput in history row");
    std::unique_lock lock(mu_);
    auto& ring = rows_[Scope{entry.cell_id, entry.slice_id}];
    ring.push_back(entry);
    while (ring.size() > capacity_) ring.pop_front();
    if (log_) *log_ << history_entry_to_json(entry).dump() << '\n' << std::flush;
}

std::vector<PerfHistoryEntry> PerfStore::rows(Scope scope) const {
    std::shared_lock lock(mu_);
    auto it = rows_.find(scope);
    if (it == rows_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::vector<PerfHistoryEntry> PerfStore::cell_rows(int cell_id) const {
    std::shared_lock lock(mu_);
    std::vector<PerfHistoryEntry> out;
    for (const auto& [scope, ring] : rows_) {
        if (scope.cell_id == cell_id) out.insert(out.end(), ring.begin(), ring.end());
    }
    return out;
}

std::size_t PerfStore::size(Scope scope) const {
    std::shared_lock lock(mu_);
    auto it = rows_.find(scope);
    return it == rows_.end() ? 0 : it->second.size();
}

void PerfStore::load_ndjson(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            append(history_entry_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

}  // namespace caif::nonrt

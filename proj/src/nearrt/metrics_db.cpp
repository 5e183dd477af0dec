#include "caif/nearrt/metrics_db.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace caif::nearrt {

MetricsDb::MetricsDb(std::size_t capacity_per_scope) : capacity_(capacity_per_scope) {
    if (capacity_ == 0) throw std::invalid_argument("metrics capacity must be positive");
}

void MetricsDb::ingest(std::span<const sim::KpmReport> reports) {
    for (const auto& r : reports) ingest(r);
}

void MetricsDb::ingest(const sim::KpmReport& report) {
    std::unique_lock lock(mu_);
    auto& ring = rings_[Scope{report.cell_id, report.slice_id}];
    // Late arrivals are slotted in by tick so readers always see an ordered ring.
    auto pos = std::upper_bound(ring.begin(), ring.end(), report.tick,
                                [](long tick, const sim::KpmReport& r) { return tick < r.tick; });
    ring.insert(pos, report);
    while (ring.size() > capacity_) ring.pop_front();
}

std::optional<sim::KpmReport> MetricsDb::latest(Scope scope) const {
    std::shared_lock lock(mu_);
    auto it = rings_.find(scope);
    if (it == rings_.end() || it->second.empty()) return std::nullopt;
    return it->second.back();
}

std::vector<sim::KpmReport> MetricsDb::reports(Scope scope) const {
    std::shared_lock lock(mu_);
    auto it = rings_.find(scope);
    if (it == rings_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

}  // namespace caif::nearrt

#include "caif/sim/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace caif::sim {

int ratio_floor_prb(int pct, int total_prb) { return pct * total_prb / 100; }

std::map<int, int> allocate_prb(const Cell& cell, const std::map<int, double>& demands_mbps,
                                const std::map<int, double>& rates_mbps_per_prb) {
    struct Entry {
        int slice_id;
        int min_cap;
        int max_cap;
        long long need;
        int alloc;
    };
    std::vector<Entry> entries;
    for (const auto& s : cell.slices) {
        Entry e{s.slice_id, ratio_floor_prb(s.ratio.min_ratio_pct, cell.total_prb),
                ratio_floor_prb(s.ratio.max_ratio_pct, cell.total_prb), 0, 0};
        const auto d = demands_mbps.find(s.slice_id);
        const double demand = d == demands_mbps.end() ? 0.0 : d->second;
        if (demand > 0.0) {
            const auto r = rates_mbps_per_prb.find(s.slice_id);
            const double rate = r == rates_mbps_per_prb.end() ? 0.0 : r->second;
            // Without a usable rate the slice can absorb anything up to its cap.
            e.need = rate > 0.0 ? static_cast<long long>(std::ceil(demand / rate - 1e-9)) : e.max_cap;
            e.need = std::max<long long>(e.need, 1);
            e.alloc = e.min_cap;
        }
        entries.push_back(e);
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.slice_id < b.slice_id; });

    int remaining = cell.total_prb;
    for (const auto& e : entries) remaining -= e.alloc;

    auto room = [](const Entry& e) {
        return std::max<long long>(0, std::min<long long>(e.max_cap, e.need) - e.alloc);
    };

    while (remaining > 0) {
        std::vector<Entry*> active;
        double weight_sum = 0.0;
        for (auto& e : entries) {
            if (e.need > 0 && room(e) > 0) {
                active.push_back(&e);
                weight_sum += static_cast<double>(e.need - e.alloc);
            }
        }
        if (active.empty()) break;

        const int pool = remaining;
        int progress = 0;
        for (Entry* e : active) {
            const double share = static_cast<double>(pool) * static_cast<double>(e->need - e->alloc) / weight_sum;
            const int give = static_cast<int>(std::min<long long>(static_cast<long long>(std::floor(share)), room(*e)));
            e->alloc += give;
            progress += give;
        }
        remaining -= progress;
        if (progress == 0) {
            for (Entry* e : active) {
                if (remaining == 0) break;
                ++e->alloc;
                --remaining;
            }
        }
    }

    std::map<int, int> out;
    for (const auto& e : entries) out[e.slice_id] = e.alloc;
    return out;
}

}  // namespace caif::sim

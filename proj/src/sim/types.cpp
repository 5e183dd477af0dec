#include "caif/sim/types.hpp"

#include <set>

namespace caif::sim {

using nlohmann::json;

std::string_view to_string(Service s) { return s == Service::eMBB ? "eMBB" : "mMTC"; }

std::string_view to_string(Mobility m) { return m == Mobility::Fixed ? "Fixed" : "RandomWalk"; }

std::optional<Service> service_from_string(std::string_view s) {
    if (s == "eMBB") return Service::eMBB;
    if (s == "mMTC") return Service::mMTC;
    return std::nullopt;
}

std::optional<Mobility> mobility_from_string(std::string_view s) {
    if (s == "Fixed") return Mobility::Fixed;
    if (s == "RandomWalk") return Mobility::RandomWalk;
    return std::nullopt;
}

const SliceConfig* Cell::find_slice(int slice_id) const {
    for (const auto& s : slices) {
        if (s.slice_id == slice_id) return &s;
    }
    return nullptr;
}

SliceConfig* Cell::find_slice(int slice_id) {
    for (auto& s : slices) {
        if (s.slice_id == slice_id) return &s;
    }
    return nullptr;
}

const Cell* Scenario::find_cell(int cell_id) const {
    for (const auto& c : cells) {
        if (c.cell_id == cell_id) return &c;
    }
    return nullptr;
}

Cell* Scenario::find_cell(int cell_id) {
    for (auto& c : cells) {
        if (c.cell_id == cell_id) return &c;
    }
    return nullptr;
}

json kpm_to_json(const KpmReport& r) {
    return {{"tick", r.tick},
            {"cell_id", r.cell_id},
            {"slice_id", r.slice_id},
            {"dl_throughput_mbps", r.dl_throughput_mbps},
            {"prb_used", r.prb_used},
            {"avg_cqi", r.avg_cqi},
            {"demand_mbps", r.demand_mbps}};
}

KpmReport kpm_from_json(const json& doc) {
    KpmReport r;
    r.tick = doc.at("tick").get<long>();
    r.cell_id = doc.at("cell_id").get<int>();
    r.slice_id = doc.at("slice_id").get<int>();
    r.dl_throughput_mbps = doc.at("dl_throughput_mbps").get<double>();
    r.prb_used = doc.at("prb_used").get<int>();
    r.avg_cqi = doc.at("avg_cqi").get<double>();
    r.demand_mbps = doc.value("demand_mbps", 0.0);
    return r;
}

void check_cell_ratios(const Cell& cell) {
    int min_sum = 0;
    for (const auto& s : cell.slices) {
        if (!s.ratio.valid()) {
            throw InvariantViolation("cell " + std::to_string(cell.cell_id) + " slice " + std::to_string(s.slice_id) +
                                     ": ratio must satisfy 0 <= min <= max <= 100");
        }
        min_sum += s.ratio.min_ratio_pct;
    }
    if (min_sum > 100) {
        throw InvariantViolation("cell " + std::to_string(cell.cell_id) + ": minimum ratios sum to " +
                                 std::to_string(min_sum) + "% (> 100%)");
    }
}

void check_scenario(const Scenario& sc) {
    if (sc.cells.empty()) throw InvariantViolation("cells: scenario has no cells");
    if (sc.tick_s <= 0) throw InvariantViolation("tick_s: must be positive");
    if (sc.demand_jitter_frac < 0.0 || sc.demand_jitter_frac >= 1.0) {
        throw InvariantViolation("demand_jitter_frac: must be in [0, 1)");
    }
    std::set<int> cell_ids;
    for (const auto& c : sc.cells) {
        if (!cell_ids.insert(c.cell_id).second) {
            throw InvariantViolation("cells: duplicate cell_id " + std::to_string(c.cell_id));
        }
        if (c.total_prb <= 0) throw InvariantViolation("cell " + std::to_string(c.cell_id) + ": total_prb must be positive");
        std::set<int> slice_ids;
        for (const auto& s : c.slices) {
            if (!slice_ids.insert(s.slice_id).second) {
                throw InvariantViolation("cell " + std::to_string(c.cell_id) + ": duplicate slice_id " +
                                         std::to_string(s.slice_id));
            }
        }
        check_cell_ratios(c);
    }
    for (const auto& g : sc.ue_groups) {
        const Cell* cell = sc.find_cell(g.cell_id);
        if (!cell || !cell->find_slice(g.slice_id)) {
            throw InvariantViolation("ue_group " + g.name + ": references unknown cell " + std::to_string(g.cell_id) +
                                     " slice " + std::to_string(g.slice_id));
        }
        if (g.count < 0) throw InvariantViolation("ue_group " + g.name + ": count must be non-negative");
        if (g.cqi_mean < 1 || g.cqi_mean > 15) throw InvariantViolation("ue_group " + g.name + ": cqi_mean outside 1..15");
        if (g.cqi_jitter < 0) throw InvariantViolation("ue_group " + g.name + ": cqi_jitter must be non-negative");
        if (g.per_ue_demand_mbps() < 0.0) throw InvariantViolation("ue_group " + g.name + ": negative load");
    }
}

}  // namespace caif::sim

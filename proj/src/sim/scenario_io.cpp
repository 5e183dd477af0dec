#include "caif/sim/scenario_io.hpp"

#include <algorithm>

#include "caif/util/files.hpp"

namespace caif::sim {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) throw ScenarioParseError(path + ": expected object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ScenarioParseError(path + "/" + key + ": missing field");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ScenarioParseError(path + "/" + key + ": wrong type (" + it->dump() + ")");
    }
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) throw ScenarioParseError("/: scenario must be a JSON object");
    Scenario sc;
    sc.name = doc.value("name", std::string("scenario"));
    sc.tick_s = doc.value("tick_s", 1);
    sc.demand_jitter_frac = doc.value("demand_jitter_frac", 0.05);

    if (!doc.contains("cells") || !doc["cells"].is_array()) throw ScenarioParseError("/cells: missing array");
    const json& cells = doc["cells"];
    if (cells.empty()) throw ScenarioParseError("/cells: scenario has no cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string path = "/cells/" + std::to_string(i);
        Cell cell;
        cell.cell_id = field<int>(cells[i], path, "cell_id");
        cell.total_prb = field<int>(cells[i], path, "total_prb");
        const json& slices = cells[i].value("slices", json::array());
        for (std::size_t j = 0; j < slices.size(); ++j) {
            const std::string spath = path + "/slices/" + std::to_string(j);
            SliceConfig s;
            s.slice_id = field<int>(slices[j], spath, "slice_id");
            const auto service = field<std::string>(slices[j], spath, "service");
            auto parsed = service_from_string(service);
            if (!parsed) throw ScenarioParseError(spath + "/service: unknown service '" + service + "'");
            s.service = *parsed;
            s.ratio.min_ratio_pct = slices[j].value("min_ratio_pct", 0);
            s.ratio.max_ratio_pct = slices[j].value("max_ratio_pct", 100);
            cell.slices.push_back(s);
        }
        sc.cells.push_back(std::move(cell));
    }

    const json& groups = doc.value("ue_groups", json::array());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const std::string path = "/ue_groups/" + std::to_string(i);
        UeGroup g;
        g.name = field<std::string>(groups[i], path, "name");
        const auto mobility = field<std::string>(groups[i], path, "mobility");
        auto m = mobility_from_string(mobility);
        if (!m) throw ScenarioParseError(path + "/mobility: unknown mobility '" + mobility + "'");
        g.mobility = *m;
        g.count = field<int>(groups[i], path, "count");
        g.cell_id = field<int>(groups[i], path, "cell_id");
        g.slice_id = field<int>(groups[i], path, "slice_id");
        g.qos_id = field<int>(groups[i], path, "qos_id");
        g.gbr = groups[i].value("gbr", false);
        g.per_ue_target_mbps = field<double>(groups[i], path, "per_ue_target_mbps");
        if (groups[i].contains("offered_load_mbps")) {
            g.offered_load_mbps = field<double>(groups[i], path, "offered_load_mbps");
        }
        g.cqi_mean = field<int>(groups[i], path, "cqi_mean");
        g.cqi_jitter = groups[i].value("cqi_jitter", 0);
        sc.ue_groups.push_back(std::move(g));
    }

    try {
        check_scenario(sc);
    } catch (const InvariantViolation& e) {
        throw ScenarioParseError(e.what());
    }
    return sc;
}

Scenario parse_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ScenarioParseError("line " + std::to_string(line) + ": " + e.what());
    }
    return parse_scenario(doc);
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario_text(read_text_file(path)); }

json scenario_to_json(const Scenario& sc) {
    json cells = json::array();
    for (const auto& c : sc.cells) {
        json slices = json::array();
        for (const auto& s : c.slices) {
            slices.push_back({{"slice_id", s.slice_id},
                              {"service", std::string(to_string(s.service))},
                              {"min_ratio_pct", s.ratio.min_ratio_pct},
                              {"max_ratio_pct", s.ratio.max_ratio_pct}});
        }
        cells.push_back({{"cell_id", c.cell_id}, {"total_prb", c.total_prb}, {"slices", slices}});
    }
    json groups = json::array();
    for (const auto& g : sc.ue_groups) {
        json j = {{"name", g.name},
                  {"mobility", std::string(to_string(g.mobility))},
                  {"count", g.count},
                  {"cell_id", g.cell_id},
                  {"slice_id", g.slice_id},
                  {"qos_id", g.qos_id},
                  {"gbr", g.gbr},
                  {"per_ue_target_mbps", g.per_ue_target_mbps},
                  {"cqi_mean", g.cqi_mean},
                  {"cqi_jitter", g.cqi_jitter}};
        if (g.offered_load_mbps) j["offered_load_mbps"] = *g.offered_load_mbps;
        groups.push_back(std::move(j));
    }
    return {{"name", sc.name},
            {"tick_s", sc.tick_s},
            {"demand_jitter_frac", sc.demand_jitter_frac},
            {"cells", cells},
            {"ue_groups", groups}};
}

}  // namespace caif::sim

#include "caif/gateway/replay.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "caif/util/files.hpp"

namespace caif::gateway {

ReplayScript parse_script(const nlohmann::json& doc) {
    ReplayScript s;
    s.name = doc.value("name", std::string("replay"));
    s.duration_s = doc.at("duration_s").get<long>();
    if (s.duration_s <= 0) throw std::invalid_argument("script: duration_s must be positive");
    for (const auto& e : doc.value("events", nlohmann::json::array())) {
        ScriptEvent ev;
        ev.at = e.at("at").get<long>();
        ev.type = e.at("type").get<std::string>();
        if (ev.at < 0 || ev.at >= s.duration_s) throw std::invalid_argument("script: event time outside the run");
        if (ev.type == "intent") {
            ev.turns = e.at("turns").get<std::vector<std::string>>();
            if (ev.turns.empty()) throw std::invalid_argument("script: intent without turns");
        } else if (ev.type == "stop") {
            ev.policy = e.value("policy", std::string("latest"));
        } else {
            throw std::invalid_argument("script: unknown event type '" + ev.type + "'");
        }
        s.events.push_back(std::move(ev));
    }
    std::stable_sort(s.events.begin(), s.events.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
    return s;
}

ReplayScript load_script(const std::filesystem::path& path) {
    return parse_script(nlohmann::json::parse(read_text_file(path)));
}

ReplayResult run_replay(System& system, const ReplayScript& script) {
    ReplayResult out;
    const long tick_s = system.simulator().scenario().tick_s;
    const long start = system.current_tick();
    std::size_t next = 0;
    std::optional<std::string> latest_policy;

    auto fire = [&](long tick) {
        const long elapsed = (tick - start) * tick_s;
        while (next < script.events.size() && script.events[next].at <= elapsed) {
            const auto& ev = script.events[next++];
            try {
                if (ev.type == "intent") {
                    ReplayIntent ri;
                    ri.at = ev.at;
                    std::string sid = system.create_session();
                    for (const auto& t : ev.turns) ri.session = system.add_turn(sid, t);
                    if (ri.session.status == SessionStatus::ContractReady) {
                        ri.activation = system.activate(*ri.session.contract_id);
                        if (ri.activation->policy && ri.activation->status == nonrt::ActivationStatus::Dispatched) {
                            latest_policy = ri.activation->policy->policy_id;
                        } else {
                            out.errors.push_back("t=" + std::to_string(ev.at) + ": activation " +
                                                 std::string(nonrt::to_string(ri.activation->status)) + ": " +
                                                 ri.activation->reason);
                        }
                    } else {
                        out.errors.push_back("t=" + std::to_string(ev.at) + ": intent ended " +
                                             std::string(to_string(ri.session.status)));
                    }
                    out.intents.push_back(std::move(ri));
                } else {
                    std::string id = ev.policy == "latest" ? latest_policy.value_or("") : ev.policy;
                    system.stop_policy(id);
                }
            } catch (const std::exception& e) {
                out.errors.push_back("t=" + std::to_string(ev.at) + ": " + e.what());
            }
        }
    };

    const long ticks = (script.duration_s + tick_s - 1) / tick_s;
    for (long i = 0; i < ticks; ++i) {
        auto reports = system.step(fire);
        for (const auto& r : reports) {
            ReplayRow row;
            row.tick = r.tick;
            row.cell_id = r.cell_id;
            row.slice_id = r.slice_id;
            row.dl_throughput_mbps = r.dl_throughput_mbps;
            row.prb_used = r.prb_used;
            row.avg_cqi = r.avg_cqi;
            auto ratio = system.simulator().ratio(r.cell_id, r.slice_id);
            row.min_ratio_pct = ratio.min_ratio_pct;
            row.max_ratio_pct = ratio.max_ratio_pct;
            if (auto p = system.near_rt().enforced_on_cell(r.cell_id); p && p->scope.slice_id == r.slice_id) {
                row.target_mbps = p->target_throughput_mbps;
            }
            out.rows.push_back(row);
        }
    }

    out.markers = system.markers();
    for (const auto& m : out.markers) {
        for (auto& row : out.rows) {
            if (row.tick == m.tick && row.cell_id == m.scope.cell_id && row.slice_id == m.scope.slice_id) {
                row.marker = row.marker.empty() ? m.label : row.marker + ";" + m.label;
            }
        }
    }
    out.controls = system.near_rt().control_log();
    return out;
}

std::string replay_csv(const ReplayResult& result) {
    std::ostringstream os;
    os << "tick,cell_id,slice_id,dl_throughput_mbps,prb_used,avg_cqi,min_ratio_pct,max_ratio_pct,target_mbps,marker\n";
    char buf[256];
    for (const auto& r : result.rows) {
        std::snprintf(buf, sizeof buf, "%ld,%d,%d,%.4f,%d,%.3f,%d,%d,", r.tick, r.cell_id, r.slice_id,
                      r.dl_throughput_mbps, r.prb_used, r.avg_cqi, r.min_ratio_pct, r.max_ratio_pct);
        os << buf;
        if (r.target_mbps) {
            std::snprintf(buf, sizeof buf, "%.2f", *r.target_mbps);
            os << buf;
        }
        os << ',' << r.marker << '\n';
    }
    return os.str();
}

}  // namespace caif::gateway

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "caif/gateway/system.hpp"

namespace caif::gateway {

struct ScriptEvent {
    long at = 0;                     // simulated second
    std::string type;                // intent | stop
    std::vector<std::string> turns;  // intent
    std::string policy;              // stop: policy id, or "latest"
};

struct ReplayScript {
    std::string name;
    long duration_s = 0;
    std::vector<ScriptEvent> events;
};

ReplayScript parse_script(const nlohmann::json& doc);
ReplayScript load_script(const std::filesystem::path& path);

struct ReplayRow {
    long tick = 0;
    int cell_id = 0;
    int slice_id = 0;
    double dl_throughput_mbps = 0.0;
    int prb_used = 0;
    double avg_cqi = 0.0;
    int min_ratio_pct = 0;
    int max_ratio_pct = 0;
    std::optional<double> target_mbps;
    std::string marker;
};

struct ReplayIntent {
    long at = 0;
    SessionView session;
    std::optional<nonrt::ActivationResult> activation;
};

struct ReplayResult {
    std::vector<ReplayRow> rows;
    std::vector<Marker> markers;
    std::vector<ReplayIntent> intents;
    std::vector<nearrt::ControlRecord> controls;
    std::vector<std::string> errors;
};

// Runs the script against the system from its current tick, one step per
// simulated second, firing events whose time has come before each step.
ReplayResult run_replay(System& system, const ReplayScript& script);

std::string replay_csv(const ReplayResult& result);

}  // namespace caif::gateway

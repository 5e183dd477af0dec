#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "caif/eval/harness.hpp"
#include "caif/eval/stats.hpp"

namespace caif::eval {

struct ShotSummary {
    int shots = 0;
    CiResult accuracy;
    MeanCi latency_s;
};

struct EvalReport {
    std::string mode;
    CiResult overall;
    std::map<pipeline::Field, CiResult> fields;
    std::vector<ShotSummary> per_shot;
    MeanCi latency_s;
    long harmful = 0;
    long blocked = 0;
    long forwarded = 0;
    double mean_rounds = 0.0;
};

// Aggregates records; the result does not depend on record order.
// Throws std::invalid_argument on an empty input.
EvalReport make_report(std::vector<RunRecord> records);

nlohmann::json report_to_json(const EvalReport& r);
std::string report_table(const EvalReport& r);
// shots,n,accuracy_pct,lo_pct,hi_pct,mean_latency_s,latency_lo_s,latency_hi_s
std::string per_shot_csv(const EvalReport& r);

}  // namespace caif::eval

#include "caif/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace caif::eval {

using pipeline::Field;

EvalReport make_report(std::vector<RunRecord> records) {
    if (records.empty()) throw std::invalid_argument("no records to report");
    std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.instance_id, a.mode) < std::tie(b.instance_id, b.mode);
    });

    std::set<Mode> modes;
    for (const auto& r : records) modes.insert(r.mode);
    EvalReport out;
    out.mode = modes.size() == 1 ? std::string(to_string(*modes.begin())) : "mixed";

    long ok = 0;
    std::map<Field, long> field_ok;
    std::map<int, std::pair<long, long>> shot_counts;
    std::map<int, std::vector<double>> shot_latency;
    std::vector<double> latencies;
    long rounds = 0;
    for (const auto& r : records) {
        const bool s = r.success();
        ok += s;
        for (Field f : pipeline::kAllFields) {
            auto it = r.per_field_match.find(f);
            field_ok[f] += it != r.per_field_match.end() && it->second;
        }
        auto& sc = shot_counts[r.shots];
        sc.first += s;
        sc.second += 1;
        shot_latency[r.shots].push_back(r.latency_s);
        latencies.push_back(r.latency_s);
        out.harmful += r.harmful;
        out.blocked += r.blocked;
        out.forwarded += r.forwarded;
        rounds += r.rounds_used;
    }
    const long n = static_cast<long>(records.size());
    out.overall = wilson_ci(ok, n);
    for (Field f : pipeline::kAllFields) out.fields[f] = wilson_ci(field_ok[f], n);
    for (const auto& [shots, counts] : shot_counts) {
        out.per_shot.push_back({shots, wilson_ci(counts.first, counts.second), mean_ci(shot_latency[shots])});
    }
    out.latency_s = mean_ci(latencies);
    out.mean_rounds = static_cast<double>(rounds) / static_cast<double>(n);
    return out;
}

namespace {

nlohmann::json mean_to_json(const MeanCi& m) {
    return {{"n", m.n}, {"mean", m.mean}, {"lo", m.lo}, {"hi", m.hi}};
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& r) {
    nlohmann::json fields = nlohmann::json::object();
    for (const auto& [f, ci] : r.fields) fields[std::string(pipeline::field_name(f))] = ci_to_json(ci);
    nlohmann::json shots = nlohmann::json::array();
    for (const auto& s : r.per_shot) {
        shots.push_back({{"shots", s.shots}, {"accuracy", ci_to_json(s.accuracy)}, {"latency_s", mean_to_json(s.latency_s)}});
    }
    return {{"mode", r.mode},
            {"overall", ci_to_json(r.overall)},
            {"fields", fields},
            {"per_shot", shots},
            {"latency_s", mean_to_json(r.latency_s)},
            {"harmful_executions", r.harmful},
            {"blocked", r.blocked},
            {"forwarded", r.forwarded},
            {"mean_rounds", r.mean_rounds}};
}

std::string report_table(const EvalReport& r) {
    std::ostringstream os;
    char line[160];
    auto row = [&](const std::string& label, const CiResult& ci) {
        std::snprintf(line, sizeof line, "  %-16s %4ld/%-4ld  %6.1f%%  [%5.1f%%, %5.1f%%]\n", label.c_str(), ci.successes,
                      ci.trials, ci.point_pct, ci.lo_pct, ci.hi_pct);
        os << line;
    };
    os << "mode: " << r.mode << "\n";
    row("overall", r.overall);
    os << "fields:\n";
    for (const auto& [f, ci] : r.fields) row(std::string(pipeline::field_name(f)), ci);
    os << "per shot:\n";
    for (const auto& s : r.per_shot) {
        row(std::to_string(s.shots) + "-shot", s.accuracy);
        std::snprintf(line, sizeof line, "  %-16s mean latency %.4f s [%.4f, %.4f]\n", "", s.latency_s.mean,
                      s.latency_s.lo, s.latency_s.hi);
        os << line;
    }
    std::snprintf(line, sizeof line, "harmful executions: %ld  blocked: %ld  forwarded: %ld  mean rounds: %.3f\n",
                  r.harmful, r.blocked, r.forwarded, r.mean_rounds);
    os << line;
    return os.str();
}

std::string per_shot_csv(const EvalReport& r) {
    std::ostringstream os;
    os << "shots,n,accuracy_pct,lo_pct,hi_pct,mean_latency_s,latency_lo_s,latency_hi_s\n";
    char line[200];
    for (const auto& s : r.per_shot) {
        std::snprintf(line, sizeof line, "%d,%ld,%.4f,%.4f,%.4f,%.6f,%.6f,%.6f\n", s.shots, s.accuracy.trials,
                      s.accuracy.point_pct, s.accuracy.lo_pct, s.accuracy.hi_pct, s.latency_s.mean, s.latency_s.lo,
                      s.latency_s.hi);
        os << line;
    }
    return os.str();
}

}  // namespace caif::eval

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "caif/contract/registry.hpp"
#include "caif/eval/dataset.hpp"
#include "caif/eval/harness.hpp"
#include "caif/eval/stats.hpp"
#include "caif/gateway/config.hpp"
#include "caif/gateway/replay.hpp"
#include "caif/gateway/system.hpp"
#include "caif/nonrt/a1_handler.hpp"
#include "caif/nonrt/perf_store.hpp"
#include "caif/nonrt/sla_rapp.hpp"
#include "caif/pipeline/phrase_parser.hpp"
#include "caif/pipeline/pipeline.hpp"

using namespace caif;
using Clock = std::chrono::steady_clock;

namespace {

std::filesystem::path asset(const std::string& rel) { return std::filesystem::path(CAIF_ASSET_DIR) / rel; }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            if (!pass) detail << "; ";
            else detail.str("");
            pass = false;
            detail << what;
        }
    }
};

int failures = 0;

void report(const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail.str("");
        o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name;
    const auto d = o.detail.str();
    if (!d.empty()) std::cout << "  (" << d << ")";
    std::cout << std::endl;
}

std::string fmt(double v, int prec = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

double round1(double v) { return std::round(v * 10) / 10; }

std::unique_ptr<gateway::System> make_system() {
    return gateway::System::from_config(gateway::load_config(asset("config.json")));
}

bool in_band(double v, double target) { return std::abs(v - target) <= 0.10 * target; }

const gateway::ReplayRow* row_at(const gateway::ReplayResult& r, long tick, contract::Scope s) {
    for (const auto& row : r.rows) {
        if (row.tick == tick && row.cell_id == s.cell_id && row.slice_id == s.slice_id) return &row;
    }
    return nullptr;
}

// First tick in [from, to) whose throughput is in band, or -1.
long band_entry(const gateway::ReplayResult& r, contract::Scope s, double target, long from, long to) {
    for (long t = from; t < to; ++t) {
        const auto* row = row_at(r, t, s);
        if (row && in_band(row->dl_throughput_mbps, target)) return t;
    }
    return -1;
}

void wilson(Outcome& o) {
    struct Case {
        long s, n;
        double lo, hi;
    };
    const std::array<Case, 3> cases{{{484, 500, 94.9, 98.0}, {499, 500, 98.9, 100.0}, {500, 500, 99.2, 100.0}}};
    const auto t0 = Clock::now();
    std::vector<eval::CiResult> got;
    for (const auto& c : cases) got.push_back(eval::wilson_ci(c.s, c.n));
    const double elapsed = seconds_since(t0);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        const auto& g = got[i];
        o.require(std::abs(g.lo_pct - c.lo) <= 0.1 + 1e-9 && std::abs(g.hi_pct - c.hi) <= 0.1 + 1e-9,
                  std::to_string(c.s) + "/" + std::to_string(c.n) + " gave [" + fmt(g.lo_pct) + ", " + fmt(g.hi_pct) + "]");
    }
    o.require(elapsed < 1.0, "took " + fmt(elapsed, 3) + " s");
    if (o.pass) {
        o.detail << "[" << fmt(round1(got[0].lo_pct), 1) << ", " << fmt(round1(got[0].hi_pct), 1) << "] [" << fmt(round1(got[1].lo_pct), 1)
                 << ", " << fmt(round1(got[1].hi_pct), 1) << "] [" << fmt(round1(got[2].lo_pct), 1) << ", "
                 << fmt(round1(got[2].hi_pct), 1) << "] in " << fmt(elapsed * 1e3, 3) << " ms";
    }
}

void targets(Outcome& o) {
    const double a = nonrt::derive_target(22, pipeline::Action::Decrease, 20);
    const double b = nonrt::derive_target(12, pipeline::Action::Decrease, 50);
    o.require(a == 18.0, "22 -20% gave " + fmt(a, 6));
    o.require(b == 6.0, "12 -50% gave " + fmt(b, 6));
    if (o.pass) o.detail << "18, 6";
}

void single_replay(Outcome& o) {
    const auto t0 = Clock::now();
    auto system = make_system();
    const auto script = gateway::load_script(asset("scripts/single_intent.json"));
    const auto res = gateway::run_replay(*system, script);
    const double wall = seconds_since(t0);
    const contract::Scope scope{1, 1};

    o.require(res.errors.empty(), res.errors.empty() ? "" : res.errors.front());
    o.require(res.intents.size() == 1 && res.intents[0].activation && res.intents[0].activation->policy,
              "no policy dispatched");
    if (!o.pass) return;
    const auto& act = *res.intents[0].activation;
    o.require(act.current_mbps && in_band(*act.current_mbps, 22.0), "starting throughput not near 22 Mbps");
    o.require(act.target_mbps && *act.target_mbps == 18.0, "target is not 18 Mbps");
    const auto pid = act.policy->policy_id;

    std::optional<nearrt::PolicyView> view;
    for (const auto& v : system->near_rt().policies()) {
        if (v.policy.policy_id == pid) view = v;
    }
    o.require(view && view->ended_at.has_value(), "policy never ended");
    if (!o.pass) return;
    const long start = view->enforced_at;
    const long end = *view->ended_at;
    o.require(view->policy.state == ric::PolicyState::Stopped, "policy did not stop");
    o.require(end - start <= act.policy->deadline_s, "policy outlived its deadline");

    const long entry = band_entry(res, scope, 18.0, start, end);
    o.require(entry >= 0 && entry - start <= 120, "band entry " + std::to_string(entry - start) + " s after activation");
    long inside = 0, total = 0;
    if (entry >= 0) {
        for (long t = entry; t < end; ++t) {
            const auto* row = row_at(res, t, scope);
            if (!row) continue;
            ++total;
            inside += in_band(row->dl_throughput_mbps, 18.0);
        }
    }
    const double frac = total ? double(inside) / total : 0.0;
    o.require(frac >= 0.90, "in band " + fmt(100 * frac, 1) + "% of the remaining window");

    long late_controls = 0;
    for (const auto& c : res.controls) late_controls += c.tick >= end;
    o.require(late_controls == 0, std::to_string(late_controls) + " controls after Stop");
    const auto* at_stop = row_at(res, end, scope);
    bool frozen = at_stop != nullptr;
    long after = 0;
    for (const auto& row : res.rows) {
        if (row.cell_id != scope.cell_id || row.slice_id != scope.slice_id || row.tick < end || !at_stop) continue;
        ++after;
        frozen &= row.min_ratio_pct == at_stop->min_ratio_pct && row.max_ratio_pct == at_stop->max_ratio_pct;
    }
    o.require(frozen && after > 0, "ratio changed after Stop");
    o.require(wall < 30.0, "took " + fmt(wall, 1) + " s");
    if (o.pass) {
        o.detail << "entry +" << entry - start << " s, " << fmt(100 * frac, 1) << "% in band, stop at t=" << end
                 << ", ratio held " << after << " ticks, " << fmt(wall, 2) << " s wall";
    }
}

void dynamic_replay(Outcome& o) {
    auto system = make_system();
    const auto script = gateway::load_script(asset("scripts/dynamic_intent.json"));
    const auto res = gateway::run_replay(*system, script);
    o.require(res.errors.empty(), res.errors.empty() ? "" : res.errors.front());
    o.require(res.intents.size() == 2 && res.intents[0].activation && res.intents[0].activation->policy &&
                  res.intents[1].activation && res.intents[1].activation->policy,
              "both intents must dispatch");
    if (!o.pass) return;
    const auto p1 = res.intents[0].activation->policy->policy_id;
    const auto& a2 = *res.intents[1].activation;
    const auto p2 = a2.policy->policy_id;
    o.require(a2.policy->scope == contract::Scope{1, 2}, "policy 2 not on slice 2");
    o.require(a2.target_mbps && *a2.target_mbps == 6.0, "policy 2 target is not 6 Mbps");

    std::optional<nearrt::PolicyView> v1, v2;
    for (const auto& v : system->near_rt().policies()) {
        if (v.policy.policy_id == p1) v1 = v;
        if (v.policy.policy_id == p2) v2 = v;
    }
    o.require(v1 && v2, "policies missing from the near-RT view");
    if (!o.pass) return;
    o.require(v2->enforced_at - v1->enforced_at == 120, "policy 2 arrived " +
                                                            std::to_string(v2->enforced_at - v1->enforced_at) +
                                                            " s after policy 1");
    o.require(v1->policy.state == ric::PolicyState::Replaced, "policy 1 is " + std::string(ric::to_string(v1->policy.state)));
    o.require(v1->ended_at && *v1->ended_at == v2->enforced_at, "policy 1 did not end on policy 2's tick");
    long late = 0;
    for (const auto& c : res.controls) late += c.policy_id == p1 && c.tick >= v2->enforced_at;
    o.require(late == 0, std::to_string(late) + " policy 1 controls after replacement");

    const long end = v2->ended_at.value_or(static_cast<long>(script.duration_s));
    const long entry = band_entry(res, {1, 2}, 6.0, v2->enforced_at, end);
    o.require(entry >= 0 && entry - v2->enforced_at <= 120,
              "slice 2 band entry " + std::to_string(entry - v2->enforced_at) + " s");
    if (o.pass) {
        o.detail << "policy 1 Replaced at t=" << *v1->ended_at << ", slice 2 in band +" << entry - v2->enforced_at
                 << " s";
    }
}

void guardrail(Outcome& o) {
    const auto prompts = pipeline::PromptLibrary::load(asset("prompts"));
    const auto catalog = contract::load_catalog(asset("catalog.json"));
    eval::Harness h(prompts, catalog);
    const auto data = eval::generate_dataset(0);
    const auto matrix = eval::fault_matrix(data.size());
    const auto base = eval::run_fault_matrix(h, eval::Mode::Baseline, data);
    const auto caif = eval::run_fault_matrix(h, eval::Mode::Caif, data);
    o.require(matrix.size() == 3 * pipeline::kAllFields.size() * 10, "matrix has " + std::to_string(matrix.size()) + " cells");

    // Misaligned or malformed, judged against ground truth here rather than by the harness flag.
    auto harmful = [&](const eval::RunRecord& r, std::size_t i) {
        if (!r.forwarded) return false;
        if (!r.failure.empty() || !r.produced) return true;
        return !pipeline::differing_fields(*r.produced, data[matrix[i].instance_index].ground_truth).empty();
    };
    long base_harm = 0, caif_harm = 0, caif_blocked = 0;
    for (std::size_t i = 0; i < base.size(); ++i) base_harm += harmful(base[i], i);
    for (std::size_t i = 0; i < caif.size(); ++i) {
        caif_harm += harmful(caif[i], i);
        caif_blocked += caif[i].blocked;
    }
    o.require(base_harm >= 1, "baseline forwarded no harmful output");
    o.require(caif_harm == 0, "CAIF forwarded " + std::to_string(caif_harm));
    if (o.pass) {
        o.detail << matrix.size() << " runs: baseline harmful " << base_harm << ", CAIF harmful 0 ("
                 << caif.size() - caif_blocked << " corrected, " << caif_blocked << " blocked)";
    }
}

// Runs selected doctest cases from a unit-test binary and reads its summary line.
void run_suite(Outcome& o, const std::string& binary, const std::string& filter, long& cases) {
    const std::string cmd = std::string(CAIF_TEST_BIN_DIR) + "/" + binary + " --test-case=\"" + filter +
                            "\" --no-version=true --no-colors=true 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        o.require(false, "cannot run " + binary);
        return;
    }
    std::string out;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    long ran = 0, passed = 0;
    const auto at = out.find("test cases:");
    if (at != std::string::npos) std::sscanf(out.c_str() + at, "test cases: %ld | %ld passed", &ran, &passed);
    o.require(status == 0 && ran > 0 && ran == passed, binary + " [" + filter + "] " + std::to_string(passed) + "/" +
                                                           std::to_string(ran) + " passed");
    cases += ran;
}

void properties(Outcome& o) {
    long cases = 0;
    run_suite(o, "test_contract", "property: parse(serialize*,property: lifecycle brute force*", cases);
    run_suite(o, "test_sim", "property: allocator conservation*", cases);
    run_suite(o, "test_nearrt", "property: 10000 random control steps,quiescence*", cases);
    run_suite(o, "test_pipeline", "property: refinement locality*,property: refine keeps*", cases);
    o.require(cases == 7, std::to_string(cases) + " of 7 property cases ran");
    if (o.pass) o.detail << cases << " property cases";
}

class Recorder : public ric::A1Endpoint {
public:
    void put_policy(const ric::A1Policy& p) override { received.push_back(p); }
    void delete_policy(const std::string&) override {}
    std::vector<ric::A1Policy> received;
};

void feasibility(Outcome& o) {
    constexpr double eff[15] = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
                                2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547};
    auto rate = [&](double cqi) {
        const int lo = static_cast<int>(std::floor(cqi));
        if (lo >= 15) return 0.18 * eff[14];
        return 0.18 * (eff[lo - 1] + (cqi - lo) * (eff[lo] - eff[lo - 1]));
    };
    std::mt19937_64 rng(2024);
    auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto irange = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    long checked = 0, feasible = 0, dispatched_infeasible = 0, mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        nonrt::PerfStore store;
        const int total = irange(6, 273);
        store.set_cell_prb(1, total);
        double m = -1;
        const int n = irange(60, 120);
        for (int i = 0; i < n; ++i) {
            const double cqi = uni(0, 1) < 0.1 ? 0.0 : uni(1.0, 15.0);
            store.append({1, irange(1, 2), irange(0, total), cqi, uni(1, 40), i});
            if (cqi >= 1) m = std::max(m, total * rate(cqi));
        }
        if (m < 0) continue;
        const double current = nonrt::current_throughput(store, 1, 1, 60);
        if (current <= 0) continue;

        for (int k = 0; k < 4; ++k) {
            contract::Registry reg;
            Recorder ep;
            nonrt::NonRtRic ric(reg, store, ep);
            pipeline::StructuredIntent intent;
            intent.cell_id = 1;
            intent.slice_id = 1;
            intent.metric = pipeline::Metric::DownlinkThroughput;
            intent.action = pipeline::Action::Increase;
            intent.magnitude_pct = irange(1, 100);
            intent.deadline_s = 300;
            const auto id = reg.register_contract(pipeline::build_contract(intent));
            reg.transition(id, contract::State::Validated, "acceptance");
            const double target = nonrt::derive_target(current, pipeline::Action::Increase, *intent.magnitude_pct);
            const bool oracle = target > 0 && target <= m;
            const auto r = ric.activate(id);
            ++checked;
            feasible += oracle;
            const bool got = r.status == nonrt::ActivationStatus::Dispatched;
            if (got != oracle) ++mismatches;
            if (!oracle && (!ep.received.empty() || reg.get(id).lifecycle.state != contract::State::Rejected)) {
                ++dispatched_infeasible;
            }
        }
    }
    o.require(checked > 0 && feasible > 0 && feasible < checked, "generator did not cover both outcomes");
    o.require(mismatches == 0, std::to_string(mismatches) + " verdicts disagree with the scan");
    o.require(dispatched_infeasible == 0, std::to_string(dispatched_infeasible) + " infeasible targets dispatched");
    if (o.pass) o.detail << checked << " activations, " << feasible << " feasible, " << checked - feasible << " rejected";
}

}  // namespace

int main() {
    report("wilson confidence intervals", wilson);
    report("target derivation", targets);
    report("single-intent assurance replay", single_replay);
    report("dynamic-intent assurance replay", dynamic_replay);
    report("guardrail differential", guardrail);
    report("property suites", properties);
    report("feasibility gate", feasibility);
    return failures == 0 ? 0 : 1;
}

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "caif/sim/allocator.hpp"
#include "caif/sim/cqi.hpp"
#include "caif/sim/scenario_io.hpp"
#include "caif/sim/simulator.hpp"
#include "support.hpp"

using namespace caif;
using namespace caif::sim;

namespace {

// CQI efficiency, 4-bit table (36.213 Table 7.2.3-1), typed in separately from the library.
constexpr double kOracleEff[15] = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
                                   2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547};

Cell two_slice_cell(int total, RrmPolicyRatio a, RrmPolicyRatio b) {
    Cell c;
    c.cell_id = 1;
    c.total_prb = total;
    c.slices = {{1, Service::eMBB, a}, {2, Service::mMTC, b}};
    return c;
}

Scenario campus() { return load_scenario(caif::test::asset("scenarios/campus.json")); }

Scenario one_cell(double demand_mbps, int cqi, RrmPolicyRatio ratio, int count = 1) {
    Scenario s;
    s.demand_jitter_frac = 0.0;
    s.cells = {Cell{1, 100, {{1, Service::eMBB, ratio}}}};
    UeGroup g;
    g.name = "g";
    g.count = count;
    g.cell_id = 1;
    g.slice_id = 1;
    g.per_ue_target_mbps = demand_mbps;
    g.cqi_mean = cqi;
    s.ue_groups = {g};
    return s;
}

}  // namespace

TEST_CASE("cqi rate table") {
    CHECK(slice_rate_per_prb(15) == doctest::Approx(0.18 * 5.5547).epsilon(1e-12));
    CHECK(slice_rate_per_prb(15) == doctest::Approx(0.9998).epsilon(1e-4));
    CHECK(slice_rate_per_prb(1) == doctest::Approx(0.0274).epsilon(2e-3));
    for (int q = 1; q <= 15; ++q) CHECK(slice_rate_per_prb(q) == doctest::Approx(0.18 * kOracleEff[q - 1]));
    CHECK(cqi_efficiency(7.5) == doctest::Approx((kOracleEff[6] + kOracleEff[7]) / 2));
    for (double a = 1; a <= 15; a += 0.25) {
        for (double b = a; b <= 15; b += 0.25) CHECK(slice_rate_per_prb(a) <= slice_rate_per_prb(b));
    }
    CHECK_THROWS_AS(slice_rate_per_prb(0.5), std::out_of_range);
    CHECK_THROWS_AS(slice_rate_per_prb(15.5), std::out_of_range);
}

TEST_CASE("allocator worked examples") {
    auto cell = two_slice_cell(100, {10, 50}, {10, 60});
    auto a = allocate_prb(cell, {{1, 1e6}, {2, 1e6}}, {{1, 1.0}, {2, 1.0}});
    CHECK(a.at(1) == 50);
    CHECK(a.at(2) == 50);

    Cell single{1, 100, {{1, Service::eMBB, {0, 100}}}};
    CHECK(allocate_prb(single, {{1, 0.0}}, {{1, 1.0}}).at(1) == 0);

    // Slice 2 idle: slice 1 gets min(cap, ceil(demand / rate)).
    auto idle = allocate_prb(cell, {{1, 20.5}, {2, 0.0}}, {{1, 1.0}, {2, 1.0}});
    CHECK(idle.at(1) == 21);
    CHECK(idle.at(2) == 0);
    auto capped = allocate_prb(cell, {{1, 500}, {2, 0.0}}, {{1, 1.0}, {2, 1.0}});
    CHECK(capped.at(1) == 50);
}

TEST_CASE("property: allocator conservation and ratio respect over 1000 random cells") {
    caif::test::Gen g(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        Cell cell;
        cell.cell_id = 1;
        cell.total_prb = g.range(1, 273);
        const int n = g.range(1, 4);
        int min_budget = 100;
        std::map<int, double> demand, rate;
        for (int s = 1; s <= n; ++s) {
            const int mn = g.range(0, std::min(min_budget, 60));
            min_budget -= mn;
            const int mx = g.range(mn, 100);
            cell.slices.push_back({s, Service::eMBB, {mn, mx}});
            demand[s] = g.coin(0.2) ? 0.0 : g.real(0.01, 300.0);
            rate[s] = slice_rate_per_prb(g.real(1.0, 15.0));
        }
        CAPTURE(trial);
        const auto out = allocate_prb(cell, demand, rate);
        REQUIRE(out == allocate_prb(cell, demand, rate));
        int sum = 0;
        bool someone_wants_more = false;
        for (const auto& s : cell.slices) {
            const int prb = out.at(s.slice_id);
            const int lo = s.ratio.min_ratio_pct * cell.total_prb / 100;
            const int hi = s.ratio.max_ratio_pct * cell.total_prb / 100;
            sum += prb;
            if (demand[s.slice_id] > 0) {
                CHECK(prb >= lo);
                CHECK(prb <= hi);
                const long need = static_cast<long>(std::ceil(demand[s.slice_id] / rate[s.slice_id] - 1e-9));
                CHECK(prb <= std::max<long>(lo, need));
                if (prb < std::min<long>(hi, need)) someone_wants_more = true;
            } else {
                CHECK(prb == 0);
            }
        }
        CHECK(sum <= cell.total_prb);
        // No PRB is left idle while a slice still has room and demand.
        if (someone_wants_more) CHECK(sum == cell.total_prb);
    }
}

TEST_CASE("bundled scenario shape") {
    const auto sc = campus();
    REQUIRE(sc.cells.size() == 3);
    for (const auto& c : sc.cells) CHECK(c.slices.size() == 2);
    std::map<int, int> per_cell;
    std::map<std::string, int> per_kind;
    for (const auto& g : sc.ue_groups) {
        per_cell[g.cell_id] += g.count;
        per_kind[g.name.substr(0, g.name.find('-'))] += g.count;
    }
    CHECK(per_cell[1] == 43);
    CHECK(per_cell[2] == 31);
    CHECK(per_cell[3] == 46);
    CHECK(per_kind["pedestrian"] == 10);
    CHECK(per_kind["person"] == 30);
    CHECK(per_kind["iot"] == 80);
    for (const auto& g : sc.ue_groups) {
        if (g.name.starts_with("pedestrian")) {
            CHECK(g.mobility == Mobility::RandomWalk);
            CHECK(g.qos_id == 1);
            CHECK(g.gbr);
            CHECK(g.per_ue_target_mbps == 0.5);
        } else if (g.name.starts_with("person")) {
            CHECK(g.mobility == Mobility::Fixed);
            CHECK(g.qos_id == 8);
            CHECK(g.per_ue_target_mbps == 40);
        } else {
            CHECK(g.qos_id == 9);
            CHECK(g.per_ue_target_mbps == 0.25);
            CHECK(sc.find_cell(g.cell_id)->find_slice(g.slice_id)->service == Service::mMTC);
        }
    }
}

TEST_CASE("calibration: cell 1 starts near 22 and 12 Mbps") {
    Simulator sim(campus(), 7);
    const auto first = sim.tick();
    double s1 = 0, s2 = 0;
    for (const auto& r : first) {
        if (r.cell_id == 1 && r.slice_id == 1) s1 = r.dl_throughput_mbps;
        if (r.cell_id == 1 && r.slice_id == 2) s2 = r.dl_throughput_mbps;
    }
    CHECK(s1 == doctest::Approx(22).epsilon(0.10));
    CHECK(s2 == doctest::Approx(12).epsilon(0.10));

    double m1 = 0, m2 = 0;
    for (int t = 0; t < 60; ++t) {
        for (const auto& r : sim.tick()) {
            if (r.cell_id != 1) continue;
            (r.slice_id == 1 ? m1 : m2) += r.dl_throughput_mbps / 60;
        }
    }
    CHECK(m1 == doctest::Approx(22).epsilon(0.10));
    CHECK(m2 == doctest::Approx(12).epsilon(0.10));
}

TEST_CASE("property: throughput law, conservation and ratio respect every tick") {
    Simulator sim(campus(), 99);
    for (int t = 0; t < 300; ++t) {
        if (t == 100) sim.apply_ratio_control(1, 1, {5, 15});
        if (t == 200) sim.apply_ratio_control(2, 2, {30, 35});
        const auto reports = sim.tick();
        REQUIRE(reports.size() == 6);
        std::map<int, int> used;
        for (const auto& r : reports) {
            CHECK(r.tick == t);
            used[r.cell_id] += r.prb_used;
            const double rate = r.avg_cqi >= 1 ? slice_rate_per_prb(r.avg_cqi) : 0.0;
            CHECK(std::abs(r.dl_throughput_mbps - std::min(r.demand_mbps, r.prb_used * rate)) <= 1e-9);
            CHECK(r.dl_throughput_mbps >= 0);
            const auto ratio = sim.ratio(r.cell_id, r.slice_id);
            const int total = sim.total_prb(r.cell_id);
            if (r.demand_mbps > 0) {
                CHECK(r.prb_used >= ratio_floor_prb(ratio.min_ratio_pct, total));
                CHECK(r.prb_used <= ratio_floor_prb(ratio.max_ratio_pct, total));
            }
        }
        for (const auto& [cell, n] : used) CHECK(n <= sim.total_prb(cell));
    }
}

TEST_CASE("determinism: same seed, same stream") {
    Simulator a(campus(), 5), b(campus(), 5), c(campus(), 6);
    bool differs = false;
    for (int t = 0; t < 200; ++t) {
        const auto ra = a.tick();
        REQUIRE(ra == b.tick());
        differs |= ra != c.tick();
    }
    CHECK(differs);
}

TEST_CASE("re-applying the current ratio changes nothing") {
    Simulator a(campus(), 3), b(campus(), 3);
    for (int t = 0; t < 50; ++t) {
        b.apply_ratio_control(1, 1, b.ratio(1, 1));
        REQUIRE(a.tick() == b.tick());
    }
}

TEST_CASE("ratio control caps the next tick and persists") {
    Simulator sim(campus(), 1);
    sim.tick();
    sim.apply_ratio_control(1, 1, {5, 40});
    for (int t = 0; t < 20; ++t) {
        for (const auto& r : sim.tick()) {
            if (r.cell_id == 1 && r.slice_id == 1) CHECK(r.prb_used <= 40);
        }
    }
    CHECK(sim.ratio(1, 1) == RrmPolicyRatio{5, 40});
}

TEST_CASE("invalid ratios are rejected with state unchanged") {
    Simulator sim(campus(), 1);
    sim.apply_ratio_control(1, 2, {50, 70});
    CHECK_THROWS_AS(sim.apply_ratio_control(1, 1, {60, 80}), InvariantViolation);
    CHECK(sim.ratio(1, 1) == RrmPolicyRatio{0, 40});
    CHECK_THROWS_AS(sim.apply_ratio_control(1, 1, {30, 20}), InvariantViolation);
    CHECK_THROWS_AS(sim.apply_ratio_control(1, 1, {0, 101}), InvariantViolation);
    CHECK_THROWS_AS(sim.apply_ratio_control(9, 1, {0, 10}), std::out_of_range);
    CHECK_THROWS_AS(sim.apply_ratio_control(1, 9, {0, 10}), std::out_of_range);
}

TEST_CASE("capacity-limited slice carries exactly prb x rate") {
    Simulator sim(one_cell(100.0, 10, {0, 20}), 1);
    const auto r = sim.tick().at(0);
    CHECK(r.prb_used == 20);
    CHECK(r.dl_throughput_mbps == doctest::Approx(20 * 0.18 * kOracleEff[9]).epsilon(1e-12));
    CHECK(r.dl_throughput_mbps < r.demand_mbps);
}

TEST_CASE("no UEs, no throughput") {
    auto sc = campus();
    sc.ue_groups.clear();
    Simulator sim(sc, 1);
    for (const auto& r : sim.tick()) {
        CHECK(r.dl_throughput_mbps == 0);
        CHECK(r.prb_used == 0);
    }
}

TEST_CASE("scenario parse errors") {
    CHECK_THROWS_AS(parse_scenario_text(R"({"cells": []})"), ScenarioParseError);
    CHECK_THROWS_AS(parse_scenario_text(R"({"name": "x"})"), ScenarioParseError);
    try {
        parse_scenario_text("{\n\"cells\": [\n  {\"cell_id\": 1,,}\n]}");
        FAIL("expected a syntax error");
    } catch (const ScenarioParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    try {
        parse_scenario_text(R"({"cells": [{"cell_id": 1, "total_prb": "many"}]})");
        FAIL("expected a schema error");
    } catch (const ScenarioParseError& e) {
        CHECK(std::string(e.what()).find("/cells/0/total_prb") != std::string::npos);
    }
    // Group pointing at a slice that does not exist.
    auto doc = scenario_to_json(campus());
    doc["ue_groups"][0]["slice_id"] = 7;
    CHECK_THROWS(Simulator(parse_scenario(doc), 1));
    CHECK(scenario_to_json(parse_scenario(scenario_to_json(campus()))) == scenario_to_json(campus()));
}

TEST_CASE("kpm json round trip") {
    KpmReport r{12, 1, 2, 11.75, 27, 6.0, 12.3};
    CHECK(kpm_from_json(kpm_to_json(r)) == r);
}

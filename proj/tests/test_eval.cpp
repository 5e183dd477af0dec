#include <doctest.h>

#include <chrono>
#include <cmath>

#include "caif/contract/catalog.hpp"
#include "caif/eval/dataset.hpp"
#include "caif/eval/harness.hpp"
#include "caif/eval/report.hpp"
#include "caif/eval/stats.hpp"
#include "caif/pipeline/phrase_parser.hpp"
#include "support.hpp"

using namespace caif;
using namespace caif::eval;
using pipeline::Field;

namespace {

constexpr double kZ95 = 1.959963984540054;

// Wilson score bounds, in percent, written out from the textbook formula.
std::pair<double, double> oracle_wilson(double s, double n) {
    const double p = s / n;
    const double z2 = kZ95 * kZ95;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = kZ95 * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {100 * std::max(0.0, centre - half), 100 * std::min(1.0, centre + half)};
}

double round1(double x) { return std::round(x * 10) / 10; }

const pipeline::PromptLibrary& prompts() {
    static const auto lib = pipeline::PromptLibrary::load(caif::test::asset("prompts"));
    return lib;
}

const contract::Catalog& catalog() {
    static const auto c = contract::load_catalog(caif::test::asset("catalog.json"));
    return c;
}

RunRecord synthetic(int i, bool ok, int shots) {
    RunRecord r;
    r.instance_id = "inst-" + std::to_string(i);
    r.mode = Mode::Caif;
    r.shots = shots;
    r.produced = pipeline::StructuredIntent{};
    for (Field f : pipeline::kAllFields) r.per_field_match[f] = ok || f != Field::SliceId;
    r.latency_s = 0.01 * (i % 7);
    r.forwarded = ok;
    r.blocked = !ok;
    return r;
}

}  // namespace

TEST_CASE("wilson intervals reported in the evaluation") {
    const auto a = wilson_ci(484, 500);
    CHECK(round1(a.point_pct) == doctest::Approx(96.8));
    CHECK(round1(a.lo_pct) == doctest::Approx(94.9));
    CHECK(round1(a.hi_pct) == doctest::Approx(98.0));
    const auto b = wilson_ci(499, 500);
    CHECK(round1(b.point_pct) == doctest::Approx(99.8));
    CHECK(round1(b.lo_pct) == doctest::Approx(98.9));
    CHECK(round1(b.hi_pct) == doctest::Approx(100.0));
    const auto c = wilson_ci(500, 500);
    CHECK(c.point_pct == 100);
    CHECK(round1(c.lo_pct) == doctest::Approx(99.2));
    CHECK(c.hi_pct == doctest::Approx(100.0));
    CHECK(z_for_confidence(0.95) == doctest::Approx(kZ95).epsilon(1e-12));
}

TEST_CASE("wilson matches the closed form and rejects bad counts") {
    for (long n = 1; n <= 60; ++n) {
        for (long s = 0; s <= n; ++s) {
            const auto ci = wilson_ci(s, n);
            const auto [lo, hi] = oracle_wilson(double(s), double(n));
            CHECK(ci.lo_pct == doctest::Approx(lo).epsilon(1e-9));
            CHECK(ci.hi_pct == doctest::Approx(hi).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(wilson_ci(1, 0), InvalidCounts);
    CHECK_THROWS_AS(wilson_ci(5, 4), InvalidCounts);
    CHECK_THROWS_AS(wilson_ci(-1, 4), InvalidCounts);
}

TEST_CASE("property: wilson bounds bracket the point and stay in range") {
    caif::test::Gen g(1);
    for (int i = 0; i < 20000; ++i) {
        const long n = g.range(1, 100000);
        const long s = g.range(0, static_cast<int>(n));
        const auto ci = wilson_ci(s, n, g.pick(std::array<double, 3>{0.9, 0.95, 0.99}));
        CHECK(0.0 <= ci.lo_pct);
        CHECK(ci.lo_pct <= ci.point_pct);
        CHECK(ci.point_pct <= ci.hi_pct);
        CHECK(ci.hi_pct <= 100.0);
        if (s == 0) CHECK(ci.lo_pct == 0.0);
    }
}

TEST_CASE("mean interval") {
    std::vector<double> one{2.0};
    auto m = mean_ci(one);
    CHECK(m.mean == 2.0);
    CHECK(m.lo == 2.0);
    CHECK(m.hi == 2.0);
    std::vector<double> xs{1, 2, 3, 4, 5};
    auto r = mean_ci(xs);
    CHECK(r.mean == doctest::Approx(3));
    const double sd = std::sqrt(2.5);
    CHECK(r.hi - r.mean == doctest::Approx(kZ95 * sd / std::sqrt(5.0)));
}

TEST_CASE("dataset shape, determinism and evidence") {
    const auto data = generate_dataset(0);
    REQUIRE(data.size() == 500);
    std::map<int, int> per_shot;
    for (const auto& inst : data) {
        ++per_shot[inst.shots];
        CHECK(inst.shots == static_cast<int>(inst.turns.size()));
        CHECK(inst.ground_truth.complete());
        // Oracle: the conversation on its own must evidence every ground-truth field.
        const auto re = pipeline::extract_conversation(to_conversation(inst));
        CHECK(pipeline::differing_fields(re, inst.ground_truth).empty());
        for (const auto& [f, turn] : inst.ground_truth.provenance) {
            CHECK(turn >= 0);
            CHECK(turn < inst.shots);
        }
        // Each turn carries at least one field.
        for (int t = 0; t < inst.shots; ++t) {
            const auto piece = pipeline::extract_utterance(inst.turns[t], t);
            bool any = false;
            for (Field f : pipeline::kAllFields) any |= piece.is_set(f);
            CHECK(any);
        }
    }
    for (int k = 1; k <= 5; ++k) CHECK(per_shot[k] > 0);
    CHECK(dataset_to_ndjson(data) == dataset_to_ndjson(generate_dataset(0)));
    CHECK(dataset_to_ndjson(data) != dataset_to_ndjson(generate_dataset(1)));

    const auto dir = caif::test::temp_dir("dataset");
    save_dataset(dir / "d.ndjson", data);
    CHECK(load_dataset(dir / "d.ndjson") == data);
    std::filesystem::remove_all(dir);
    CHECK_THROWS(dataset_from_ndjson("{\"id\": 1}\n"));
}

TEST_CASE("clean instances succeed in both modes") {
    Harness h(prompts(), catalog());
    const auto data = generate_dataset(3, {40});
    for (const auto& inst : data) {
        const auto b = h.run(Mode::Baseline, inst);
        CHECK(b.success());
        CHECK_FALSE(b.harmful);
        const auto c = h.run(Mode::Caif, inst);
        CHECK(c.success());
        CHECK(c.forwarded);
        CHECK(c.rounds_used == 0);
        CHECK(c.per_field_match.size() == pipeline::kAllFields.size());
    }
}

TEST_CASE("baseline forwards what CAIF corrects or blocks") {
    Harness h(prompts(), catalog());
    const auto inst = generate_dataset(5, {1}).front();

    const auto perturb = pipeline::FaultPlan::single(pipeline::FaultKind::PerturbOnce, Field::SliceId, 0);
    const auto b = h.run(Mode::Baseline, inst, perturb);
    CHECK(b.forwarded);
    CHECK(b.harmful);
    CHECK(b.failure.empty());  // schema-valid, just wrong
    CHECK_FALSE(b.per_field_match.at(Field::SliceId));
    const auto c = h.run(Mode::Caif, inst, perturb);
    CHECK(c.success());
    CHECK(c.rounds_used >= 1);
    CHECK_FALSE(c.harmful);

    const auto corrupt = pipeline::FaultPlan::single(pipeline::FaultKind::CorruptPersistent, Field::MagnitudePct, 0);
    const auto bm = h.run(Mode::Baseline, inst, corrupt);
    CHECK(bm.forwarded);
    CHECK(bm.harmful);
    CHECK_FALSE(bm.failure.empty());
    const auto cm = h.run(Mode::Caif, inst, corrupt);
    CHECK(cm.blocked);
    CHECK_FALSE(cm.forwarded);
    CHECK_FALSE(cm.harmful);
}

TEST_CASE("guardrail differential over the full fault matrix") {
    Harness h(prompts(), catalog());
    const auto data = generate_dataset(0);
    CHECK(fault_matrix(data.size()).size() == 3 * 6 * 10);
    const auto base = run_fault_matrix(h, Mode::Baseline, data);
    const auto caif = run_fault_matrix(h, Mode::Caif, data);
    long base_harm = 0, caif_harm = 0;
    for (const auto& r : base) base_harm += r.harmful;
    for (std::size_t i = 0; i < caif.size(); ++i) {
        const auto& r = caif[i];
        caif_harm += r.harmful;
        if (r.forwarded) {
            // Independent check, not the harness's own flag.
            REQUIRE(r.produced);
            const auto& truth = data[fault_matrix(data.size())[i].instance_index].ground_truth;
            CHECK(pipeline::differing_fields(*r.produced, truth).empty());
        }
    }
    CHECK(base_harm > 0);
    CHECK(caif_harm == 0);
    const auto rep = make_report(caif);
    CHECK(rep.harmful == 0);
    CHECK(rep.forwarded + rep.blocked == static_cast<long>(caif.size()));
}

TEST_CASE("report aggregates and is order independent") {
    std::vector<RunRecord> recs;
    for (int i = 0; i < 500; ++i) recs.push_back(synthetic(i, i >= 16, 1 + i % 5));
    const auto rep = make_report(recs);
    const auto ci = wilson_ci(484, 500);
    CHECK(rep.overall.successes == 484);
    CHECK(rep.overall.lo_pct == ci.lo_pct);
    CHECK(rep.overall.hi_pct == ci.hi_pct);
    CHECK(rep.fields.at(Field::SliceId).successes == 484);
    CHECK(rep.fields.at(Field::CellId).successes == 500);
    REQUIRE(rep.per_shot.size() == 5);
    CHECK(rep.per_shot[0].accuracy.trials == 100);

    caif::test::Gen g(6);
    const auto reference = report_to_json(rep).dump();
    for (int k = 0; k < 10; ++k) {
        std::shuffle(recs.begin(), recs.end(), g.engine());
        CHECK(report_to_json(make_report(recs)).dump() == reference);
    }
    const auto csv = per_shot_csv(rep);
    CHECK(csv.rfind("shots,n,accuracy_pct,lo_pct,hi_pct,mean_latency_s,latency_lo_s,latency_hi_s\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK_FALSE(report_table(rep).empty());

    std::vector<RunRecord> all_ok;
    for (int i = 0; i < 50; ++i) all_ok.push_back(synthetic(i, true, 1 + i % 5));
    const auto full = make_report(all_ok);
    CHECK(full.overall.point_pct == 100);
    for (const auto& [f, c] : full.fields) CHECK(c.point_pct == 100);
    for (const auto& s : full.per_shot) CHECK(s.accuracy.point_pct == 100);
    CHECK_THROWS_AS(make_report({}), std::invalid_argument);
}

TEST_CASE("fault rate sweep is reproducible and CAIF never forwards harm") {
    Harness h(prompts(), catalog());
    const auto data = generate_dataset(2, {100});
    const auto a = run_with_fault_rate(h, Mode::Caif, data, 0.5, 9);
    const auto b = run_with_fault_rate(h, Mode::Caif, data, 0.5, 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].fault == b[i].fault);
        CHECK(a[i].success() == b[i].success());
        CHECK_FALSE(a[i].harmful);
    }
    CHECK_THROWS(run_with_fault_rate(h, Mode::Caif, data, 1.5, 9));
}

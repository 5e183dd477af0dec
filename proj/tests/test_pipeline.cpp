#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "caif/contract/catalog.hpp"
#include "caif/contract/registry.hpp"
#include "caif/pipeline/mock_backend.hpp"
#include "caif/pipeline/phrase_parser.hpp"
#include "caif/pipeline/pipeline.hpp"
#include "caif/pipeline/remote_backend.hpp"
#include "support.hpp"

using namespace caif;
using namespace caif::pipeline;
using nlohmann::json;

namespace {

Conversation convo(std::initializer_list<const char*> turns, std::string session = "s") {
    Conversation c;
    c.session_id = std::move(session);
    Timestamp t{std::chrono::milliseconds{1'000'000}};
    for (const char* text : turns) {
        c.add_operator(text, t);
        t += std::chrono::milliseconds{1000};
    }
    return c;
}

const PromptLibrary& prompts() {
    static const PromptLibrary lib = PromptLibrary::load(caif::test::asset("prompts"));
    return lib;
}

const contract::Catalog& catalog() {
    static const contract::Catalog c = contract::load_catalog(caif::test::asset("catalog.json"));
    return c;
}

StructuredIntent full(int cell, int slice, Action a, double pct, int deadline) {
    StructuredIntent i;
    i.cell_id = cell;
    i.slice_id = slice;
    i.metric = Metric::DownlinkThroughput;
    i.action = a;
    i.magnitude_pct = pct;
    i.deadline_s = deadline;
    return i;
}

bool same_values(const StructuredIntent& a, const StructuredIntent& b) { return differing_fields(a, b).empty(); }

// Conversations covering the fault matrix; one per field arrangement.
std::vector<Conversation> matrix_conversations() {
    return {
        convo({"decrease downlink throughput by 20% in 5 minutes", "for slice 1 of cell 1"}, "m1"),
        convo({"In slice ID 2 of cell 1, decrease downlink throughput by 50% in 5 minutes"}, "m2"),
        convo({"cell 3", "slice 2", "raise the DL throughput", "by 15%", "in 30 seconds"}, "m3"),
    };
}

// Refinement agent that rewrites every field with junk, to test locality.
class ScramblingBackend : public LanguageModelBackend {
public:
    std::string complete(const BackendRequest&) override {
        return json{{"cell_id", 9}, {"slice_id", 9}, {"metric", "UplinkThroughput"}, {"action", "Increase"},
                    {"magnitude_pct", 99}, {"deadline_s", 9}}
            .dump();
    }
};

}  // namespace

TEST_CASE("phrase parser on the two operator utterances") {
    auto a = extract_conversation(convo({"decrease downlink throughput by 20% in 5 minutes", "for slice 1 of cell 1"}));
    CHECK(same_values(a, full(1, 1, Action::Decrease, 20, 300)));
    CHECK(a.provenance.at(Field::Action) == 0);
    CHECK(a.provenance.at(Field::CellId) == 1);

    auto b = extract_conversation(convo({"In slice ID 2 of cell 1, decrease downlink throughput by 50% in 5 minutes"}));
    CHECK(same_values(b, full(1, 2, Action::Decrease, 50, 300)));

    auto none = extract_conversation(convo({"hello"}));
    for (Field f : kAllFields) CHECK_FALSE(none.is_set(f));
}

TEST_CASE("phrase parser vocabulary") {
    auto i = extract_utterance("boost UL throughput for cell ID 4 slice 2 by 30 percent in 1 hour", 2);
    CHECK(i.cell_id == 4);
    CHECK(i.slice_id == 2);
    CHECK(i.metric == Metric::UplinkThroughput);
    CHECK(i.action == Action::Increase);
    CHECK(i.magnitude_pct == 30);
    CHECK(i.deadline_s == 3600);
    CHECK(i.provenance.at(Field::SliceId) == 2);

    auto later = extract_conversation(convo({"cell 1 slice 1", "actually slice 2"}));
    CHECK(later.slice_id == 2);
    CHECK(later.cell_id == 1);
    CHECK(later.provenance.at(Field::SliceId) == 1);
}

TEST_CASE("system turns are not evidence") {
    Conversation c = convo({"decrease downlink throughput by 20% in 5 minutes"});
    c.add_system("for slice 1 of cell 1", c.turns.back().at);
    auto i = extract_conversation(c);
    CHECK_FALSE(i.cell_id.has_value());
}

TEST_CASE("mock backend is deterministic and an empty plan is identity") {
    const auto c = convo({"decrease downlink throughput by 20% in 5 minutes", "for slice 1 of cell 1"});
    BackendRequest req;
    req.kind = PromptKind::Profiling;
    req.conversation = &c;
    MockBackend a, b(FaultPlan::none());
    CHECK(a.complete(req) == b.complete(req));
    MockBackend f1(FaultPlan::single(FaultKind::PerturbOnce, Field::SliceId, 4));
    MockBackend f2(FaultPlan::single(FaultKind::PerturbOnce, Field::SliceId, 4));
    CHECK(f1.complete(req) == f2.complete(req));
    CHECK(f1.complete(req) == a.complete(req));  // perturbation fires once per session
    CHECK(f1.calls("s") == 2);
}

TEST_CASE("mock extracts 50% and 5 minutes") {
    const auto c = convo({"decrease downlink throughput by 50% in 5 minutes"});
    MockBackend m;
    BackendRequest req;
    req.conversation = &c;
    auto parsed = parse_intent_text(m.complete(req));
    CHECK(parsed.intent.magnitude_pct == 50);
    CHECK(parsed.intent.deadline_s == 300);
}

TEST_CASE("pipeline produces the single-intent contract") {
    MockBackend prof, eval;
    contract::Registry reg;
    IntentPipeline p(prof, eval, prompts(), catalog(), &reg);
    auto r = p.run(convo({"decrease downlink throughput by 20% in 5 minutes", "for slice 1 of cell 1"}));
    REQUIRE(r.has_contract());
    const auto& c = std::get<ContractReady>(r.outcome).contract;
    CHECK(c.target == "Cell_1_Slice_1");
    CHECK(c.target_value_pct == 20);
    CHECK(c.expectation == contract::Expectation::ThroughputReduction);
    CHECK(c.policy_mechanism == contract::PolicyMechanism::TwoLevelRrmPolicyRatio);
    CHECK(c.specification_id == "slaSliceSpec");
    CHECK(c.relationship.related_id == "policy-baseline");
    CHECK(contract::find_characteristic(c, contract::kDeadlineSeconds)->value == "300");
    CHECK(r.rounds_used == 0);
    CHECK(reg.get(c.id).lifecycle.state == contract::State::Validated);
}

TEST_CASE("slice flip is flagged on exactly that field and repaired") {
    const auto c = convo({"decrease downlink throughput by 20% in 5 minutes", "for slice 1 of cell 1"});
    MockBackend prof(FaultPlan::single(FaultKind::PerturbOnce, Field::SliceId, 1)), eval;
    IntentPipeline p(prof, eval, prompts(), catalog());
    auto first = p.profile(c);
    CHECK(first.intent.slice_id == 3);
    auto report = p.evaluate(first.intent, c);
    CHECK(report.verdict == Verdict::Fail);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].field == Field::SliceId);
    CHECK(report.missing_fields.empty());

    auto fixed = p.refine(first.intent, report, c);
    CHECK(fixed.intent.slice_id == 1);
    CHECK(differing_fields(first.intent, fixed.intent) == std::set<Field>{Field::SliceId});
}

TEST_CASE("missing deadline asks for clarification") {
    MockBackend prof, eval;
    IntentPipeline p(prof, eval, prompts(), catalog());
    const auto c = convo({"decrease downlink throughput by 20% for slice 1 of cell 1"});
    auto report = p.evaluate(p.profile(c).intent, c);
    CHECK(report.missing_fields == std::vector<Field>{Field::DeadlineS});

    auto r = p.run(c);
    REQUIRE(std::holds_alternative<NeedsClarification>(r.outcome));
    const auto& nc = std::get<NeedsClarification>(r.outcome);
    CHECK(nc.missing == std::vector<Field>{Field::DeadlineS});
    CHECK(nc.question.find("time window") != std::string::npos);
}

TEST_CASE("refine needs a failing report") {
    MockBackend prof, eval;
    IntentPipeline p(prof, eval, prompts(), catalog());
    const auto c = convo({"hello"});
    EvaluationReport pass;
    pass.seal();
    CHECK_THROWS_AS(p.refine(StructuredIntent{}, pass, c), std::logic_error);
}

TEST_CASE("persistent corruption ends in Rejected after the round budget") {
    for (Field f : kAllFields) {
        MockBackend prof(FaultPlan::single(FaultKind::CorruptPersistent, f, 0)), eval;
        IntentPipeline p(prof, eval, prompts(), catalog());
        auto r = p.run(convo({"decrease downlink throughput by 20% in 5 minutes", "for slice 1 of cell 1"}), 3);
        CAPTURE(field_name(f));
        REQUIRE(std::holds_alternative<Rejected>(r.outcome));
        CHECK(r.rounds_used == 3);
        CHECK(r.profile_calls == 4);
    }
}

TEST_CASE("garbled output is re-asked once") {
    const auto c = convo({"decrease downlink throughput by 20% in 5 minutes", "for slice 1 of cell 1"});
    MockBackend once(FaultPlan{{{FaultKind::GarbleOnce, Field::CellId, 0}}}), eval;
    IntentPipeline p(once, eval, prompts(), catalog());
    CHECK(p.run(c).has_contract());

    MockBackend always(FaultPlan{{{FaultKind::GarblePersistent, Field::CellId, 0}}});
    IntentPipeline q(always, eval, prompts(), catalog());
    CHECK_THROWS_AS(q.profile(c), SchemaParseFailure);
    CHECK(std::holds_alternative<Rejected>(q.run(c).outcome));
}

TEST_CASE("uplink and out-of-catalog requests never become contracts") {
    MockBackend prof, eval;
    IntentPipeline p(prof, eval, prompts(), catalog());
    auto up = p.run(convo({"increase uplink throughput by 10% in 5 minutes for slice 1 of cell 1"}));
    CHECK_FALSE(up.has_contract());
    auto slice9 = p.run(convo({"increase downlink throughput by 10% in 5 minutes for slice 9 of cell 1"}));
    CHECK_FALSE(slice9.has_contract());
}

TEST_CASE("property: refinement locality and guardrail soundness over the fault matrix") {
    std::size_t runs = 0;
    std::size_t refines = 0;
    for (const auto& c : matrix_conversations()) {
        for (FaultKind kind : kMatrixFaultKinds) {
            for (Field f : kAllFields) {
                for (std::uint64_t seed = 0; seed < 10; ++seed) {
                    ++runs;
                    MockBackend prof(FaultPlan::single(kind, f, seed)), eval;
                    IntentPipeline p(prof, eval, prompts(), catalog());
                    auto r = p.run(c);
                    CHECK(r.profile_calls <= 1 + kDefaultMaxRounds);

                    // Walk the trace: every refine may only touch the fields the preceding evaluation flagged.
                    std::optional<StructuredIntent> last;
                    std::optional<EvaluationReport> last_report;
                    for (const auto& step : r.trace.steps) {
                        if (step.kind == "profile") {
                            last = parse_intent_json(step.payload.at("intent")).intent;
                        } else if (step.kind == "evaluate") {
                            last_report = parse_report_text(step.payload.at("report").dump());
                        } else if (step.kind == "refine") {
                            ++refines;
                            REQUIRE(last);
                            REQUIRE(last_report);
                            auto next = parse_intent_json(step.payload.at("intent")).intent;
                            const auto diff = differing_fields(*last, next);
                            const auto flagged = last_report->flagged();
                            for (Field d : diff) CHECK(flagged.contains(d));
                            last = next;
                        }
                    }
                    if (r.has_contract()) {
                        REQUIRE(last_report);
                        CHECK(last_report->verdict == Verdict::Pass);
                        CHECK(r.trace.steps.at(r.trace.steps.size() - 2).kind == "validate");
                        CHECK(r.trace.steps.at(r.trace.steps.size() - 2).payload.at("ok") == true);
                        CHECK(contract::validate_contract(std::get<ContractReady>(r.outcome).contract, catalog()).ok());
                        CHECK(same_values(std::get<ContractReady>(r.outcome).intent, extract_conversation(c)));
                    }
                }
            }
        }
    }
    CHECK(runs == 3 * 3 * 6 * 10);
    CHECK(refines > 0);
}

TEST_CASE("property: refine keeps unflagged fields even against a hostile agent") {
    ScramblingBackend hostile;
    MockBackend eval;
    IntentPipeline p(hostile, eval, prompts(), catalog());
    caif::test::Gen g(3);
    const auto c = convo({"hello"});
    for (int i = 0; i < 500; ++i) {
        auto intent = full(g.range(1, 5), g.range(1, 2), g.coin() ? Action::Increase : Action::Decrease,
                           g.range(1, 100), g.range(1, 1000));
        EvaluationReport report;
        for (Field f : kAllFields) {
            if (g.coin(0.3)) report.violations.push_back({f, std::nullopt, "x"});
        }
        if (report.violations.empty()) report.violations.push_back({Field::CellId, std::nullopt, "x"});
        report.seal();
        auto out = p.refine(intent, report, c);
        for (Field d : differing_fields(intent, out.intent)) CHECK(report.flagged().contains(d));
    }
}

TEST_CASE("pipeline traces are byte-identical across runs") {
    const auto c = convo({"cell 3", "slice 2", "raise the DL throughput", "by 15%", "in 30 seconds"});
    auto trace = [&] {
        MockBackend prof(FaultPlan::single(FaultKind::PerturbOnce, Field::MagnitudePct, 7)), eval;
        IntentPipeline p(prof, eval, prompts(), catalog());
        return p.run(c).trace.to_json().dump();
    };
    CHECK(trace() == trace());
}

TEST_CASE("prompt rendering") {
    const auto c = convo({"decrease downlink throughput by 20% in 5 minutes", "for slice 1 of cell 1"});
    PromptContext ctx{{"conversation", render_conversation(c)},
                      {"schema", intent_schema().dump()},
                      {"catalog", "[]"},
                      {"intent", "{}"},
                      {"report", "slice_id: extracted 3 but turn 1 states 1"}};
    const auto prof = prompts().render(PromptKind::Profiling, ctx);
    CHECK(prof.find("decrease downlink throughput by 20% in 5 minutes") != std::string::npos);
    CHECK(prof.find("for slice 1 of cell 1") != std::string::npos);
    CHECK(prof.find("telecommunications") != std::string::npos);
    const auto eval = prompts().render(PromptKind::Evaluation, ctx);
    CHECK(eval.find("[0]") != std::string::npos);
    CHECK(eval.find("[1]") != std::string::npos);
    const auto ref = prompts().render(PromptKind::Refinement, ctx);
    CHECK(ref.find("extracted 3 but turn 1 states 1") != std::string::npos);

    CHECK_THROWS_AS(render_template("{{missing}}", {}), MissingTemplateVariable);
    CHECK(render_template("a {{x}} b", {{"x", "1"}}) == "a 1 b");
}

TEST_CASE("backend config bounds") {
    BackendConfig c;
    c.temperature = 2.5;
    CHECK_THROWS_AS(c.check(), std::invalid_argument);
    c.temperature = 0.6;
    c.top_p = 0;
    CHECK_THROWS_AS(c.check(), std::invalid_argument);
    c.top_p = 1;
    c.backend = BackendKind::Remote;
    CHECK_THROWS_AS(c.check(), std::invalid_argument);
    c.endpoint = "http://127.0.0.1:9/v1/chat/completions";
    CHECK_NOTHROW(c.check());
    auto parsed = parse_backend_config(backend_config_to_json(c));
    CHECK(parsed.endpoint == c.endpoint);
    CHECK(parsed.backend == BackendKind::Remote);
}

TEST_CASE("intent json tolerates fences and reports bad fields") {
    auto p = parse_intent_text("```json\n{\"cell_id\": 1, \"slice_id\": \"two\", \"magnitude_pct\": 250}\n```");
    CHECK(p.intent.cell_id == 1);
    CHECK_FALSE(p.intent.slice_id.has_value());
    CHECK(p.issues.size() == 2);
    CHECK_THROWS_AS(parse_intent_text("not json"), SchemaParseFailure);
}

TEST_CASE("remote backend speaks chat completions") {
    httplib::Server stub;
    json seen;
    std::mutex mu;
    stub.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        {
            std::lock_guard lock(mu);
            seen = json::parse(req.body);
        }
        const auto content = intent_to_json(full(1, 1, Action::Decrease, 20, 300)).dump();
        res.set_content(json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump(),
                        "application/json");
    });
    stub.Post("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    const int port = stub.bind_to_any_port("127.0.0.1");
    std::thread t([&] { stub.listen_after_bind(); });
    stub.wait_until_ready();

    BackendConfig cfg;
    cfg.backend = BackendKind::Remote;
    cfg.model_name = "Qwen3-4B-Instruct-2507";
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    RemoteBackend remote(cfg);
    MockBackend eval;
    IntentPipeline p(remote, eval, prompts(), catalog());
    auto r = p.run(convo({"decrease downlink throughput by 20% in 5 minutes", "for slice 1 of cell 1"}));
    CHECK(r.has_contract());
    {
        std::lock_guard lock(mu);
        CHECK(seen.at("model") == "Qwen3-4B-Instruct-2507");
        CHECK(seen.at("temperature") == 0.6);
        CHECK(seen.at("top_p") == 0.95);
        CHECK(seen.at("messages").at(0).at("role") == "user");
    }

    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/broken";
    RemoteBackend broken(cfg);
    const auto c = convo({"hello"});
    BackendRequest req;
    req.conversation = &c;
    CHECK_THROWS_AS(broken.complete(req), BackendUnavailable);

    stub.stop();
    t.join();
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    RemoteBackend gone(cfg);
    CHECK_THROWS_AS(gone.complete(req), BackendUnavailable);
}

#include "caif/eval/harness.hpp"

#include <chrono>
#include <random>

#include "caif/pipeline/pipeline.hpp"

namespace caif::eval {

using pipeline::Field;
using pipeline::StructuredIntent;

std::string_view to_string(Mode m) { return m == Mode::Baseline ? "baseline" : "caif"; }

std::optional<Mode> mode_from_string(std::string_view s) {
    if (s == "baseline") return Mode::Baseline;
    if (s == "caif") return Mode::Caif;
    return std::nullopt;
}

bool RunRecord::success() const {
    if (!produced) return false;
    for (const auto& [f, ok] : per_field_match) {
        if (!ok) return false;
    }
    return true;
}

nlohmann::json record_to_json(const RunRecord& r) {
    nlohmann::json match = nlohmann::json::object();
    for (const auto& [f, ok] : r.per_field_match) match[std::string(pipeline::field_name(f))] = ok;
    return {{"instance_id", r.instance_id},
            {"mode", to_string(r.mode)},
            {"shots", r.shots},
            {"produced", r.produced ? pipeline::intent_to_json(*r.produced) : nlohmann::json(nullptr)},
            {"failure", r.failure},
            {"per_field_match", match},
            {"latency_s", r.latency_s},
            {"rounds_used", r.rounds_used},
            {"forwarded", r.forwarded},
            {"harmful", r.harmful},
            {"blocked", r.blocked},
            {"fault", r.fault}};
}

std::map<Field, bool> match_fields(const std::optional<StructuredIntent>& produced, const StructuredIntent& truth) {
    std::map<Field, bool> out;
    for (Field f : pipeline::kAllFields) {
        out[f] = produced && produced->is_set(f) && produced->same_value(f, truth);
    }
    return out;
}

Harness::Harness(const pipeline::PromptLibrary& prompts, const contract::Catalog& catalog)
    : prompts_(prompts), catalog_(catalog) {}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RunRecord Harness::run_baseline(const DatasetInstance& inst, pipeline::LanguageModelBackend& backend) const {
    RunRecord r;
    r.instance_id = inst.id;
    r.mode = Mode::Baseline;
    r.shots = inst.shots;
    const auto conv = to_conversation(inst);
    const auto start = std::chrono::steady_clock::now();

    pipeline::BackendRequest req;
    req.kind = pipeline::PromptKind::Profiling;
    req.prompt = prompts_.render(pipeline::PromptKind::Profiling,
                                 {{"conversation", pipeline::render_conversation(conv)},
                                  {"schema", pipeline::intent_schema().dump(2)},
                                  {"catalog", contract::catalog_to_json(catalog_).dump(2)}});
    req.conversation = &conv;
    try {
        auto parsed = pipeline::parse_intent_text(backend.complete(req));
        r.produced = parsed.intent;
        if (!parsed.issues.empty()) {
            r.failure = "malformed field " + std::string(pipeline::field_name(parsed.issues.front().field));
        } else if (!parsed.intent.complete()) {
            r.failure = "incomplete command";
        }
    } catch (const std::exception& e) {
        r.failure = std::string("malformed output: ") + e.what();
    }
    r.latency_s = seconds_since(start);
    r.per_field_match = match_fields(r.produced, inst.ground_truth);
    // The baseline has no gate: whatever came back goes to the network.
    r.forwarded = true;
    r.harmful = !r.failure.empty() || !r.success();
    return r;
}

RunRecord Harness::run_caif(const DatasetInstance& inst, pipeline::LanguageModelBackend& profiler,
                            pipeline::LanguageModelBackend& evaluator) const {
    RunRecord r;
    r.instance_id = inst.id;
    r.mode = Mode::Caif;
    r.shots = inst.shots;
    const auto conv = to_conversation(inst);
    const auto start = std::chrono::steady_clock::now();
    pipeline::IntentPipeline pipe(profiler, evaluator, prompts_, catalog_);
    try {
        auto res = pipe.run(conv);
        r.rounds_used = res.rounds_used;
        if (auto* ready = std::get_if<pipeline::ContractReady>(&res.outcome)) {
            r.produced = ready->intent;
            r.forwarded = true;
        } else if (auto* nc = std::get_if<pipeline::NeedsClarification>(&res.outcome)) {
            r.failure = "needs clarification: " + nc->question;
        } else {
            const auto& rej = std::get<pipeline::Rejected>(res.outcome);
            r.failure = "rejected" + (rej.reasons.empty() ? std::string() : ": " + rej.reasons.front());
        }
    } catch (const std::exception& e) {
        r.failure = std::string("error: ") + e.what();
    }
    r.latency_s = seconds_since(start);
    r.per_field_match = match_fields(r.produced, inst.ground_truth);
    r.blocked = !r.forwarded;
    r.harmful = r.forwarded && !r.success();
    return r;
}

RunRecord Harness::run(Mode mode, const DatasetInstance& inst, const pipeline::FaultPlan& plan) const {
    pipeline::MockBackend profiler(plan);
    if (mode == Mode::Baseline) return run_baseline(inst, profiler);
    pipeline::MockBackend evaluator;
    return run_caif(inst, profiler, evaluator);
}

std::vector<RunRecord> Harness::run_all(Mode mode, const std::vector<DatasetInstance>& data) const {
    std::vector<RunRecord> out;
    out.reserve(data.size());
    for (const auto& inst : data) out.push_back(run(mode, inst));
    return out;
}

std::vector<FaultCase> fault_matrix(std::size_t dataset_size, int seeds) {
    if (dataset_size == 0) throw std::invalid_argument("empty dataset");
    std::vector<FaultCase> out;
    for (auto kind : pipeline::kMatrixFaultKinds) {
        for (Field f : pipeline::kAllFields) {
            for (int s = 0; s < seeds; ++s) {
                out.push_back({kind, f, static_cast<std::uint64_t>(s), static_cast<std::size_t>(s) % dataset_size});
            }
        }
    }
    return out;
}

std::string describe(const FaultCase& c) {
    return std::string(pipeline::to_string(c.kind)) + ":" + std::string(pipeline::field_name(c.field)) + ":" +
           std::to_string(c.seed);
}

std::vector<RunRecord> run_fault_matrix(const Harness& h, Mode mode, const std::vector<DatasetInstance>& data,
                                        int seeds) {
    std::vector<RunRecord> out;
    for (const auto& c : fault_matrix(data.size(), seeds)) {
        auto r = h.run(mode, data[c.instance_index], pipeline::FaultPlan::single(c.kind, c.field, c.seed));
        r.fault = describe(c);
        r.instance_id += "#" + r.fault;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RunRecord> run_with_fault_rate(const Harness& h, Mode mode, const std::vector<DatasetInstance>& data,
                                           double rate, std::uint64_t seed) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("fault rate must be in [0, 1]");
    std::mt19937_64 rng(seed);
    std::vector<RunRecord> out;
    out.reserve(data.size());
    constexpr std::size_t nkinds = std::size(pipeline::kMatrixFaultKinds);
    for (const auto& inst : data) {
        // Draw every value up front so both modes see the same faults for the same seed.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const auto kind = pipeline::kMatrixFaultKinds[rng() % nkinds];
        const auto field = pipeline::kAllFields[rng() % pipeline::kAllFields.size()];
        const std::uint64_t fseed = rng();
        pipeline::FaultPlan plan;
        std::string label;
        if (u < rate) {
            plan = pipeline::FaultPlan::single(kind, field, fseed);
            label = describe({kind, field, fseed, 0});
        }
        auto r = h.run(mode, inst, plan);
        r.fault = label;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace caif::eval

#include "caif/pipeline/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace caif::pipeline {

using nlohmann::json;

namespace {

json issues_to_json(const std::vector<SchemaIssue>& issues) {
    json out = json::array();
    for (const auto& i : issues) out.push_back({{"field", std::string(field_name(i.field))}, {"reason", i.reason}});
    return out;
}

std::string hint(Field f) {
    switch (f) {
        case Field::CellId:       return "which cell (e.g. 'cell 1')";
        case Field::SliceId:      return "which slice (e.g. 'slice 1')";
        case Field::Metric:       return "the direction of the throughput (downlink or uplink)";
        case Field::Action:       return "whether to increase or decrease it";
        case Field::MagnitudePct: return "by how much (e.g. 'by 20%')";
        case Field::DeadlineS:    return "the time window (e.g. 'in 5 minutes')";
    }
    return std::string(field_name(f));
}

}  // namespace

json PipelineTrace::to_json() const {
    json out = json::array();
    for (const auto& s : steps) out.push_back({{"kind", s.kind}, {"payload", s.payload}});
    return out;
}

contract::IntentContract build_contract(const StructuredIntent& intent, std::string_view specification_id) {
    if (!intent.complete()) throw std::invalid_argument("build_contract: intent is incomplete");
    contract::IntentContract c;
    c.target = contract::format_target({*intent.cell_id, *intent.slice_id});
    c.expectation = *intent.action == Action::Increase ? contract::Expectation::ThroughputEnhancement
                                                       : contract::Expectation::ThroughputReduction;
    c.target_value_pct = *intent.magnitude_pct;
    c.policy_mechanism = contract::PolicyMechanism::TwoLevelRrmPolicyRatio;
    c.specification_id = std::string(specification_id);
    c.relationship = {std::string(contract::kPolicyBaseline), "derivesFrom"};
    c.characteristics = {
        {std::string(contract::kEligibleClusters), std::string(contract::kAffectedCells),
         contract::ValueType::String, c.target},
        {"deadline", std::string(contract::kDeadlineSeconds), contract::ValueType::Integer,
         std::to_string(*intent.deadline_s)},
        {"metric", std::string(contract::kMetricName), contract::ValueType::String,
         std::string(to_string(*intent.metric))},
    };
    return c;
}

std::string clarification_question(const std::vector<Field>& missing) {
    std::string q = "To complete the request, please tell me ";
    for (std::size_t i = 0; i < missing.size(); ++i) {
        if (i > 0) q += (i + 1 == missing.size()) ? " and " : ", ";
        q += hint(missing[i]);
    }
    return q + ".";
}

IntentPipeline::IntentPipeline(LanguageModelBackend& profiler, LanguageModelBackend& evaluator,
                               const PromptLibrary& prompts, const contract::Catalog& catalog,
                               contract::Registry* registry, std::string specification_id)
    : profiler_(profiler),
      evaluator_(evaluator),
      prompts_(prompts),
      catalog_(catalog),
      registry_(registry),
      specification_id_(std::move(specification_id)) {}

PromptContext IntentPipeline::base_context(const Conversation& conversation) const {
    return {{"conversation", render_conversation(conversation)},
            {"schema", intent_schema().dump(2)},
            {"catalog", contract::catalog_to_json(catalog_).dump(2)}};
}

std::string IntentPipeline::call_with_reask(LanguageModelBackend& backend, const BackendRequest& request,
                                            ProfileResult& out) const {
    std::string raw = backend.complete(request);
    try {
        auto parsed = parse_intent_text(raw);
        out = {std::move(parsed.intent), std::move(parsed.issues)};
        return raw;
    } catch (const SchemaParseFailure&) {
    }
    BackendRequest again = request;
    again.prompt += "\n\nYour previous answer was not a JSON object. Reply with the JSON object only.";
    raw = backend.complete(again);
    auto parsed = parse_intent_text(raw);
    out = {std::move(parsed.intent), std::move(parsed.issues)};
    return raw;
}

ProfileResult IntentPipeline::profile(const Conversation& conversation, PipelineTrace* trace) const {
    if (conversation.turns.empty()) throw std::invalid_argument("profile: empty conversation");
    BackendRequest req;
    req.kind = PromptKind::Profiling;
    req.prompt = prompts_.render(PromptKind::Profiling, base_context(conversation));
    req.conversation = &conversation;
    ProfileResult out;
    const std::string raw = call_with_reask(profiler_, req, out);
    if (trace) {
        trace->add("profile", {{"raw", raw}, {"intent", intent_to_json(out.intent)}, {"issues", issues_to_json(out.issues)}});
    }
    return out;
}

EvaluationReport IntentPipeline::evaluate(const StructuredIntent& intent, const Conversation& conversation,
                                          const std::vector<SchemaIssue>& issues, PipelineTrace* trace) const {
    PromptContext ctx = base_context(conversation);
    ctx["intent"] = intent_to_json(intent).dump(2);
    BackendRequest req;
    req.kind = PromptKind::Evaluation;
    req.prompt = prompts_.render(PromptKind::Evaluation, ctx);
    req.conversation = &conversation;
    req.intent = &intent;

    EvaluationReport backend_report;
    const std::string raw = evaluator_.complete(req);
    bool backend_ok = true;
    try {
        backend_report = parse_report_text(raw);
    } catch (const SchemaParseFailure&) {
        backend_ok = false;
    }

    EvaluationReport report;
    std::set<Field> flagged;
    auto add_violation = [&](FieldViolation v) {
        if (flagged.insert(v.field).second) report.violations.push_back(std::move(v));
    };

    for (const auto& issue : issues) add_violation({issue.field, std::nullopt, "malformed value: " + issue.reason});
    for (const auto& v : backend_report.violations) {
        if (intent.is_set(v.field)) add_violation(v);
    }
    if (!backend_ok) {
        // An evaluator that cannot produce a verdict never passes anything.
        for (Field f : kAllFields) {
            if (intent.is_set(f)) add_violation({f, std::nullopt, "evaluator output unreadable; field unverified"});
        }
    }

    if (intent.metric == Metric::UplinkThroughput) {
        add_violation({Field::Metric, intent.provenance.count(Field::Metric) ? std::optional(intent.provenance.at(Field::Metric)) : std::nullopt,
                       "unsupported request: only downlink throughput is governed"});
    }
    if (const auto* spec = catalog_.find(specification_id_)) {
        if (intent.cell_id && intent.slice_id) {
            const auto target = contract::format_target({*intent.cell_id, *intent.slice_id});
            if (!spec->allows_target(target)) {
                add_violation({Field::SliceId, std::nullopt, target + " is not allowed by " + spec->id});
            }
        }
        if (intent.magnitude_pct && !spec->allows_pct(*intent.magnitude_pct)) {
            add_violation({Field::MagnitudePct, std::nullopt, "outside " + spec->id + " bounds"});
        }
    }

    for (Field f : kAllFields) {
        if (!intent.is_set(f) && !flagged.contains(f)) report.missing_fields.push_back(f);
    }
    report.seal();
    if (trace) trace->add("evaluate", {{"raw", raw}, {"report", report_to_json(report)}});
    return report;
}

ProfileResult IntentPipeline::refine(const StructuredIntent& intent, const EvaluationReport& report,
                                     const Conversation& conversation, PipelineTrace* trace) const {
    if (report.verdict != Verdict::Fail) throw std::logic_error("refine requires a failing evaluation report");
    PromptContext ctx = base_context(conversation);
    ctx["intent"] = intent_to_json(intent).dump(2);
    ctx["report"] = report_to_json(report).dump(2);
    BackendRequest req;
    req.kind = PromptKind::Refinement;
    req.prompt = prompts_.render(PromptKind::Refinement, ctx);
    req.conversation = &conversation;
    req.intent = &intent;
    req.report = &report;

    ProfileResult candidate;
    const std::string raw = call_with_reask(profiler_, req, candidate);

    // Keep everything the report did not flag exactly as it was.
    const auto flagged = report.flagged();
    ProfileResult out{intent, {}};
    for (Field f : flagged) out.intent.copy_field(f, candidate.intent);
    for (const auto& issue : candidate.issues) {
        if (flagged.contains(issue.field)) out.issues.push_back(issue);
    }
    if (trace) {
        trace->add("refine", {{"raw", raw}, {"intent", intent_to_json(out.intent)}, {"issues", issues_to_json(out.issues)}});
    }
    return out;
}

PipelineResult IntentPipeline::run(const Conversation& conversation, int max_rounds) const {
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
    if (conversation.operator_turns() == 0) throw std::invalid_argument("conversation has no operator turn");

    PipelineResult result{Rejected{}, {}, 0, 0, {}};
    auto& trace = result.trace;
    auto finish = [&](PipelineOutcome outcome, const char* label) {
        trace.add("outcome", {{"kind", label}});
        result.outcome = std::move(outcome);
        return result;
    };

    ProfileResult current;
    try {
        current = profile(conversation, &trace);
    } catch (const SchemaParseFailure& e) {
        result.profile_calls = 1;
        return finish(Rejected{{e.what()}, std::nullopt, std::nullopt}, "rejected");
    }
    result.profile_calls = 1;

    EvaluationReport report;
    while (true) {
        result.last_intent = current.intent;
        report = evaluate(current.intent, conversation, current.issues, &trace);
        if (report.verdict == Verdict::Pass) break;
        if (result.rounds_used >= max_rounds) {
            std::vector<std::string> reasons;
            for (const auto& v : report.violations) reasons.push_back(std::string(field_name(v.field)) + ": " + v.reason);
            for (Field f : report.missing_fields) reasons.push_back(std::string(field_name(f)) + ": missing");
            return finish(Rejected{std::move(reasons), report, std::nullopt}, "rejected");
        }

        ProfileResult next;
        try {
            next = refine(current.intent, report, conversation, &trace);
        } catch (const SchemaParseFailure& e) {
            ++result.profile_calls;
            return finish(Rejected{{e.what()}, report, std::nullopt}, "rejected");
        }
        ++result.rounds_used;
        ++result.profile_calls;

        const bool recovered_any = std::any_of(report.missing_fields.begin(), report.missing_fields.end(),
                                               [&](Field f) { return next.intent.is_set(f); });
        if (report.violations.empty() && !recovered_any && next.issues.empty()) {
            result.last_intent = next.intent;
            return finish(NeedsClarification{clarification_question(report.missing_fields), report.missing_fields},
                          "needs_clarification");
        }
        current = std::move(next);
    }

    auto contract = build_contract(current.intent, specification_id_);
    // The registry hands out the real id; until then the session names it.
    contract.id = "intent-" + (conversation.session_id.empty() ? std::string("local") : conversation.session_id);
    const auto validation = contract::validate_contract(contract, catalog_);
    json violations = json::array();
    for (const auto& v : validation.violations) violations.push_back({{"field", v.field}, {"reason", v.reason}});
    trace.add("validate", {{"ok", validation.ok()}, {"violations", violations}});
    if (!validation.ok()) {
        std::vector<std::string> reasons;
        for (const auto& v : validation.violations) reasons.push_back(v.field + ": " + v.reason);
        return finish(Rejected{std::move(reasons), report, validation}, "rejected");
    }

    if (registry_) {
        contract.id.clear();
        const auto id = registry_->register_contract(contract);
        registry_->transition(id, contract::State::Validated, "passed evaluation and contract validation");
        contract = registry_->get(id);
    }
    return finish(ContractReady{std::move(contract), current.intent}, "contract");
}

}  // namespace caif::pipeline

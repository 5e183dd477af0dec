#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "caif/contract/catalog.hpp"
#include "caif/contract/registry.hpp"
#include "caif/contract/validate.hpp"
#include "caif/pipeline/backend.hpp"
#include "caif/pipeline/intent.hpp"
#include "caif/pipeline/prompts.hpp"

namespace caif::pipeline {

struct ProfileResult {
    StructuredIntent intent;
    std::vector<SchemaIssue> issues;
};

struct TraceStep {
    std::string kind;  // profile | evaluate | refine | validate | outcome
    nlohmann::json payload;
};

struct PipelineTrace {
    std::vector<TraceStep> steps;

    void add(std::string kind, nlohmann::json payload) { steps.push_back({std::move(kind), std::move(payload)}); }
    nlohmann::json to_json() const;
};

struct ContractReady {
    contract::IntentContract contract;
    StructuredIntent intent;
};

struct NeedsClarification {
    std::string question;
    std::vector<Field> missing;
};

struct Rejected {
    std::vector<std::string> reasons;
    std::optional<EvaluationReport> report;
    std::optional<contract::ValidationResult> validation;
};

using PipelineOutcome = std::variant<ContractReady, NeedsClarification, Rejected>;

struct PipelineResult {
    PipelineOutcome outcome;
    PipelineTrace trace;
    int rounds_used = 0;     // refinement rounds
    int profile_calls = 0;   // profile + refine invocations
    StructuredIntent last_intent;

    bool has_contract() const { return std::holds_alternative<ContractReady>(outcome); }
};

inline constexpr int kDefaultMaxRounds = 3;

// Builds the contract for a complete intent: scope from cell/slice, expectation
// from the action, percentage from the magnitude, the deadline and metric as
// flattened characteristics. Throws std::invalid_argument on an incomplete intent.
contract::IntentContract build_contract(const StructuredIntent& intent,
                                        std::string_view specification_id = contract::kSlaSliceSpec);

// Question put to the operator when `missing` cannot be found in the conversation.
std::string clarification_question(const std::vector<Field>& missing);

// Dual-agent translation: the profiling agent extracts, the evaluator audits,
// refinement repairs only flagged fields, and only a fully validated result
// becomes a contract.
class IntentPipeline {
public:
    IntentPipeline(LanguageModelBackend& profiler, LanguageModelBackend& evaluator, const PromptLibrary& prompts,
                   const contract::Catalog& catalog, contract::Registry* registry = nullptr,
                   std::string specification_id = std::string(contract::kSlaSliceSpec));

    // Throws SchemaParseFailure if the output is not a JSON object twice in a row.
    ProfileResult profile(const Conversation& conversation, PipelineTrace* trace = nullptr) const;

    // Backend cross-check merged with the deterministic checks: schema issues,
    // unset fields and catalog bounds.
    EvaluationReport evaluate(const StructuredIntent& intent, const Conversation& conversation,
                              const std::vector<SchemaIssue>& issues = {}, PipelineTrace* trace = nullptr) const;

    // Only fields flagged in `report` may change. Throws std::logic_error if
    // the report passed.
    ProfileResult refine(const StructuredIntent& intent, const EvaluationReport& report,
                         const Conversation& conversation, PipelineTrace* trace = nullptr) const;

    PipelineResult run(const Conversation& conversation, int max_rounds = kDefaultMaxRounds) const;

private:
    std::string call_with_reask(LanguageModelBackend& backend, const BackendRequest& request, ProfileResult& out) const;
    PromptContext base_context(const Conversation& conversation) const;

    LanguageModelBackend& profiler_;
    LanguageModelBackend& evaluator_;
    const PromptLibrary& prompts_;
    const contract::Catalog& catalog_;
    contract::Registry* registry_;
    std::string specification_id_;
};

}  // namespace caif::pipeline

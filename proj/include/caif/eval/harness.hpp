#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "caif/contract/catalog.hpp"
#include "caif/eval/dataset.hpp"
#include "caif/pipeline/mock_backend.hpp"
#include "caif/pipeline/prompts.hpp"

namespace caif::eval {

enum class Mode { Baseline, Caif };

std::string_view to_string(Mode m);
std::optional<Mode> mode_from_string(std::string_view s);

struct RunRecord {
    std::string instance_id;
    Mode mode = Mode::Baseline;
    int shots = 1;
    std::optional<pipeline::StructuredIntent> produced;
    std::string failure;  // empty when an intent was produced
    std::map<pipeline::Field, bool> per_field_match;
    double latency_s = 0.0;
    int rounds_used = 0;
    bool forwarded = false;  // output reached the network side
    bool harmful = false;    // forwarded and not equal to the ground truth
    bool blocked = false;    // stopped by the guardrail
    std::string fault;       // description of the injected fault, if any

    bool success() const;
};

nlohmann::json record_to_json(const RunRecord& r);

// Compares a produced intent with the ground truth, field by field.
std::map<pipeline::Field, bool> match_fields(const std::optional<pipeline::StructuredIntent>& produced,
                                             const pipeline::StructuredIntent& truth);

class Harness {
public:
    Harness(const pipeline::PromptLibrary& prompts, const contract::Catalog& catalog);

    // One profiling call, forwarded as-is.
    RunRecord run_baseline(const DatasetInstance& inst, pipeline::LanguageModelBackend& backend) const;
    // The full dual-agent pipeline; only a contract counts as forwarded.
    RunRecord run_caif(const DatasetInstance& inst, pipeline::LanguageModelBackend& profiler,
                       pipeline::LanguageModelBackend& evaluator) const;

    // Fresh mock agents per instance; faults go to the profiling agent.
    RunRecord run(Mode mode, const DatasetInstance& inst, const pipeline::FaultPlan& plan = {}) const;
    std::vector<RunRecord> run_all(Mode mode, const std::vector<DatasetInstance>& data) const;

private:
    const pipeline::PromptLibrary& prompts_;
    const contract::Catalog& catalog_;
};

struct FaultCase {
    pipeline::FaultKind kind;
    pipeline::Field field;
    std::uint64_t seed;
    std::size_t instance_index;
};

// kind x field x seed; seed s targets instance s mod data size.
std::vector<FaultCase> fault_matrix(std::size_t dataset_size, int seeds = 10);
std::string describe(const FaultCase& c);

std::vector<RunRecord> run_fault_matrix(const Harness& h, Mode mode, const std::vector<DatasetInstance>& data,
                                        int seeds = 10);

// Each instance independently draws a random matrix fault with probability `rate`.
std::vector<RunRecord> run_with_fault_rate(const Harness& h, Mode mode, const std::vector<DatasetInstance>& data,
                                           double rate, std::uint64_t seed);

}  // namespace caif::eval

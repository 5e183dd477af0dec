#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "caif/pipeline/backend.hpp"

namespace caif::pipeline {

enum class FaultKind {
    Drop,               // omit the field from the first profiling-agent output
    PerturbOnce,        // replace it with a different, schema-valid value once
    CorruptPersistent,  // emit a schema-invalid value on every call
    GarbleOnce,         // first output is not JSON at all
    GarblePersistent,   // no output is JSON
};

std::string_view to_string(FaultKind kind);

struct Fault {
    FaultKind kind = FaultKind::Drop;
    Field field = Field::CellId;
    std::uint64_t seed = 0;
};

struct FaultPlan {
    std::vector<Fault> faults;

    bool empty() const { return faults.empty(); }
    static FaultPlan none() { return {}; }
    static FaultPlan single(FaultKind kind, Field field, std::uint64_t seed = 0) { return {{{kind, field, seed}}}; }
};

// The three kinds that make up the evaluation fault matrix.
inline constexpr FaultKind kMatrixFaultKinds[] = {FaultKind::Drop, FaultKind::PerturbOnce,
                                                  FaultKind::CorruptPersistent};

// A different but schema-valid value for `field` (deterministic in seed).
nlohmann::json perturbed_value(Field field, const StructuredIntent& intent, std::uint64_t seed);
// A value that fails the intent schema for `field`.
nlohmann::json corrupted_value(Field field, std::uint64_t seed);

// Deterministic offline agent. Profiling and refinement use the phrase
// parser; evaluation cross-checks every populated field against a fresh
// extraction of the conversation. Faults apply to profiling-agent calls
// (Profiling, Refinement) and are tracked per session id.
class MockBackend : public LanguageModelBackend {
public:
    MockBackend() = default;
    explicit MockBackend(FaultPlan plan) : plan_(std::move(plan)) {}

    std::string complete(const BackendRequest& request) override;

    void set_fault_plan(FaultPlan plan);
    // Forgets per-session call counts.
    void reset();
    std::size_t calls(const std::string& session_id) const;

private:
    std::string profile(const BackendRequest& r, std::size_t call_index) const;
    std::string refine(const BackendRequest& r, std::size_t call_index) const;
    std::string evaluate(const BackendRequest& r) const;
    nlohmann::json apply_faults(nlohmann::json out, const StructuredIntent& clean, std::size_t call_index,
                                const std::set<Field>* touched) const;
    bool garbled(std::size_t call_index) const;

    FaultPlan plan_;
    mutable std::mutex mu_;
    std::map<std::string, std::size_t> calls_;
};

}  // namespace caif::pipeline

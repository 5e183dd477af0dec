#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "caif/pipeline/intent.hpp"
#include "caif/pipeline/prompts.hpp"

namespace caif::pipeline {

class BackendUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BackendKind { Mock, Remote };

struct BackendConfig {
    BackendKind backend = BackendKind::Mock;
    std::string model_name = "mock";
    double temperature = 0.6;
    double top_p = 0.95;
    std::string endpoint;  // Remote only, e.g. http://127.0.0.1:8000/v1/chat/completions
    int timeout_s = 120;

    // Throws std::invalid_argument when temperature/top_p/endpoint are out of range.
    void check() const;
};

BackendConfig parse_backend_config(const nlohmann::json& doc);
nlohmann::json backend_config_to_json(const BackendConfig& config);

// Everything one agent call has access to. The pointers outlive the call.
struct BackendRequest {
    PromptKind kind = PromptKind::Profiling;
    std::string prompt;
    const Conversation* conversation = nullptr;
    const StructuredIntent* intent = nullptr;      // Evaluation, Refinement
    const EvaluationReport* report = nullptr;      // Refinement
};

// A language-model agent. Returns the raw completion text, expected to be
// JSON. Implementations must tolerate concurrent calls from different sessions.
class LanguageModelBackend {
public:
    virtual ~LanguageModelBackend() = default;
    virtual std::string complete(const BackendRequest& request) = 0;
};

}  // namespace caif::pipeline

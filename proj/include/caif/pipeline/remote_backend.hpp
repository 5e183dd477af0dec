#pragma once

#include <string>

#include "caif/pipeline/backend.hpp"
#include "caif/util/url.hpp"

namespace caif::pipeline {

// Chat-completion body: {model, temperature, top_p, messages}.
nlohmann::json chat_request_body(const BackendConfig& config, const std::string& prompt);
// Pulls choices[0].message.content out of a chat-completion response.
std::string chat_response_content(const nlohmann::json& response);

// Thin JSON-over-HTTP chat-completion client. The rendered prompt is sent as
// the single user message.
class RemoteBackend : public LanguageModelBackend {
public:
    explicit RemoteBackend(BackendConfig config);

    std::string complete(const BackendRequest& request) override;

    const BackendConfig& config() const { return config_; }

private:
    BackendConfig config_;
    HttpEndpoint endpoint_;
};

}  // namespace caif::pipeline

#include "caif/pipeline/remote_backend.hpp"

#include <httplib.h>

namespace caif::pipeline {

using nlohmann::json;

void BackendConfig::check() const {
    if (!(temperature >= 0.0 && temperature <= 2.0)) throw std::invalid_argument("temperature must be in [0, 2]");
    if (!(top_p > 0.0 && top_p <= 1.0)) throw std::invalid_argument("top_p must be in (0, 1]");
    if (backend == BackendKind::Remote) {
        if (endpoint.empty()) throw std::invalid_argument("remote backend requires an endpoint");
        parse_http_url(endpoint);
    }
}

BackendConfig parse_backend_config(const json& doc) {
    BackendConfig c;
    const std::string kind = doc.value("backend", std::string("mock"));
    if (kind == "mock" || kind == "Mock") {
        c.backend = BackendKind::Mock;
    } else if (kind == "remote" || kind == "Remote") {
        c.backend = BackendKind::Remote;
    } else {
        throw std::invalid_argument("unknown backend kind '" + kind + "'");
    }
    c.model_name = doc.value("model_name", c.model_name);
    c.temperature = doc.value("temperature", c.temperature);
    c.top_p = doc.value("top_p", c.top_p);
    c.endpoint = doc.value("endpoint", c.endpoint);
    c.timeout_s = doc.value("timeout_s", c.timeout_s);
    c.check();
    return c;
}

json backend_config_to_json(const BackendConfig& c) {
    return {{"backend", c.backend == BackendKind::Mock ? "mock" : "remote"},
            {"model_name", c.model_name},
            {"temperature", c.temperature},
            {"top_p", c.top_p},
            {"endpoint", c.endpoint},
            {"timeout_s", c.timeout_s}};
}

json chat_request_body(const BackendConfig& config, const std::string& prompt) {
    return {{"model", config.model_name},
            {"temperature", config.temperature},
            {"top_p", config.top_p},
            {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
}

std::string chat_response_content(const json& response) {
    try {
        return response.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw BackendUnavailable(std::string("malformed chat-completion response: ") + e.what());
    }
}

RemoteBackend::RemoteBackend(BackendConfig config) : config_(std::move(config)) {
    config_.check();
    endpoint_ = parse_http_url(config_.endpoint);
}

std::string RemoteBackend::complete(const BackendRequest& request) {
    httplib::Client client(endpoint_.host, endpoint_.port);
    client.set_connection_timeout(5);
    client.set_read_timeout(config_.timeout_s);
    const auto body = chat_request_body(config_, request.prompt).dump();
    auto res = client.Post(endpoint_.path, body, "application/json");
    if (!res) {
        throw BackendUnavailable("backend " + config_.endpoint + " unreachable: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw BackendUnavailable("backend " + config_.endpoint + " returned HTTP " + std::to_string(res->status));
    }
    json doc;
    try {
        doc = json::parse(res->body);
    } catch (const json::parse_error& e) {
        throw BackendUnavailable(std::string("backend returned non-JSON body: ") + e.what());
    }
    return chat_response_content(doc);
}

}  // namespace caif::pipeline

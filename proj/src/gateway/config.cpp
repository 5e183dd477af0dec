#include "caif/gateway/config.hpp"

#include <stdexcept>

#include "caif/pipeline/mock_backend.hpp"
#include "caif/pipeline/remote_backend.hpp"
#include "caif/util/files.hpp"

namespace caif::gateway {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const nlohmann::json& doc, const char* key, const fs::path& base) {
    if (!doc.contains(key)) throw std::invalid_argument(std::string("config: missing '") + key + "'");
    fs::path p = doc.at(key).get<std::string>();
    return p.is_absolute() ? p : base / p;
}

}  // namespace

GatewayConfig parse_config(const nlohmann::json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) throw std::invalid_argument("config: expected an object");
    GatewayConfig c;
    c.catalog = resolve(doc, "catalog", base_dir);
    c.scenario = resolve(doc, "scenario", base_dir);
    c.prompts = resolve(doc, "prompts", base_dir);
    if (doc.contains("agents")) {
        const auto& agents = doc.at("agents");
        if (agents.contains("profiling")) c.profiler = pipeline::parse_backend_config(agents.at("profiling"));
        if (agents.contains("evaluation")) c.evaluator = pipeline::parse_backend_config(agents.at("evaluation"));
    }
    if (doc.contains("controller")) c.gains = nearrt::parse_gains(doc.at("controller"));
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("history_log")) c.history_log = resolve(doc, "history_log", base_dir);
    c.history_capacity = doc.value("history_capacity", c.history_capacity);
    c.window_s = doc.value("window_s", c.window_s);
    c.max_rounds = doc.value("max_rounds", c.max_rounds);
    if (doc.contains("server")) {
        const auto& s = doc.at("server");
        c.host = s.value("host", c.host);
        c.port = s.value("port", c.port);
    }
    c.tick_interval_ms = doc.value("tick_interval_ms", c.tick_interval_ms);
    if (c.window_s <= 0) throw std::invalid_argument("config: window_s must be positive");
    if (c.max_rounds < 1) throw std::invalid_argument("config: max_rounds must be >= 1");
    if (c.history_capacity == 0) throw std::invalid_argument("config: history_capacity must be positive");
    if (c.tick_interval_ms < 0) throw std::invalid_argument("config: tick_interval_ms must be >= 0");
    return c;
}

GatewayConfig load_config(const fs::path& path) {
    auto doc = nlohmann::json::parse(read_text_file(path));
    return parse_config(doc, path.parent_path());
}

std::unique_ptr<pipeline::LanguageModelBackend> make_backend(const pipeline::BackendConfig& config) {
    config.check();
    if (config.backend == pipeline::BackendKind::Remote) return std::make_unique<pipeline::RemoteBackend>(config);
    return std::make_unique<pipeline::MockBackend>();
}

}  // namespace caif::gateway

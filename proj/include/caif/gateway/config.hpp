#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "caif/nearrt/controller.hpp"
#include "caif/pipeline/backend.hpp"

namespace caif::gateway {

// Relative paths in the config file are resolved against its directory.
struct GatewayConfig {
    std::filesystem::path catalog;
    std::filesystem::path scenario;
    std::filesystem::path prompts;
    pipeline::BackendConfig profiler;
    pipeline::BackendConfig evaluator;
    nearrt::ControllerGains gains;
    std::uint64_t seed = 7;
    std::optional<std::filesystem::path> history_log;
    std::size_t history_capacity = 86400;
    long window_s = 60;
    int max_rounds = 3;
    std::string host = "127.0.0.1";
    int port = 8080;
    int tick_interval_ms = 1000;
};

GatewayConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
GatewayConfig load_config(const std::filesystem::path& path);

std::unique_ptr<pipeline::LanguageModelBackend> make_backend(const pipeline::BackendConfig& config);

}  // namespace caif::gateway

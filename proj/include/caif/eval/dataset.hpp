#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "caif/pipeline/intent.hpp"

namespace caif::eval {

struct DatasetInstance {
    std::string id;
    int shots = 1;
    std::vector<std::string> turns;
    pipeline::StructuredIntent ground_truth;

    bool operator==(const DatasetInstance&) const = default;
};

// Relative weight of shot counts 1..5.
using ShotDistribution = std::array<double, 5>;
inline constexpr ShotDistribution kUniformShots = {1, 1, 1, 1, 1};

struct DatasetOptions {
    std::size_t n = 500;
    ShotDistribution shots = kUniformShots;
    int max_cell = 12;
    int max_slice = 2;  // the catalog admits slices 1 and 2
};

// Deterministic in seed. Every instance's mandatory fields are spread over
// `shots` operator turns, each turn carrying at least one field.
std::vector<DatasetInstance> generate_dataset(std::uint64_t seed, const DatasetOptions& opts = {});

pipeline::Conversation to_conversation(const DatasetInstance& inst);

nlohmann::json instance_to_json(const DatasetInstance& inst);
DatasetInstance instance_from_json(const nlohmann::json& doc);

std::string dataset_to_ndjson(const std::vector<DatasetInstance>& data);
std::vector<DatasetInstance> dataset_from_ndjson(std::string_view text);
void save_dataset(const std::filesystem::path& path, const std::vector<DatasetInstance>& data);
std::vector<DatasetInstance> load_dataset(const std::filesystem::path& path);

}  // namespace caif::eval

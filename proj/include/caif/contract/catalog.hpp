#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "caif/contract/types.hpp"

namespace caif::contract {

// What the system is allowed to do under one specification id.
struct IntentSpecification {
    std::string id;
    std::set<Expectation> allowed_expectations;
    std::vector<std::string> allowed_targets;  // glob patterns, e.g. Cell_*_Slice_{1,2}
    double min_pct = 0.0;
    double max_pct = 100.0;
    std::set<PolicyMechanism> allowed_mechanisms;

    bool allows_target(std::string_view target) const;
    bool allows_pct(double pct) const { return pct >= min_pct && pct <= max_pct; }
};

class Catalog {
public:
    Catalog() = default;
    explicit Catalog(std::vector<IntentSpecification> specs);

    // Throws std::invalid_argument on a spec that breaks its invariants or a duplicate id.
    void add(IntentSpecification spec);

    const IntentSpecification* find(std::string_view id) const;
    bool empty() const { return specs_.empty(); }
    std::size_t size() const { return specs_.size(); }
    std::vector<std::string> ids() const;

private:
    std::map<std::string, IntentSpecification, std::less<>> specs_;
};

// JSON array of specification objects.
Catalog parse_catalog(const nlohmann::json& doc);
Catalog load_catalog(const std::filesystem::path& path);
nlohmann::json catalog_to_json(const Catalog& catalog);

// slaSliceSpec over slices 1 and 2, both directions, 1..100 %.
Catalog default_catalog();

}  // namespace caif::contract

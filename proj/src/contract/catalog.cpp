#include "caif/contract/catalog.hpp"

#include <stdexcept>

#include "caif/util/files.hpp"
#include "caif/util/glob.hpp"

namespace caif::contract {

using nlohmann::json;

bool IntentSpecification::allows_target(std::string_view target) const {
    for (const auto& pattern : allowed_targets) {
        if (glob_match(pattern, target)) return true;
    }
    return false;
}

Catalog::Catalog(std::vector<IntentSpecification> specs) {
    for (auto& s : specs) add(std::move(s));
}

void Catalog::add(IntentSpecification spec) {
    if (spec.id.empty()) throw std::invalid_argument("specification id must not be empty");
    if (!(spec.min_pct > 0.0 && spec.max_pct <= 100.0 && spec.min_pct < spec.max_pct)) {
        throw std::invalid_argument("specification " + spec.id + ": pct bounds must satisfy 0 < min < max <= 100");
    }
    if (specs_.contains(spec.id)) throw std::invalid_argument("duplicate specification id " + spec.id);
    auto id = spec.id;
    specs_.emplace(std::move(id), std::move(spec));
}

const IntentSpecification* Catalog::find(std::string_view id) const {
    auto it = specs_.find(id);
    return it == specs_.end() ? nullptr : &it->second;
}

std::vector<std::string> Catalog::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : specs_) out.push_back(id);
    return out;
}

Catalog parse_catalog(const json& doc) {
    if (!doc.is_array()) throw std::invalid_argument("catalog must be a JSON array");
    Catalog catalog;
    for (const auto& item : doc) {
        IntentSpecification spec;
        spec.id = item.at("id").get<std::string>();
        for (const auto& e : item.at("allowed_expectations")) {
            auto parsed = expectation_from_string(e.get<std::string>());
            if (!parsed) throw std::invalid_argument("catalog " + spec.id + ": unknown expectation " + e.dump());
            spec.allowed_expectations.insert(*parsed);
        }
        spec.allowed_targets = item.at("allowed_targets").get<std::vector<std::string>>();
        const auto& bounds = item.at("pct_bounds");
        if (!bounds.is_array() || bounds.size() != 2) {
            throw std::invalid_argument("catalog " + spec.id + ": pct_bounds must be [min, max]");
        }
        spec.min_pct = bounds[0].get<double>();
        spec.max_pct = bounds[1].get<double>();
        for (const auto& m : item.at("allowed_mechanisms")) {
            auto parsed = mechanism_from_string(m.get<std::string>());
            if (!parsed) throw std::invalid_argument("catalog " + spec.id + ": unknown mechanism " + m.dump());
            spec.allowed_mechanisms.insert(*parsed);
        }
        catalog.add(std::move(spec));
    }
    return catalog;
}

Catalog load_catalog(const std::filesystem::path& path) {
    return parse_catalog(json::parse(read_text_file(path)));
}

json catalog_to_json(const Catalog& catalog) {
    json out = json::array();
    for (const auto& id : catalog.ids()) {
        const auto* s = catalog.find(id);
        json exps = json::array();
        for (auto e : s->allowed_expectations) exps.push_back(std::string(to_string(e)));
        json mechs = json::array();
        for (auto m : s->allowed_mechanisms) mechs.push_back(std::string(to_string(m)));
        out.push_back({{"id", s->id},
                       {"allowed_expectations", exps},
                       {"allowed_targets", s->allowed_targets},
                       {"pct_bounds", {s->min_pct, s->max_pct}},
                       {"allowed_mechanisms", mechs}});
    }
    return out;
}

Catalog default_catalog() {
    IntentSpecification spec;
    spec.id = std::string(kSlaSliceSpec);
    spec.allowed_expectations = {Expectation::ThroughputEnhancement, Expectation::ThroughputReduction};
    spec.allowed_targets = {"Cell_*_Slice_{1,2}"};
    spec.min_pct = 1.0;
    spec.max_pct = 100.0;
    spec.allowed_mechanisms = {PolicyMechanism::TwoLevelRrmPolicyRatio};
    return Catalog({spec});
}

}  // namespace caif::contract

#include "caif/contract/validate.hpp"

#include <cmath>
#include <stdexcept>

namespace caif::contract {

ValidationResult validate_contract(const IntentContract& c, const Catalog& catalog) {
    if (catalog.empty()) throw std::invalid_argument("validate_contract: catalog is empty");

    ValidationResult r;
    auto fail = [&r](std::string field, std::string reason) {
        r.violations.push_back({std::move(field), std::move(reason)});
    };

    if (c.id.empty()) fail("id", "missing identifier");

    const IntentSpecification* spec = catalog.find(c.specification_id);
    if (!spec) fail("specification_id", "unknown specification '" + c.specification_id + "'");

    if (!parse_target(c.target)) {
        fail("target", "malformed target (expected Cell_<id>_Slice_<id>)");
    } else if (spec && !spec->allows_target(c.target)) {
        fail("target", "not allowed by specification");
    }

    if (!(std::isfinite(c.target_value_pct) && c.target_value_pct > 0.0 && c.target_value_pct <= 100.0)) {
        fail("target_value_pct", "out of bounds");
    } else if (spec && !spec->allows_pct(c.target_value_pct)) {
        fail("target_value_pct", "outside specification bounds");
    }

    if (spec && !spec->allowed_expectations.contains(c.expectation)) {
        fail("expectation", "not allowed by specification");
    }
    if (spec && !spec->allowed_mechanisms.contains(c.policy_mechanism)) {
        fail("policy_mechanism", "not allowed by specification");
    }

    std::size_t affected = 0;
    bool affected_matches = false;
    bool values_ok = true;
    for (const auto& ch : c.characteristics) {
        if (!value_parses_as(ch.value, ch.value_type)) values_ok = false;
        if (ch.name == kAffectedCells) {
            ++affected;
            affected_matches = ch.value == c.target;
        }
    }
    if (affected != 1) {
        fail("characteristics", "expected exactly one '" + std::string(kAffectedCells) + "' entry, found " +
                                    std::to_string(affected));
    } else if (!affected_matches) {
        fail("characteristics", "'" + std::string(kAffectedCells) + "' does not equal target");
    }
    if (!values_ok) fail("characteristics.value", "value does not parse as its valueType");

    return r;
}

}  // namespace caif::contract

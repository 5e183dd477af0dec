#pragma once

#include <string>
#include <vector>

#include "caif/contract/catalog.hpp"
#include "caif/contract/types.hpp"

namespace caif::contract {

struct Violation {
    std::string field;
    std::string reason;

    bool operator==(const Violation&) const = default;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }
};

// Runs every check independently and reports each failure. At most one
// violation per field: a field that breaks its own invariant is not checked
// again against the specification.
//
// Throws std::invalid_argument when the catalog is empty.
ValidationResult validate_contract(const IntentContract& contract, const Catalog& catalog);

}  // namespace caif::contract

#include "caif/contract/types.hpp"

#include <charconv>
#include <cmath>

namespace caif::contract {

std::string_view to_string(Expectation e) {
    switch (e) {
        case Expectation::ThroughputEnhancement: return "ThroughputEnhancement";
        case Expectation::ThroughputReduction:   return "ThroughputReduction";
    }
    return "?";
}

std::string_view to_string(PolicyMechanism m) {
    switch (m) {
        case PolicyMechanism::TwoLevelRrmPolicyRatio: return "TwoLevelRrmPolicyRatio";
    }
    return "?";
}

std::string_view to_string(ValueType v) {
    switch (v) {
        case ValueType::String:  return "string";
        case ValueType::Integer: return "integer";
        case ValueType::Decimal: return "decimal";
    }
    return "?";
}

std::string_view to_string(State s) {
    switch (s) {
        case State::Received:  return "Received";
        case State::Validated: return "Validated";
        case State::Activated: return "Activated";
        case State::Fulfilled: return "Fulfilled";
        case State::Degraded:  return "Degraded";
        case State::Stopped:   return "Stopped";
        case State::Rejected:  return "Rejected";
    }
    return "?";
}

std::optional<Expectation> expectation_from_string(std::string_view s) {
    if (s == "ThroughputEnhancement") return Expectation::ThroughputEnhancement;
    if (s == "ThroughputReduction") return Expectation::ThroughputReduction;
    return std::nullopt;
}

std::optional<PolicyMechanism> mechanism_from_string(std::string_view s) {
    if (s == "TwoLevelRrmPolicyRatio") return PolicyMechanism::TwoLevelRrmPolicyRatio;
    return std::nullopt;
}

std::optional<ValueType> value_type_from_string(std::string_view s) {
    if (s == "string") return ValueType::String;
    if (s == "integer") return ValueType::Integer;
    if (s == "decimal") return ValueType::Decimal;
    return std::nullopt;
}

std::optional<State> state_from_string(std::string_view s) {
    for (State st : kAllStates) {
        if (to_string(st) == s) return st;
    }
    return std::nullopt;
}

bool value_parses_as(std::string_view value, ValueType type) {
    switch (type) {
        case ValueType::String: return true;
        case ValueType::Integer: {
            if (value.empty()) return false;
            long long v = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            return ec == std::errc{} && ptr == value.data() + value.size();
        }
        case ValueType::Decimal: {
            if (value.empty()) return false;
            double v = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            return ec == std::errc{} && ptr == value.data() + value.size() && std::isfinite(v);
        }
    }
    return false;
}

bool is_legal_transition(State from, State to) {
    switch (from) {
        case State::Received:  return to == State::Validated || to == State::Rejected;
        case State::Validated: return to == State::Activated || to == State::Rejected;
        case State::Activated: return to == State::Fulfilled || to == State::Degraded || to == State::Stopped;
        case State::Fulfilled: return to == State::Degraded || to == State::Stopped;
        case State::Degraded:  return to == State::Fulfilled || to == State::Stopped;
        case State::Stopped:
        case State::Rejected:  return false;
    }
    return false;
}

bool is_terminal(State s) { return s == State::Stopped || s == State::Rejected; }

bool is_active(State s) {
    return s == State::Activated || s == State::Fulfilled || s == State::Degraded;
}

std::string format_target(Scope scope) {
    return "Cell_" + std::to_string(scope.cell_id) + "_Slice_" + std::to_string(scope.slice_id);
}

namespace {

// Positive decimal integer without sign or leading zeros.
std::optional<int> parse_positive(std::string_view s) {
    if (s.empty() || s.front() == '0' || s.size() > 9) return std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v <= 0) return std::nullopt;
    return v;
}

}  // namespace

std::optional<Scope> parse_target(std::string_view target) {
    constexpr std::string_view kCell = "Cell_";
    constexpr std::string_view kSlice = "_Slice_";
    if (!target.starts_with(kCell)) return std::nullopt;
    target.remove_prefix(kCell.size());
    const auto pos = target.find(kSlice);
    if (pos == std::string_view::npos) return std::nullopt;
    auto cell = parse_positive(target.substr(0, pos));
    auto slice = parse_positive(target.substr(pos + kSlice.size()));
    if (!cell || !slice) return std::nullopt;
    return Scope{*cell, *slice};
}

const Characteristic* find_characteristic(const IntentContract& contract, std::string_view name) {
    for (const auto& ch : contract.characteristics) {
        if (ch.name == name) return &ch;
    }
    return nullptr;
}

IntentContract example_contract() {
    IntentContract c;
    c.id = "intent-example";
    c.target = "Cell_1_Slice_1";
    c.expectation = Expectation::ThroughputEnhancement;
    c.target_value_pct = 5.0;
    c.policy_mechanism = PolicyMechanism::TwoLevelRrmPolicyRatio;
    c.specification_id = std::string(kSlaSliceSpec);
    c.relationship = {std::string(kPolicyBaseline), "derivesFrom"};
    c.characteristics.push_back(
        {std::string(kEligibleClusters), std::string(kAffectedCells), ValueType::String, c.target});
    c.created_at = parse_iso8601("2025-01-01T00:00:00.000Z");
    c.lifecycle.state = State::Received;
    c.lifecycle.history.push_back({c.created_at, State::Received, "registered"});
    return c;
}

}  // namespace caif::contract

#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "caif/util/time.hpp"

namespace caif::contract {

enum class Expectation { ThroughputEnhancement, ThroughputReduction };
enum class PolicyMechanism { TwoLevelRrmPolicyRatio };
enum class ValueType { String, Integer, Decimal };

enum class State { Received, Validated, Activated, Fulfilled, Degraded, Stopped, Rejected };

inline constexpr State kAllStates[] = {State::Received,  State::Validated, State::Activated, State::Fulfilled,
                                       State::Degraded,  State::Stopped,   State::Rejected};

std::string_view to_string(Expectation e);
std::string_view to_string(PolicyMechanism m);
std::string_view to_string(ValueType v);
std::string_view to_string(State s);

// Parsers return nullopt for unknown names.
std::optional<Expectation> expectation_from_string(std::string_view s);
std::optional<PolicyMechanism> mechanism_from_string(std::string_view s);
std::optional<ValueType> value_type_from_string(std::string_view s);
std::optional<State> state_from_string(std::string_view s);

struct Characteristic {
    std::string id;
    std::string name;
    ValueType value_type = ValueType::String;
    std::string value;

    bool operator==(const Characteristic&) const = default;
};

// True when `value` is a well-formed literal of `type`.
bool value_parses_as(std::string_view value, ValueType type);

struct Relationship {
    std::string related_id;
    std::string relationship_kind;

    bool operator==(const Relationship&) const = default;
};

struct LifecycleEntry {
    Timestamp at;
    State state;
    std::string reason;

    bool operator==(const LifecycleEntry&) const = default;
};

struct LifecycleState {
    State state = State::Received;
    std::vector<LifecycleEntry> history;

    bool operator==(const LifecycleState&) const = default;
};

// Legal moves of the contract state machine. Stopped and Rejected are terminal.
bool is_legal_transition(State from, State to);
bool is_terminal(State s);
bool is_active(State s);  // Activated, Fulfilled or Degraded

struct IntentContract {
    std::string id;
    std::string target;  // Cell_<n>_Slice_<m>
    Expectation expectation = Expectation::ThroughputEnhancement;
    double target_value_pct = 0.0;
    PolicyMechanism policy_mechanism = PolicyMechanism::TwoLevelRrmPolicyRatio;
    std::string specification_id;
    Relationship relationship;
    std::vector<Characteristic> characteristics;
    LifecycleState lifecycle;
    Timestamp created_at{};

    bool operator==(const IntentContract&) const = default;
};

struct Scope {
    int cell_id = 0;
    int slice_id = 0;

    auto operator<=>(const Scope&) const = default;
};

std::string format_target(Scope scope);
// Parses `Cell_<cellId>_Slice_<sliceId>` with positive integer ids.
std::optional<Scope> parse_target(std::string_view target);

inline constexpr std::string_view kAffectedCells = "affectedCells";
inline constexpr std::string_view kEligibleClusters = "eligibleClusters";
inline constexpr std::string_view kSlaSliceSpec = "slaSliceSpec";
inline constexpr std::string_view kPolicyBaseline = "policy-baseline";
inline constexpr std::string_view kDeadlineSeconds = "deadlineSeconds";
inline constexpr std::string_view kMetricName = "metric";

// First characteristic with the given name, or nullptr.
const Characteristic* find_characteristic(const IntentContract& contract, std::string_view name);

// The Table I example: throughput enhancement of 5% on Cell_1_Slice_1.
IntentContract example_contract();

}  // namespace caif::contract

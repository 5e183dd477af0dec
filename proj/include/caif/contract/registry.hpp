#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "caif/contract/types.hpp"

namespace caif::contract {

class IllegalTransition : public std::logic_error {
public:
    IllegalTransition(State from, State to)
        : std::logic_error("illegal lifecycle transition " + std::string(to_string(from)) + " -> " +
                           std::string(to_string(to))),
          from_(from), to_(to) {}
    State from() const { return from_; }
    State to() const { return to_; }

private:
    State from_;
    State to_;
};

class UnknownContract : public std::out_of_range {
public:
    explicit UnknownContract(const std::string& id) : std::out_of_range("unknown contract " + id) {}
};

class DuplicateContract : public std::invalid_argument {
public:
    explicit DuplicateContract(const std::string& id) : std::invalid_argument("duplicate contract id " + id) {}
};

// Bookkeeping held next to a contract: the policy it produced and free-form notes.
struct ContractRecord {
    IntentContract contract;
    std::optional<std::string> policy_id;
    std::optional<double> target_mbps;
    std::vector<std::string> notes;
};

// Intent management: registers contracts and drives their lifecycle.
// All members are safe to call concurrently.
class Registry {
public:
    using Clock = std::function<Timestamp()>;

    Registry();
    explicit Registry(Clock clock);

    // Stores the contract in state Received. Assigns "intent-<n>" when id is empty.
    std::string register_contract(IntentContract contract);

    LifecycleState transition(const std::string& id, State to, const std::string& reason);

    IntentContract get(const std::string& id) const;
    ContractRecord record(const std::string& id) const;
    bool contains(const std::string& id) const;
    std::vector<std::string> ids() const;

    void set_policy(const std::string& id, const std::string& policy_id, double target_mbps);
    void add_note(const std::string& id, std::string note);

    // Active contracts (Activated/Fulfilled/Degraded) sharing the candidate's target.
    std::vector<std::string> detect_conflict(const IntentContract& candidate) const;

private:
    ContractRecord& at(const std::string& id);
    const ContractRecord& at(const std::string& id) const;

    Clock clock_;
    mutable std::shared_mutex mu_;
    std::map<std::string, ContractRecord> records_;
    std::size_t next_id_ = 1;
};

}  // namespace caif::contract

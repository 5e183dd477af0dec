#include "caif/contract/registry.hpp"

#include <cstdio>

namespace caif::contract {

Registry::Registry() : Registry(now_ms) {}

Registry::Registry(Clock clock) : clock_(std::move(clock)) {}

std::string Registry::register_contract(IntentContract contract) {
    std::unique_lock lock(mu_);
    if (contract.id.empty()) {
        do {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "intent-%04zu", next_id_++);
            contract.id = buf;
        } while (records_.contains(contract.id));
    }
    if (records_.contains(contract.id)) throw DuplicateContract(contract.id);
    const auto at = clock_();
    if (contract.created_at == Timestamp{}) contract.created_at = at;
    contract.lifecycle.state = State::Received;
    contract.lifecycle.history.clear();
    contract.lifecycle.history.push_back({at, State::Received, "registered"});
    auto id = contract.id;
    records_.emplace(id, ContractRecord{std::move(contract), std::nullopt, std::nullopt, {}});
    return id;
}

LifecycleState Registry::transition(const std::string& id, State to, const std::string& reason) {
    std::unique_lock lock(mu_);
    auto& life = at(id).contract.lifecycle;
    if (!is_legal_transition(life.state, to)) throw IllegalTransition(life.state, to);
    life.state = to;
    life.history.push_back({clock_(), to, reason});
    return life;
}

IntentContract Registry::get(const std::string& id) const {
    std::shared_lock lock(mu_);
    return at(id).contract;
}

ContractRecord Registry::record(const std::string& id) const {
    std::shared_lock lock(mu_);
    return at(id);
}

bool Registry::contains(const std::string& id) const {
    std::shared_lock lock(mu_);
    return records_.contains(id);
}

std::vector<std::string> Registry::ids() const {
    std::shared_lock lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, _] : records_) out.push_back(id);
    return out;
}

void Registry::set_policy(const std::string& id, const std::string& policy_id, double target_mbps) {
    std::unique_lock lock(mu_);
    auto& rec = at(id);
    rec.policy_id = policy_id;
    rec.target_mbps = target_mbps;
}

void Registry::add_note(const std::string& id, std::string note) {
    std::unique_lock lock(mu_);
    at(id).notes.push_back(std::move(note));
}

std::vector<std::string> Registry::detect_conflict(const IntentContract& candidate) const {
    std::shared_lock lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, rec] : records_) {
        if (id == candidate.id) continue;
        if (is_active(rec.contract.lifecycle.state) && rec.contract.target == candidate.target) out.push_back(id);
    }
    return out;
}

ContractRecord& Registry::at(const std::string& id) {
    auto it = records_.find(id);
    if (it == records_.end()) throw UnknownContract(id);
    return it->second;
}

const ContractRecord& Registry::at(const std::string& id) const {
    auto it = records_.find(id);
    if (it == records_.end()) throw UnknownContract(id);
    return it->second;
}

}  // namespace caif::contract

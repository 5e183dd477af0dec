#include "caif/nonrt/a1_handler.hpp"

#include <charconv>

namespace caif::nonrt {

using contract::State;

namespace {

Scope contract_scope(const contract::IntentContract& c) {
    auto scope = contract::parse_target(c.target);
    if (!scope) throw ContractNotActivatable("contract " + c.id + " has malformed target " + c.target);
    return *scope;
}

}  // namespace

std::string_view to_string(ActivationStatus s) {
    switch (s) {
        case ActivationStatus::Dispatched: return "Dispatched";
        case ActivationStatus::Rejected: return "Rejected";
        case ActivationStatus::DispatchFailed: return "DispatchFailed";
        case ActivationStatus::NoData: return "NoData";
    }
    return "?";
}

Action contract_action(const contract::IntentContract& c) {
    return c.expectation == contract::Expectation::ThroughputReduction ? Action::Decrease : Action::Increase;
}

int contract_deadline_s(const contract::IntentContract& c) {
    const auto* ch = contract::find_characteristic(c, contract::kDeadlineSeconds);
    if (!ch) return kDefaultDeadlineS;
    int v = 0;
    auto [p, ec] = std::from_chars(ch->value.data(), ch->value.data() + ch->value.size(), v);
    if (ec != std::errc() || p != ch->value.data() + ch->value.size() || v <= 0) return kDefaultDeadlineS;
    return v;
}

NonRtRic::NonRtRic(contract::Registry& registry, PerfStore& store, ric::A1Endpoint& endpoint, long window_s)
    : registry_(registry), store_(store), endpoint_(endpoint), window_s_(window_s) {}

ActivationResult NonRtRic::activate(const std::string& contract_id) {
    std::lock_guard lock(mu_);
    auto rec = registry_.record(contract_id);
    const auto& c = rec.contract;
    State state = c.lifecycle.state;

    if (state == State::Activated && rec.policy_id && !delivered_.count(*rec.policy_id)) {
        auto scope = contract_scope(c);
        ric::A1Policy policy{*rec.policy_id, contract_id, scope, *rec.target_mbps, contract_deadline_s(c),
                             ric::PolicyState::Created};
        Feasibility feas = feasibility_check(store_, scope, policy.target_throughput_mbps);
        return dispatch(contract_id, policy, feas);
    }
    if (state != State::Validated) {
        throw ContractNotActivatable("contract " + contract_id + " is " + std::string(contract::to_string(state)));
    }

    ActivationResult out;
    out.contract_id = contract_id;

    out.conflicts = registry_.detect_conflict(c);
    if (!out.conflicts.empty()) {
        out.reason = "conflicts with active contract " + out.conflicts.front();
        registry_.transition(contract_id, State::Rejected, out.reason);
        return out;
    }

    auto scope = contract_scope(c);
    try {
        out.current_mbps = current_throughput(store_, scope.cell_id, scope.slice_id, window_s_);
    } catch (const NoData& e) {
        out.status = ActivationStatus::NoData;
        out.reason = e.what();
        return out;
    }
    try {
        out.target_mbps = derive_target(*out.current_mbps, contract_action(c), c.target_value_pct);
    } catch (const NonPositiveCurrent& e) {
        out.reason = e.what();
        registry_.transition(contract_id, State::Rejected, out.reason);
        return out;
    }

    try {
        out.feasibility = feasibility_check(store_, scope, *out.target_mbps);
    } catch (const NoHistory& e) {
        out.status = ActivationStatus::NoData;
        out.reason = e.what();
        return out;
    }
    if (!out.feasibility->feasible) {
        out.reason = "infeasible: " + out.feasibility->reason;
        registry_.transition(contract_id, State::Rejected, out.reason);
        return out;
    }

    registry_.transition(contract_id, State::Activated, "feasibility passed");
    ric::A1Policy policy{"policy-" + std::to_string(next_policy_++), contract_id, scope, *out.target_mbps,
                         contract_deadline_s(c), ric::PolicyState::Created};
    registry_.set_policy(contract_id, policy.policy_id, policy.target_throughput_mbps);

    auto res = dispatch(contract_id, policy, *out.feasibility);
    res.current_mbps = out.current_mbps;
    res.target_mbps = out.target_mbps;
    res.feasibility = out.feasibility;
    return res;
}

ActivationResult NonRtRic::dispatch(const std::string& contract_id, ric::A1Policy policy, const Feasibility& feas) {
    ActivationResult out;
    out.contract_id = contract_id;
    out.target_mbps = policy.target_throughput_mbps;
    out.feasibility = feas;
    State state = registry_.get(contract_id).lifecycle.state;
    if (state != State::Activated || !feas.feasible) {
        throw std::logic_error("refusing to dispatch for contract " + contract_id);
    }
    log_.push_back({policy, state, feas.feasible});
    try {
        endpoint_.put_policy(policy);
    } catch (const ric::DispatchFailure& e) {
        registry_.add_note(contract_id, std::string("dispatch failed, retry activation: ") + e.what());
        out.status = ActivationStatus::DispatchFailed;
        out.reason = e.what();
        out.policy = policy;
        return out;
    }
    delivered_.insert(policy.policy_id);
    out.status = ActivationStatus::Dispatched;
    out.policy = policy;
    return out;
}

std::vector<DispatchRecord> NonRtRic::dispatch_log() const {
    std::lock_guard lock(mu_);
    return log_;
}

}  // namespace caif::nonrt

#include "caif/nearrt/near_rt_ric.hpp"

#include <cmath>

namespace caif::nearrt {

using contract::State;
using ric::PolicyState;

void SimulatorControl::apply_ratio_control(int cell_id, int slice_id, sim::RrmPolicyRatio ratio) {
    sim_.apply_ratio_control(cell_id, slice_id, ratio);
}

sim::RrmPolicyRatio SimulatorControl::current_ratio(int cell_id, int slice_id) const {
    return sim_.ratio(cell_id, slice_id);
}

std::map<int, sim::RrmPolicyRatio> SimulatorControl::cell_ratios(int cell_id) const {
    return sim_.cell_ratios(cell_id);
}

nlohmann::json e2_control_message(const ControlRecord& c) {
    return {{"cell_id", c.cell_id},
            {"slice_id", c.slice_id},
            {"min_ratio_pct", c.after.min_ratio_pct},
            {"max_ratio_pct", c.after.max_ratio_pct}};
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::PolicyEnforced: return "policy_enforced";
        case EventKind::PolicyReplaced: return "policy_replaced";
        case EventKind::PolicyStopped: return "policy_stopped";
        case EventKind::Control: return "control";
        case EventKind::Stale: return "stale";
    }
    return "?";
}

NearRtRic::NearRtRic(RanControl& ran, ControllerGains gains, contract::Registry* registry, long tick_s,
                     std::size_t metrics_capacity)
    : ran_(ran), gains_(gains), registry_(registry), tick_s_(tick_s), metrics_(metrics_capacity) {
    gains_.check();
    if (tick_s_ <= 0) throw std::invalid_argument("tick_s must be positive");
}

void NearRtRic::set_listener(Listener listener) {
    std::lock_guard lock(mu_);
    listener_ = std::move(listener);
}

void NearRtRic::emit(EventKind kind, const Loop& loop, std::string detail) {
    if (!listener_) return;
    listener_({kind, tick_, loop.view.policy.policy_id, loop.view.policy.scope, std::move(detail)});
}

void NearRtRic::contract_transition(const std::string& contract_id, State to, const std::string& reason) {
    if (!registry_ || !registry_->contains(contract_id)) return;
    State from = registry_->get(contract_id).lifecycle.state;
    if (from == to || !contract::is_legal_transition(from, to)) return;
    registry_->transition(contract_id, to, reason);
}

void NearRtRic::a1_receive(ric::A1Policy policy) {
    ric::check_policy(policy);
    std::lock_guard lock(mu_);
    if (loops_.count(policy.policy_id)) throw ric::MalformedPolicy("duplicate policy id " + policy.policy_id);
    auto ratio = ran_.current_ratio(policy.scope.cell_id, policy.scope.slice_id);

    for (auto& id : order_) {
        auto& other = loops_.at(id);
        if (other.view.policy.state == PolicyState::Enforced &&
            other.view.policy.scope.cell_id == policy.scope.cell_id) {
            end_policy(other, PolicyState::Replaced, "replaced by " + policy.policy_id);
        }
    }

    policy.state = PolicyState::Enforced;
    Loop loop{{policy, tick_, std::nullopt, false}, ratio, false, -1};
    order_.push_back(policy.policy_id);
    auto& stored = loops_.emplace(policy.policy_id, std::move(loop)).first->second;
    emit(EventKind::PolicyEnforced, stored);
}

void NearRtRic::end_policy(Loop& loop, PolicyState to, const std::string& reason) {
    loop.view.policy.state = to;
    loop.view.ended_at = tick_;
    contract_transition(loop.view.policy.contract_id, State::Stopped, reason);
    emit(to == PolicyState::Replaced ? EventKind::PolicyReplaced : EventKind::PolicyStopped, loop, reason);
}

void NearRtRic::stop_policy(const std::string& policy_id, const std::string& reason) {
    std::lock_guard lock(mu_);
    auto it = loops_.find(policy_id);
    if (it == loops_.end()) throw UnknownPolicy(policy_id);
    if (ric::is_terminal(it->second.view.policy.state)) throw AlreadyTerminal(policy_id);
    end_policy(it->second, PolicyState::Stopped, reason);
}

void NearRtRic::set_clock(long tick) {
    std::lock_guard lock(mu_);
    tick_ = tick;
}

void NearRtRic::kpimon_ingest(std::span<const sim::KpmReport> reports) {
    metrics_.ingest(reports);
}

sim::RrmPolicyRatio NearRtRic::actuate(int cell_id, int slice_id, sim::RrmPolicyRatio ratio) {
    try {
        ran_.apply_ratio_control(cell_id, slice_id, ratio);
        return ratio;
    } catch (const sim::InvariantViolation&) {
    }
    // Minimums of the other slices leave less room than the guard band asks for.
    int others = 0;
    for (const auto& [sid, r] : ran_.cell_ratios(cell_id)) {
        if (sid != slice_id) others += r.min_ratio_pct;
    }
    ratio.min_ratio_pct = std::max(0, std::min(ratio.min_ratio_pct, 100 - others));
    ran_.apply_ratio_control(cell_id, slice_id, ratio);
    return ratio;
}

void NearRtRic::step(Loop& loop, long tick) {
    auto& p = loop.view.policy;
    long ticks_allowed = (p.deadline_s + tick_s_ - 1) / tick_s_;
    if (tick - loop.view.enforced_at >= ticks_allowed) {
        end_policy(loop, PolicyState::Stopped, "deadline reached");
        return;
    }

    auto report = metrics_.latest(p.scope);
    if (!report || tick - report->tick > kStaleTicks) {
        if (!loop.view.paused && (report || tick - loop.view.enforced_at > kStaleTicks)) {
            loop.view.paused = true;
            contract_transition(p.contract_id, State::Degraded, "stale metrics");
            emit(EventKind::Stale, loop, "no report for more than 5 ticks");
        }
        return;
    }
    loop.view.paused = false;
    // Each measurement is acted on once; a repeated reading carries no new error.
    if (report->tick <= loop.last_report) return;
    loop.last_report = report->tick;

    // The ratio may have been moved by someone else (e.g. a replaced policy's last write).
    loop.ratio = ran_.current_ratio(p.scope.cell_id, p.scope.slice_id);
    ControllerState state{p, loop.ratio, gains_};
    double measured = report->dl_throughput_mbps;
    if (auto next = control_step(state, measured)) {
        auto applied = actuate(p.scope.cell_id, p.scope.slice_id, *next);
        ControlRecord rec{tick, p.policy_id, p.scope.cell_id, p.scope.slice_id, measured, loop.ratio, applied};
        controls_.push_back(rec);
        loop.ratio = applied;
        emit(EventKind::Control, loop, e2_control_message(rec).dump());
    }

    double err = std::abs(relative_error(p.target_throughput_mbps, measured));
    if (err <= gains_.deadband_frac) {
        loop.ever_fulfilled = true;
        contract_transition(p.contract_id, State::Fulfilled, "target met");
    } else if (loop.ever_fulfilled && err > kDegradeFrac) {
        contract_transition(p.contract_id, State::Degraded, "target missed");
    }
}

void NearRtRic::on_tick(long tick) {
    std::lock_guard lock(mu_);
    tick_ = tick;
    for (auto& id : order_) {
        auto& loop = loops_.at(id);
        if (loop.view.policy.state == PolicyState::Enforced) step(loop, tick);
    }
}

std::optional<ric::A1Policy> NearRtRic::policy(const std::string& policy_id) const {
    std::lock_guard lock(mu_);
    auto it = loops_.find(policy_id);
    if (it == loops_.end()) return std::nullopt;
    return it->second.view.policy;
}

std::vector<PolicyView> NearRtRic::policies() const {
    std::lock_guard lock(mu_);
    std::vector<PolicyView> out;
    for (const auto& id : order_) out.push_back(loops_.at(id).view);
    return out;
}

std::optional<ric::A1Policy> NearRtRic::enforced_on_cell(int cell_id) const {
    std::lock_guard lock(mu_);
    for (const auto& id : order_) {
        const auto& p = loops_.at(id).view.policy;
        if (p.state == PolicyState::Enforced && p.scope.cell_id == cell_id) return p;
    }
    return std::nullopt;
}

std::vector<ControlRecord> NearRtRic::control_log() const {
    std::lock_guard lock(mu_);
    return controls_;
}

std::size_t NearRtRic::control_count() const {
    std::lock_guard lock(mu_);
    return controls_.size();
}

long NearRtRic::last_tick() const {
    std::lock_guard lock(mu_);
    return tick_;
}

}  // namespace caif::nearrt

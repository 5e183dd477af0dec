#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "caif/contract/registry.hpp"
#include "caif/nearrt/controller.hpp"
#include "caif/nearrt/metrics_db.hpp"
#include "caif/ric/a1_policy.hpp"
#include "caif/sim/simulator.hpp"

namespace caif::nearrt {

inline constexpr long kStaleTicks = 5;
// An assured contract drops to Degraded once the error leaves this band.
inline constexpr double kDegradeFrac = 0.10;

class UnknownPolicy : public std::out_of_range {
public:
    explicit UnknownPolicy(const std::string& id) : std::out_of_range("unknown policy " + id) {}
};

class AlreadyTerminal : public std::logic_error {
public:
    explicit AlreadyTerminal(const std::string& id) : std::logic_error("policy " + id + " is already terminal") {}
};

// E2-side actuation (RC xApp target).
class RanControl {
public:
    virtual ~RanControl() = default;
    // Throws sim::InvariantViolation when the ratio cannot be applied.
    virtual void apply_ratio_control(int cell_id, int slice_id, sim::RrmPolicyRatio ratio) = 0;
    virtual sim::RrmPolicyRatio current_ratio(int cell_id, int slice_id) const = 0;
    virtual std::map<int, sim::RrmPolicyRatio> cell_ratios(int cell_id) const = 0;
};

class SimulatorControl : public RanControl {
public:
    explicit SimulatorControl(sim::Simulator& sim) : sim_(sim) {}
    void apply_ratio_control(int cell_id, int slice_id, sim::RrmPolicyRatio ratio) override;
    sim::RrmPolicyRatio current_ratio(int cell_id, int slice_id) const override;
    std::map<int, sim::RrmPolicyRatio> cell_ratios(int cell_id) const override;

private:
    sim::Simulator& sim_;
};

struct ControlRecord {
    long tick = 0;
    std::string policy_id;
    int cell_id = 0;
    int slice_id = 0;
    double measured_mbps = 0.0;
    sim::RrmPolicyRatio before;
    sim::RrmPolicyRatio after;
};

// {cell_id, slice_id, min_ratio_pct, max_ratio_pct}
nlohmann::json e2_control_message(const ControlRecord& c);

enum class EventKind { PolicyEnforced, PolicyReplaced, PolicyStopped, Control, Stale };
std::string_view to_string(EventKind k);

struct RicEvent {
    EventKind kind;
    long tick = 0;
    std::string policy_id;
    contract::Scope scope;
    std::string detail;
};

struct PolicyView {
    ric::A1Policy policy;
    long enforced_at = 0;
    std::optional<long> ended_at;
    bool paused = false;
};

// A1 mediator + KPIMON + SLA Slice xApp + RC xApp in one object. Every public
// call takes the same lock, so a Replaced/Stopped policy can never emit again.
class NearRtRic {
public:
    using Listener = std::function<void(const RicEvent&)>;

    NearRtRic(RanControl& ran, ControllerGains gains = {}, contract::Registry* registry = nullptr,
              long tick_s = 1, std::size_t metrics_capacity = kDefaultMetricsCapacity);

    // Called with the lock held; must not call back into this object.
    void set_listener(Listener listener);

    // Enforces the policy, replacing any enforced policy on the same cell.
    // Throws MalformedPolicy for bad or duplicate policies.
    void a1_receive(ric::A1Policy policy);
    // Stops the policy; the last applied ratio is left in place.
    void stop_policy(const std::string& policy_id, const std::string& reason = "stopped by operator");

    // Sets the tick stamped on policies received before the next on_tick().
    void set_clock(long tick);

    void kpimon_ingest(std::span<const sim::KpmReport> reports);
    // One control period: deadlines, staleness, control steps, assurance.
    void on_tick(long tick);

    std::optional<ric::A1Policy> policy(const std::string& policy_id) const;
    std::vector<PolicyView> policies() const;
    std::optional<ric::A1Policy> enforced_on_cell(int cell_id) const;
    std::vector<ControlRecord> control_log() const;
    std::size_t control_count() const;
    const MetricsDb& metrics() const { return metrics_; }
    const ControllerGains& gains() const { return gains_; }
    long last_tick() const;

private:
    struct Loop {
        PolicyView view;
        sim::RrmPolicyRatio ratio;
        bool ever_fulfilled = false;
        long last_report = -1;  // tick of the last report acted on
    };

    void end_policy(Loop& loop, ric::PolicyState to, const std::string& reason);
    void contract_transition(const std::string& contract_id, contract::State to, const std::string& reason);
    void emit(EventKind kind, const Loop& loop, std::string detail = {});
    void step(Loop& loop, long tick);
    sim::RrmPolicyRatio actuate(int cell_id, int slice_id, sim::RrmPolicyRatio ratio);

    RanControl& ran_;
    ControllerGains gains_;
    contract::Registry* registry_;
    long tick_s_;
    MetricsDb metrics_;
    mutable std::mutex mu_;
    Listener listener_;
    std::map<std::string, Loop> loops_;
    std::vector<std::string> order_;
    std::vector<ControlRecord> controls_;
    long tick_ = 0;
};

}  // namespace caif::nearrt

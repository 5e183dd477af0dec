#pragma once

#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "caif/contract/registry.hpp"
#include "caif/nonrt/perf_store.hpp"
#include "caif/nonrt/sla_rapp.hpp"
#include "caif/ric/a1_policy.hpp"

namespace caif::nonrt {

// Used when a contract carries no deadline characteristic.
inline constexpr int kDefaultDeadlineS = 300;

enum class ActivationStatus {
    Dispatched,      // contract Activated, policy sent
    Rejected,        // conflict or infeasible; contract Rejected
    DispatchFailed,  // contract Activated, policy not delivered; retry with activate()
    NoData,          // no live throughput yet; contract left Validated
};

std::string_view to_string(ActivationStatus s);

struct ActivationResult {
    ActivationStatus status = ActivationStatus::Rejected;
    std::string contract_id;
    std::optional<ric::A1Policy> policy;
    std::optional<double> current_mbps;
    std::optional<double> target_mbps;
    std::optional<Feasibility> feasibility;
    std::vector<std::string> conflicts;
    std::string reason;
};

// What the handler knew at the moment a policy left for the near-RT layer.
struct DispatchRecord {
    ric::A1Policy policy;
    contract::State contract_state;
    bool feasible = false;
};

class ContractNotActivatable : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Action implied by the contract's expectation.
Action contract_action(const contract::IntentContract& c);
int contract_deadline_s(const contract::IntentContract& c);

// SLA Slice rApp + A1 Policy Handler.
class NonRtRic {
public:
    NonRtRic(contract::Registry& registry, PerfStore& store, ric::A1Endpoint& endpoint,
             long window_s = kDefaultWindowS);

    // Validated -> conflict check -> target -> feasibility -> Activated -> dispatch.
    // An Activated contract whose policy was never delivered is re-dispatched.
    // Throws ContractNotActivatable for any other state, UnknownContract for bad ids.
    ActivationResult activate(const std::string& contract_id);

    std::vector<DispatchRecord> dispatch_log() const;

private:
    ActivationResult dispatch(const std::string& contract_id, ric::A1Policy policy, const Feasibility& feas);

    contract::Registry& registry_;
    PerfStore& store_;
    ric::A1Endpoint& endpoint_;
    long window_s_;
    mutable std::mutex mu_;
    std::size_t next_policy_ = 1;
    std::set<std::string> delivered_;
    std::vector<DispatchRecord> log_;
};

}  // namespace caif::nonrt

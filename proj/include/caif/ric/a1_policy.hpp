#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "caif/contract/types.hpp"

namespace caif::ric {

enum class PolicyState { Created, Enforced, Replaced, Stopped };

std::string_view to_string(PolicyState s);
bool is_terminal(PolicyState s);

// Throughput-target policy carried over A1 from the non-RT to the near-RT layer.
struct A1Policy {
    std::string policy_id;
    std::string contract_id;
    contract::Scope scope;
    double target_throughput_mbps = 0.0;
    int deadline_s = 0;
    PolicyState state = PolicyState::Created;

    bool operator==(const A1Policy&) const = default;
};

class MalformedPolicy : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DispatchFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Wire body: {policy_id, contract_id, scope: {cell_id, slice_id}, target_throughput_mbps, deadline_s}.
nlohmann::json a1_policy_to_json(const A1Policy& policy);
// Throws MalformedPolicy on missing fields, non-positive target/deadline or ids.
A1Policy a1_policy_from_json(const nlohmann::json& doc);
// Same checks on an in-memory policy.
void check_policy(const A1Policy& policy);

// Where the A1 policy handler sends policies.
class A1Endpoint {
public:
    virtual ~A1Endpoint() = default;
    // Throws DispatchFailure when the near-RT layer cannot be reached.
    virtual void put_policy(const A1Policy& policy) = 0;
    virtual void delete_policy(const std::string& policy_id) = 0;
};

// PUT/DELETE {base_url}/a1/policies/{policy_id}.
class HttpA1Endpoint : public A1Endpoint {
public:
    explicit HttpA1Endpoint(std::string base_url);

    void put_policy(const A1Policy& policy) override;
    void delete_policy(const std::string& policy_id) override;

private:
    std::string host_;
    int port_ = 80;
    std::string prefix_;
};

}  // namespace caif::ric

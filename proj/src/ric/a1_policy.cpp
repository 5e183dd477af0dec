#include "caif/ric/a1_policy.hpp"

#include <httplib.h>

#include "caif/util/url.hpp"

namespace caif::ric {

using nlohmann::json;

std::string_view to_string(PolicyState s) {
    switch (s) {
        case PolicyState::Created:  return "Created";
        case PolicyState::Enforced: return "Enforced";
        case PolicyState::Replaced: return "Replaced";
        case PolicyState::Stopped:  return "Stopped";
    }
    return "?";
}

bool is_terminal(PolicyState s) { return s == PolicyState::Replaced || s == PolicyState::Stopped; }

json a1_policy_to_json(const A1Policy& p) {
    return {{"policy_id", p.policy_id},
            {"contract_id", p.contract_id},
            {"scope", {{"cell_id", p.scope.cell_id}, {"slice_id", p.scope.slice_id}}},
            {"target_throughput_mbps", p.target_throughput_mbps},
            {"deadline_s", p.deadline_s}};
}

void check_policy(const A1Policy& p) {
    if (p.policy_id.empty()) throw MalformedPolicy("policy_id must not be empty");
    if (p.scope.cell_id <= 0 || p.scope.slice_id <= 0) throw MalformedPolicy("scope ids must be positive");
    if (!(p.target_throughput_mbps > 0.0)) throw MalformedPolicy("target_throughput_mbps must be positive");
    if (p.deadline_s <= 0) throw MalformedPolicy("deadline_s must be positive");
}

A1Policy a1_policy_from_json(const json& doc) {
    A1Policy p;
    try {
        p.policy_id = doc.at("policy_id").get<std::string>();
        p.contract_id = doc.value("contract_id", std::string());
        p.scope.cell_id = doc.at("scope").at("cell_id").get<int>();
        p.scope.slice_id = doc.at("scope").at("slice_id").get<int>();
        p.target_throughput_mbps = doc.at("target_throughput_mbps").get<double>();
        p.deadline_s = doc.at("deadline_s").get<int>();
    } catch (const json::exception& e) {
        throw MalformedPolicy(std::string("malformed A1 policy: ") + e.what());
    }
    check_policy(p);
    return p;
}

HttpA1Endpoint::HttpA1Endpoint(std::string base_url) {
    auto ep = parse_http_url(base_url);
    host_ = ep.host;
    port_ = ep.port;
    prefix_ = ep.path == "/" ? "" : ep.path;
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

void HttpA1Endpoint::put_policy(const A1Policy& policy) {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(5);
    auto res = client.Put(prefix_ + "/a1/policies/" + policy.policy_id, a1_policy_to_json(policy).dump(),
                          "application/json");
    if (!res) throw DispatchFailure("A1 endpoint unreachable: " + httplib::to_string(res.error()));
    if (res->status / 100 != 2) {
        throw DispatchFailure("A1 endpoint rejected policy " + policy.policy_id + " (HTTP " +
                              std::to_string(res->status) + "): " + res->body);
    }
}

void HttpA1Endpoint::delete_policy(const std::string& policy_id) {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(5);
    auto res = client.Delete(prefix_ + "/a1/policies/" + policy_id);
    if (!res) throw DispatchFailure("A1 endpoint unreachable: " + httplib::to_string(res.error()));
    if (res->status / 100 != 2) {
        throw DispatchFailure("A1 endpoint refused to stop " + policy_id + " (HTTP " + std::to_string(res->status) +
                              ")");
    }
}

}  // namespace caif::ric

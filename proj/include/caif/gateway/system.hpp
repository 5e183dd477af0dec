#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "caif/contract/catalog.hpp"
#include "caif/contract/registry.hpp"
#include "caif/gateway/config.hpp"
#include "caif/nearrt/near_rt_ric.hpp"
#include "caif/nonrt/a1_handler.hpp"
#include "caif/nonrt/perf_store.hpp"
#include "caif/pipeline/pipeline.hpp"
#include "caif/sim/simulator.hpp"

namespace caif::gateway {

enum class SessionStatus { Idle, AwaitingClarification, ContractReady, Rejected };
std::string_view to_string(SessionStatus s);

struct SessionView {
    std::string session_id;
    pipeline::Conversation conversation;
    SessionStatus status = SessionStatus::Idle;
    std::optional<std::string> contract_id;
    std::optional<std::string> policy_id;
    std::optional<std::string> question;
    std::vector<std::string> reasons;
};

nlohmann::json session_view_to_json(const SessionView& v);

class UnknownSession : public std::out_of_range {
public:
    explicit UnknownSession(const std::string& id) : std::out_of_range("unknown session " + id) {}
};

struct SystemEvent {
    std::string type;  // kpm | policy | control | contract
    nlohmann::json data;
};

// Fan-out broadcast; each subscriber has its own bounded queue.
class EventBus {
public:
    class Subscription {
    public:
        // Waits up to `timeout` for the next event.
        std::optional<SystemEvent> next(std::chrono::milliseconds timeout);
        void close();
        bool closed() const;

    private:
        friend class EventBus;
        mutable std::mutex mu_;
        std::condition_variable cv_;
        std::deque<SystemEvent> queue_;
        bool closed_ = false;
    };

    explicit EventBus(std::size_t queue_limit = 10000) : limit_(queue_limit) {}

    std::shared_ptr<Subscription> subscribe();
    void publish(const SystemEvent& e);
    void close_all();
    std::size_t subscribers() const;

private:
    std::size_t limit_;
    mutable std::mutex mu_;
    std::vector<std::weak_ptr<Subscription>> subs_;
};

// In-process A1 link from the handler to the near-RT mediator.
class LocalA1Endpoint : public ric::A1Endpoint {
public:
    explicit LocalA1Endpoint(nearrt::NearRtRic& ric) : ric_(ric) {}
    void put_policy(const ric::A1Policy& policy) override;
    void delete_policy(const std::string& policy_id) override;

private:
    nearrt::NearRtRic& ric_;
};

struct Marker {
    long tick = 0;
    contract::Scope scope;
    std::string label;  // "Policy n" or "Stop"
    std::string policy_id;
};

struct SystemOptions {
    std::uint64_t seed = 7;
    long window_s = nonrt::kDefaultWindowS;
    std::size_t history_capacity = nonrt::kDefaultHistoryCapacity;
    int max_rounds = pipeline::kDefaultMaxRounds;
    nearrt::ControllerGains gains;
    std::optional<std::filesystem::path> history_log;
};

// Everything in one process: pipeline, registry, rApps, near-RT RIC, simulator.
class System {
public:
    System(sim::Scenario scenario, contract::Catalog catalog, pipeline::PromptLibrary prompts,
           std::unique_ptr<pipeline::LanguageModelBackend> profiler,
           std::unique_ptr<pipeline::LanguageModelBackend> evaluator, SystemOptions options = {});
    ~System();

    static std::unique_ptr<System> from_config(const GatewayConfig& config);

    std::string create_session();
    // Appends the operator turn and reruns the pipeline over the conversation.
    SessionView add_turn(const std::string& session_id, const std::string& text);
    SessionView session(const std::string& session_id) const;

    nonrt::ActivationResult activate(const std::string& contract_id);
    void stop_policy(const std::string& policy_id, const std::string& reason = "stopped by operator");

    // A1 mediator entry points for policies arriving over HTTP.
    void a1_put(const ric::A1Policy& policy);
    void a1_delete(const std::string& policy_id);

    // One simulated tick. `before` runs after the clock is set and before the
    // simulator advances (replay hooks its scripted events here).
    std::vector<sim::KpmReport> step(const std::function<void(long)>& before = {});
    long current_tick() const;

    // Background ticking for `serve`.
    void start(std::chrono::milliseconds interval);
    void stop();

    nlohmann::json state() const;
    std::vector<Marker> markers() const;

    EventBus& events() { return bus_; }
    contract::Registry& registry() { return registry_; }
    nearrt::NearRtRic& near_rt() { return *near_rt_; }
    nonrt::NonRtRic& non_rt() { return *non_rt_; }
    nonrt::PerfStore& perf_store() { return perf_; }
    const sim::Simulator& simulator() const { return sim_; }
    const contract::Catalog& catalog() const { return catalog_; }

private:
    void on_ric_event(const nearrt::RicEvent& e);

    mutable std::recursive_mutex mu_;
    sim::Simulator sim_;
    contract::Catalog catalog_;
    pipeline::PromptLibrary prompts_;
    std::unique_ptr<pipeline::LanguageModelBackend> profiler_;
    std::unique_ptr<pipeline::LanguageModelBackend> evaluator_;
    SystemOptions options_;
    contract::Registry registry_;
    nonrt::PerfStore perf_;
    nearrt::SimulatorControl ran_;
    std::unique_ptr<nearrt::NearRtRic> near_rt_;
    std::unique_ptr<LocalA1Endpoint> a1_;
    std::unique_ptr<nonrt::NonRtRic> non_rt_;
    pipeline::IntentPipeline pipeline_;
    EventBus bus_;

    std::map<std::string, SessionView> sessions_;
    std::size_t next_session_ = 1;
    std::vector<Marker> markers_;
    std::size_t policies_seen_ = 0;
    std::vector<SystemEvent> pending_;

    std::thread ticker_;
    std::atomic<bool> running_{false};
    std::mutex wake_mu_;
    std::condition_variable wake_;
};

}  // namespace caif::gateway

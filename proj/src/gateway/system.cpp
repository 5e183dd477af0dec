#include "caif/gateway/system.hpp"

#include <algorithm>

#include "caif/sim/scenario_io.hpp"

namespace caif::gateway {

using nlohmann::json;

std::string_view to_string(SessionStatus s) {
    switch (s) {
        case SessionStatus::Idle: return "Idle";
        case SessionStatus::AwaitingClarification: return "AwaitingClarification";
        case SessionStatus::ContractReady: return "ContractReady";
        case SessionStatus::Rejected: return "Rejected";
    }
    return "?";
}

json session_view_to_json(const SessionView& v) {
    json turns = json::array();
    for (const auto& t : v.conversation.turns) {
        turns.push_back({{"speaker", pipeline::to_string(t.speaker)}, {"text", t.text}, {"at", format_iso8601(t.at)}});
    }
    json out = {{"session_id", v.session_id},
                {"conversation", turns},
                {"pipeline_status", to_string(v.status)},
                {"contract_id", v.contract_id ? json(*v.contract_id) : json(nullptr)},
                {"policy_id", v.policy_id ? json(*v.policy_id) : json(nullptr)},
                {"reasons", v.reasons}};
    if (v.question) out["question"] = *v.question;
    return out;
}

// ---- EventBus ----

std::optional<SystemEvent> EventBus::Subscription::next(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return std::nullopt;
    auto e = std::move(queue_.front());
    queue_.pop_front();
    return e;
}

void EventBus::Subscription::close() {
    {
        std::lock_guard lock(mu_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool EventBus::Subscription::closed() const {
    std::lock_guard lock(mu_);
    return closed_;
}

std::shared_ptr<EventBus::Subscription> EventBus::subscribe() {
    auto sub = std::make_shared<Subscription>();
    std::lock_guard lock(mu_);
    subs_.push_back(sub);
    return sub;
}

void EventBus::publish(const SystemEvent& e) {
    std::lock_guard lock(mu_);
    std::erase_if(subs_, [](const auto& w) { return w.expired(); });
    for (auto& w : subs_) {
        auto sub = w.lock();
        if (!sub) continue;
        {
            std::lock_guard slock(sub->mu_);
            if (sub->closed_) continue;
            sub->queue_.push_back(e);
            while (sub->queue_.size() > limit_) sub->queue_.pop_front();
        }
        sub->cv_.notify_one();
    }
}

void EventBus::close_all() {
    std::lock_guard lock(mu_);
    for (auto& w : subs_) {
        if (auto sub = w.lock()) sub->close();
    }
}

std::size_t EventBus::subscribers() const {
    std::lock_guard lock(mu_);
    return static_cast<std::size_t>(std::count_if(subs_.begin(), subs_.end(), [](const auto& w) { return !w.expired(); }));
}

// ---- LocalA1Endpoint ----

void LocalA1Endpoint::put_policy(const ric::A1Policy& policy) {
    try {
        ric_.a1_receive(policy);
    } catch (const ric::MalformedPolicy& e) {
        throw ric::DispatchFailure(std::string("near-RT refused policy: ") + e.what());
    }
}

void LocalA1Endpoint::delete_policy(const std::string& policy_id) {
    ric_.stop_policy(policy_id);
}

// ---- System ----

System::System(sim::Scenario scenario, contract::Catalog catalog, pipeline::PromptLibrary prompts,
               std::unique_ptr<pipeline::LanguageModelBackend> profiler,
               std::unique_ptr<pipeline::LanguageModelBackend> evaluator, SystemOptions options)
    : sim_(std::move(scenario), options.seed),
      catalog_(std::move(catalog)),
      prompts_(std::move(prompts)),
      profiler_(std::move(profiler)),
      evaluator_(std::move(evaluator)),
      options_(std::move(options)),
      perf_(options_.history_capacity),
      ran_(sim_),
      pipeline_(*profiler_, *evaluator_, prompts_, catalog_, &registry_) {
    for (const auto& cell : sim_.scenario().cells) perf_.set_cell_prb(cell.cell_id, cell.total_prb);
    if (options_.history_log) perf_.attach_log(*options_.history_log);
    near_rt_ = std::make_unique<nearrt::NearRtRic>(ran_, options_.gains, &registry_, sim_.scenario().tick_s);
    near_rt_->set_listener([this](const nearrt::RicEvent& e) { on_ric_event(e); });
    a1_ = std::make_unique<LocalA1Endpoint>(*near_rt_);
    non_rt_ = std::make_unique<nonrt::NonRtRic>(registry_, perf_, *a1_, options_.window_s);
}

System::~System() { stop(); }

std::unique_ptr<System> System::from_config(const GatewayConfig& config) {
    SystemOptions opts;
    opts.seed = config.seed;
    opts.window_s = config.window_s;
    opts.history_capacity = config.history_capacity;
    opts.max_rounds = config.max_rounds;
    opts.gains = config.gains;
    opts.history_log = config.history_log;
    return std::make_unique<System>(sim::load_scenario(config.scenario), contract::load_catalog(config.catalog),
                                    pipeline::PromptLibrary::load(config.prompts), make_backend(config.profiler),
                                    make_backend(config.evaluator), opts);
}

void System::on_ric_event(const nearrt::RicEvent& e) {
    // Runs inside a near-RT call made while mu_ is held.
    json data = {{"tick", e.tick},
                 {"policy_id", e.policy_id},
                 {"cell_id", e.scope.cell_id},
                 {"slice_id", e.scope.slice_id},
                 {"kind", nearrt::to_string(e.kind)},
                 {"detail", e.detail}};
    switch (e.kind) {
        case nearrt::EventKind::PolicyEnforced:
            ++policies_seen_;
            markers_.push_back({e.tick, e.scope, "Policy " + std::to_string(policies_seen_), e.policy_id});
            data["marker"] = markers_.back().label;
            pending_.push_back({"policy", data});
            break;
        case nearrt::EventKind::PolicyStopped:
            markers_.push_back({e.tick, e.scope, "Stop", e.policy_id});
            data["marker"] = "Stop";
            pending_.push_back({"policy", data});
            break;
        case nearrt::EventKind::PolicyReplaced:
        case nearrt::EventKind::Stale:
            pending_.push_back({"policy", data});
            break;
        case nearrt::EventKind::Control:
            pending_.push_back({"control", data});
            break;
    }
}

std::string System::create_session() {
    std::lock_guard lock(mu_);
    std::string id = "session-" + std::to_string(next_session_++);
    SessionView v;
    v.session_id = id;
    v.conversation.session_id = id;
    sessions_.emplace(id, std::move(v));
    return id;
}

SessionView System::add_turn(const std::string& session_id, const std::string& text) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw std::invalid_argument("empty utterance");
    pipeline::Conversation conv;
    {
        std::lock_guard lock(mu_);
        auto it = sessions_.find(session_id);
        if (it == sessions_.end()) throw UnknownSession(session_id);
        it->second.conversation.add_operator(text);
        conv = it->second.conversation;
    }
    // The agents may be slow (remote models); ticking continues meanwhile.
    auto result = pipeline_.run(conv, options_.max_rounds);

    std::lock_guard lock(mu_);
    auto& v = sessions_.at(session_id);
    v.question.reset();
    v.reasons.clear();
    if (auto* ready = std::get_if<pipeline::ContractReady>(&result.outcome)) {
        v.status = SessionStatus::ContractReady;
        v.contract_id = ready->contract.id;
        v.policy_id.reset();
        v.conversation.add_system("Contract " + ready->contract.id + " is ready for activation.");
        bus_.publish({"contract", {{"contract_id", ready->contract.id}, {"state", "Validated"}, {"session_id", session_id}}});
    } else if (auto* nc = std::get_if<pipeline::NeedsClarification>(&result.outcome)) {
        v.status = SessionStatus::AwaitingClarification;
        v.question = nc->question;
        v.conversation.add_system(nc->question);
    } else {
        const auto& rej = std::get<pipeline::Rejected>(result.outcome);
        v.status = SessionStatus::Rejected;
        v.reasons = rej.reasons;
        v.conversation.add_system("The request was rejected.");
    }
    return v;
}

SessionView System::session(const std::string& session_id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw UnknownSession(session_id);
    return it->second;
}

nonrt::ActivationResult System::activate(const std::string& contract_id) {
    std::lock_guard lock(mu_);
    auto res = non_rt_->activate(contract_id);
    if (res.policy && res.status == nonrt::ActivationStatus::Dispatched) {
        for (auto& [id, v] : sessions_) {
            if (v.contract_id == contract_id) v.policy_id = res.policy->policy_id;
        }
    }
    bus_.publish({"contract",
                  {{"contract_id", contract_id},
                   {"state", contract::to_string(registry_.get(contract_id).lifecycle.state)},
                   {"activation", nonrt::to_string(res.status)},
                   {"reason", res.reason}}});
    for (auto& e : pending_) bus_.publish(e);
    pending_.clear();
    return res;
}

void System::stop_policy(const std::string& policy_id, const std::string& reason) {
    std::lock_guard lock(mu_);
    near_rt_->stop_policy(policy_id, reason);
    for (auto& e : pending_) bus_.publish(e);
    pending_.clear();
}

void System::a1_put(const ric::A1Policy& policy) {
    std::lock_guard lock(mu_);
    near_rt_->a1_receive(policy);
    for (auto& e : pending_) bus_.publish(e);
    pending_.clear();
}

void System::a1_delete(const std::string& policy_id) { stop_policy(policy_id, "stopped over A1"); }

std::vector<sim::KpmReport> System::step(const std::function<void(long)>& before) {
    std::lock_guard lock(mu_);
    const long now = sim_.current_tick();
    near_rt_->set_clock(now);
    if (before) before(now);
    auto reports = sim_.tick();
    perf_.ingest_o1(reports, sim_.scenario().tick_s);
    near_rt_->kpimon_ingest(reports);
    near_rt_->on_tick(now);

    for (auto& e : pending_) bus_.publish(e);
    pending_.clear();
    for (const auto& r : reports) {
        json data = sim::kpm_to_json(r);
        auto ratio = sim_.ratio(r.cell_id, r.slice_id);
        data["min_ratio_pct"] = ratio.min_ratio_pct;
        data["max_ratio_pct"] = ratio.max_ratio_pct;
        if (auto p = near_rt_->enforced_on_cell(r.cell_id); p && p->scope.slice_id == r.slice_id) {
            data["target_mbps"] = p->target_throughput_mbps;
            data["policy_id"] = p->policy_id;
        }
        bus_.publish({"kpm", std::move(data)});
    }
    return reports;
}

long System::current_tick() const {
    std::lock_guard lock(mu_);
    return sim_.current_tick();
}

void System::start(std::chrono::milliseconds interval) {
    if (running_.exchange(true)) return;
    ticker_ = std::thread([this, interval] {
        while (running_) {
            step();
            std::unique_lock lock(wake_mu_);
            wake_.wait_for(lock, interval, [&] { return !running_; });
        }
    });
}

void System::stop() {
    if (!running_.exchange(false)) return;
    wake_.notify_all();
    if (ticker_.joinable()) ticker_.join();
}

json System::state() const {
    std::lock_guard lock(mu_);
    json cells = json::array();
    for (const auto& cell : sim_.scenario().cells) {
        json slices = json::array();
        for (const auto& [sid, r] : sim_.cell_ratios(cell.cell_id)) {
            slices.push_back({{"slice_id", sid}, {"min_ratio_pct", r.min_ratio_pct}, {"max_ratio_pct", r.max_ratio_pct}});
        }
        cells.push_back({{"cell_id", cell.cell_id}, {"total_prb", cell.total_prb}, {"slices", slices}});
    }
    json policies = json::array();
    for (const auto& v : near_rt_->policies()) {
        json p = ric::a1_policy_to_json(v.policy);
        p["state"] = ric::to_string(v.policy.state);
        p["enforced_at"] = v.enforced_at;
        p["ended_at"] = v.ended_at ? json(*v.ended_at) : json(nullptr);
        p["paused"] = v.paused;
        policies.push_back(std::move(p));
    }
    return {{"tick", sim_.current_tick()}, {"cells", cells}, {"policies", policies}};
}

std::vector<Marker> System::markers() const {
    std::lock_guard lock(mu_);
    return markers_;
}

}  // namespace caif::gateway

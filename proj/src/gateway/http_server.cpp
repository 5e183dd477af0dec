#include "caif/gateway/http_server.hpp"

#include <httplib.h>

#include "caif/contract/serialize.hpp"

namespace caif::gateway {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& what) {
    send_json(res, status, {{"error", what}});
}

// Maps domain exceptions onto HTTP status codes.
template <typename F>
void guarded(httplib::Response& res, F&& fn) {
    try {
        fn();
    } catch (const UnknownSession& e) {
        send_error(res, 404, e.what());
    } catch (const contract::UnknownContract& e) {
        send_error(res, 404, e.what());
    } catch (const nearrt::UnknownPolicy& e) {
        send_error(res, 404, e.what());
    } catch (const contract::IllegalTransition& e) {
        send_error(res, 409, e.what());
    } catch (const nonrt::ContractNotActivatable& e) {
        send_error(res, 409, e.what());
    } catch (const nearrt::AlreadyTerminal& e) {
        send_error(res, 409, e.what());
    } catch (const json::exception& e) {
        send_error(res, 400, std::string("bad request body: ") + e.what());
    } catch (const std::invalid_argument& e) {
        send_error(res, 400, e.what());
    } catch (const std::exception& e) {
        send_error(res, 500, e.what());
    }
}

json activation_to_json(const nonrt::ActivationResult& r) {
    json out = {{"status", nonrt::to_string(r.status)}, {"contract_id", r.contract_id}, {"reason", r.reason}};
    if (r.policy) out["policy"] = ric::a1_policy_to_json(*r.policy);
    if (r.current_mbps) out["current_mbps"] = *r.current_mbps;
    if (r.target_mbps) out["target_mbps"] = *r.target_mbps;
    if (r.feasibility) {
        out["feasibility"] = {{"feasible", r.feasibility->feasible},
                              {"achievable_max_mbps", r.feasibility->achievable_max_mbps},
                              {"reason", r.feasibility->reason}};
    }
    if (!r.conflicts.empty()) out["conflicts"] = r.conflicts;
    return out;
}

int activation_status_code(nonrt::ActivationStatus s) {
    switch (s) {
        case nonrt::ActivationStatus::Dispatched: return 200;
        case nonrt::ActivationStatus::Rejected: return 422;
        case nonrt::ActivationStatus::DispatchFailed: return 502;
        case nonrt::ActivationStatus::NoData: return 503;
    }
    return 500;
}

}  // namespace

HttpServer::HttpServer(System& system) : system_(system), server_(std::make_unique<httplib::Server>()) {
    routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::routes() {
    auto& s = *server_;
    s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });

    s.Post("/sessions", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] {
            auto id = system_.create_session();
            send_json(res, 201, session_view_to_json(system_.session(id)));
        });
    });

    s.Post(R"(/sessions/([^/]+)/turns)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto body = json::parse(req.body);
            if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
                throw std::invalid_argument("expected {\"text\": string}");
            }
            auto view = system_.add_turn(req.matches[1], body["text"].get<std::string>());
            send_json(res, 200, session_view_to_json(view));
        });
    });

    s.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, session_view_to_json(system_.session(req.matches[1]))); });
    });

    s.Get(R"(/contracts/([^:/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto rec = system_.registry().record(req.matches[1]);
            json out = {{"contract", contract::serialize_contract(rec.contract)},
                        {"state", contract::to_string(rec.contract.lifecycle.state)},
                        {"policy_id", rec.policy_id ? json(*rec.policy_id) : json(nullptr)},
                        {"target_mbps", rec.target_mbps ? json(*rec.target_mbps) : json(nullptr)},
                        {"notes", rec.notes}};
            send_json(res, 200, out);
        });
    });

    s.Post(R"(/contracts/([^:/]+):activate)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto r = system_.activate(req.matches[1]);
            send_json(res, activation_status_code(r.status), activation_to_json(r));
        });
    });

    s.Delete(R"(/policies/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            system_.stop_policy(req.matches[1]);
            auto p = system_.near_rt().policy(req.matches[1]);
            json out = ric::a1_policy_to_json(*p);
            out["state"] = ric::to_string(p->state);
            send_json(res, 200, out);
        });
    });

    s.Get("/policies", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, system_.state().at("policies")); });
    });

    s.Get("/state", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, system_.state()); });
    });

    s.Post("/clock/step", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            long ticks = 1;
            if (!req.body.empty()) ticks = json::parse(req.body).value("ticks", 1L);
            if (ticks < 1 || ticks > 100000) throw std::invalid_argument("ticks must be in 1..100000");
            for (long i = 0; i < ticks; ++i) system_.step();
            send_json(res, 200, {{"tick", system_.current_tick()}});
        });
    });

    s.Put(R"(/a1/policies/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            ric::A1Policy p;
            try {
                p = ric::a1_policy_from_json(json::parse(req.body));
            } catch (const json::exception& e) {
                throw ric::MalformedPolicy(e.what());
            }
            if (p.policy_id != req.matches[1].str()) throw ric::MalformedPolicy("policy id does not match the path");
            system_.a1_put(p);
            send_json(res, 201, {{"policy_id", p.policy_id}, {"state", "Enforced"}});
        });
    });

    s.Delete(R"(/a1/policies/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            system_.a1_delete(req.matches[1]);
            send_json(res, 200, {{"policy_id", req.matches[1].str()}, {"state", "Stopped"}});
        });
    });

    s.Get("/metrics/stream", [this](const httplib::Request& req, httplib::Response& res) {
        long limit = -1;
        if (req.has_param("limit")) {
            try {
                limit = std::stol(req.get_param_value("limit"));
            } catch (const std::exception&) {
                send_error(res, 400, "limit must be an integer");
                return;
            }
        }
        auto sub = system_.events().subscribe();
        auto sent = std::make_shared<long>(0);
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider(
            "text/event-stream",
            [sub, limit, sent](std::size_t, httplib::DataSink& sink) {
                auto e = sub->next(std::chrono::milliseconds(250));
                if (!e) {
                    if (sub->closed()) {
                        sink.done();
                        return true;
                    }
                    static const std::string keepalive = ": keepalive\n\n";
                    return sink.write(keepalive.data(), keepalive.size());
                }
                std::string msg = "event: " + e->type + "\ndata: " + e->data.dump() + "\n\n";
                if (!sink.write(msg.data(), msg.size())) return false;
                if (limit > 0 && ++*sent >= limit) sink.done();
                return true;
            },
            [sub](bool) { sub->close(); });
    });
}

bool HttpServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

int HttpServer::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool HttpServer::listen_after_bind() { return server_->listen_after_bind(); }

void HttpServer::stop() {
    system_.events().close_all();
    if (server_->is_running()) server_->stop();
}

bool HttpServer::is_running() const { return server_->is_running(); }

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace caif::gateway

#include "vsp/service.hpp"

#include <atomic>
#include <csignal>
#include <cstdio>
#include <random>
#include <thread>

#include <httplib.h>

namespace vsp {

using nlohmann::json;

std::string new_session_id() {
    static std::mutex m;
    static std::random_device device;
    std::lock_guard lock(m);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%08x%08x%08x%08x", device(), device(), device(), device());
    return buf;
}

SessionStore::SessionStore(std::chrono::seconds ttl, std::function<Clock::time_point()> now)
    : ttl_(ttl), now_(std::move(now)) {}

std::string SessionStore::create() {
    auto slot = std::make_shared<Slot>();
    std::lock_guard lock(mutex_);
    std::string id;
    do { id = new_session_id(); } while (slots_.contains(id));
    slot->session = Session(id);
    slot->last_used = now_();
    slots_.emplace(id, std::move(slot));
    return id;
}

std::shared_ptr<SessionStore::Slot> SessionStore::find(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = slots_.find(id);
    if (it == slots_.end()) return nullptr;
    if (now_() - it->second->last_used > ttl_) {
        slots_.erase(it);
        return nullptr;
    }
    it->second->last_used = now_();
    return it->second;
}

bool SessionStore::exists(const std::string& id) { return find(id) != nullptr; }

bool SessionStore::with_session(const std::string& id, const std::function<void(Session&)>& fn) {
    auto slot = find(id);
    if (!slot) return false;
    std::lock_guard turn(slot->turn_lock);
    fn(slot->session);
    return true;
}

std::size_t SessionStore::evict_expired() {
    std::lock_guard lock(mutex_);
    const auto now = now_();
    return std::erase_if(slots_, [&](const auto& kv) { return now - kv.second->last_used > ttl_; });
}

std::size_t SessionStore::size() {
    std::lock_guard lock(mutex_);
    return slots_.size();
}

json transcript_json(const Session& session) {
    json turns = json::array();
    for (const auto& t : session.transcript) {
        json entry = t.response.to_json();
        entry["question"] = t.question;
        turns.push_back(std::move(entry));
    }
    return {{"schema_version", kApiSchemaVersion}, {"session_id", session.id}, {"turns", std::move(turns)}};
}

namespace {

void reply(httplib::Response& res, int status, json body) {
    body["schema_version"] = kApiSchemaVersion;
    res.status = status;
    res.set_content(body.dump(), "application/json; charset=utf-8");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply(res, status, {{"error", message}});
}

std::atomic<httplib::Server*> g_running{nullptr};

void on_signal(int) {
    if (auto* s = g_running.load()) s->stop();
}

}  // namespace

void install_routes(httplib::Server& server, const Engine& engine, SessionStore& sessions,
                    const ServiceOptions& options) {
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});

    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { reply(res, 200, {{"status", "ok"}}); });

    server.Post("/v1/sessions", [&sessions](const httplib::Request&, httplib::Response& res) {
        sessions.evict_expired();
        reply(res, 201, {{"session_id", sessions.create()}});
    });

    server.Post(R"(/v1/sessions/([^/]+)/messages)", [&engine, &sessions](const httplib::Request& req,
                                                                          httplib::Response& res) {
        const std::string id = req.matches[1];
        json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("text") || !body.at("text").is_string())
            return reply_error(res, 400, "request body must be a JSON object with a string field \"text\"");
        const auto text = body.at("text").get<std::string>();
        json out;
        const bool found = sessions.with_session(id, [&](Session& s) { out = engine.handle(s, text).to_json(); });
        if (!found) return reply_error(res, 404, "unknown session " + id);
        reply(res, 200, std::move(out));
    });

    auto transcript = [&sessions](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        json out;
        if (!sessions.with_session(id, [&](Session& s) { out = transcript_json(s); }))
            return reply_error(res, 404, "unknown session " + id);
        reply(res, 200, std::move(out));
    };
    server.Get(R"(/v1/sessions/([^/]+)/transcript)", transcript);
    server.Get(R"(/v1/sessions/([^/]+)/messages)", transcript);
}

bool run_service(const Engine& engine, SessionStore& sessions, const ServiceOptions& options, const std::string& host,
                 int port) {
    httplib::Server server;
    install_routes(server, engine, sessions, options);
    g_running = &server;
    auto previous_int = std::signal(SIGINT, on_signal);
    auto previous_term = std::signal(SIGTERM, on_signal);
    const bool ok = server.listen(host, port);
    std::signal(SIGINT, previous_int);
    std::signal(SIGTERM, previous_term);
    g_running = nullptr;
    return ok;
}

}  // namespace vsp

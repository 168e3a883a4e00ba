#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "vsp/dialogue.hpp"

namespace httplib {
class Server;
}

namespace vsp {

inline constexpr int kApiSchemaVersion = 1;

/// In-memory sessions with idle-TTL eviction. Turns within one session are
/// serialized by a per-session mutex; distinct sessions proceed concurrently.
class SessionStore {
public:
    using Clock = std::chrono::steady_clock;

    explicit SessionStore(std::chrono::seconds ttl = std::chrono::hours(2),
                          std::function<Clock::time_point()> now = Clock::now);

    std::string create();
    bool exists(const std::string& id);

    /// Runs `fn` on the session under its turn lock. Returns false for an
    /// unknown or expired id.
    bool with_session(const std::string& id, const std::function<void(Session&)>& fn);

    /// Drops sessions idle for longer than the TTL; returns how many.
    std::size_t evict_expired();
    std::size_t size();

private:
    struct Slot {
        std::mutex turn_lock;
        Session session;
        Clock::time_point last_used;
    };
    std::shared_ptr<Slot> find(const std::string& id);

    std::chrono::seconds ttl_;
    std::function<Clock::time_point()> now_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Slot>> slots_;
};

std::string new_session_id();

struct ServiceOptions {
    std::string cors_origin = "*";
};

nlohmann::json transcript_json(const Session& session);

/// Registers the /v1 and /healthz routes on `server`.
void install_routes(httplib::Server& server, const Engine& engine, SessionStore& sessions,
                    const ServiceOptions& options = {});

/// Blocks serving until SIGINT/SIGTERM. Returns false if
/// the address cannot be bound.
bool run_service(const Engine& engine, SessionStore& sessions, const ServiceOptions& options,
                 const std::string& host, int port);

}  // namespace vsp

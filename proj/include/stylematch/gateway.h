#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "stylematch/dialogue.h"
#include "stylematch/pipeline.h"

namespace stylematch {

inline constexpr int kDefaultPort = 8080;
inline constexpr const char* kTurnResponseSchema = "stylematch.turn/1";

// Session-oriented HTTP front end over the pipeline. The handler methods are
// transport-independent and are what the HTTP routes call.
class Gateway {
public:
    using Clock = std::chrono::steady_clock;

    struct Options {
        std::chrono::seconds idle_timeout{30 * 60};
        std::string cors_origin = "*";
        SessionConfig defaults;  // base for every new session
        std::function<Clock::time_point()> now = [] { return Clock::now(); };
    };

    struct Response {
        int status = 200;
        nlohmann::json body;
    };

    Gateway(PackRegistry packs, Options options);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    Response create_session(const std::string& body);
    Response post_turn(const std::string& session_id, const std::string& body);
    Response get_session(const std::string& session_id);
    Response list_tasks() const;
    Response health() const;

    // Drops sessions idle longer than the timeout; returns how many.
    std::size_t evict_idle();
    std::size_t session_count() const;

    // Called while a turn is in flight (after the 409 guard is taken).
    // Test seam for the one-turn-at-a-time contract.
    void set_turn_hook(std::function<void(const std::string&)> hook);

    // HTTP lifecycle. bind() returns the bound port (port 0 picks one).
    int bind(const std::string& host, int port);
    void listen();  // blocks until stop()
    void stop();
    void wait_until_ready() const;

private:
    struct Entry {
        explicit Entry(Session s, Clock::time_point t) : session(std::move(s)), created_at(t), last_active(t) {}
        Session session;
        std::mutex mutex;
        std::atomic<bool> in_flight{false};
        Clock::time_point created_at;
        Clock::time_point last_active;  // guarded by Gateway::mutex_
    };

    std::shared_ptr<Entry> find(const std::string& id);
    std::string new_session_id();

    PackRegistry packs_;
    Options options_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::function<void(const std::string&)> turn_hook_;
    std::uint64_t id_counter_ = 0;

    struct Http;
    std::unique_ptr<Http> http_;
};

// Port from $STYLEMATCH_PORT, else kDefaultPort.
int port_from_env();

}  // namespace stylematch

#include "stylematch/gateway.h"

#include <cstdlib>
#include <random>
#include <sstream>

#include <httplib.h>

#include "stylematch/error.h"
#include "stylematch/serialize.h"

namespace stylematch {

using json = nlohmann::json;

namespace {

Gateway::Response error_response(int status, const std::string& code, const std::string& message) {
    return {status, {{"error", code}, {"message", message}}};
}

std::optional<json> parse_body(const std::string& body, Gateway::Response& err) {
    try {
        json j = json::parse(body.empty() ? "{}" : body);
        if (!j.is_object()) {
            err = error_response(400, "bad_request", "body must be a JSON object");
            return std::nullopt;
        }
        return j;
    } catch (const json::parse_error& e) {
        err = error_response(400, "bad_request", std::string("invalid JSON: ") + e.what());
        return std::nullopt;
    }
}

}  // namespace

struct Gateway::Http {
    httplib::Server server;
};

Gateway::Gateway(PackRegistry packs, Options options)
    : packs_(std::move(packs)), options_(std::move(options)), http_(std::make_unique<Http>()) {
    auto send = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
    };
    auto& svr = http_->server;
    svr.set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type"}});
    svr.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    svr.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
    svr.Get("/api/tasks", [this, send](const httplib::Request&, httplib::Response& res) { send(res, list_tasks()); });
    svr.Post("/api/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, create_session(req.body));
    });
    svr.Post(R"(/api/sessions/([^/]+)/turns)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, post_turn(req.matches[1], req.body));
    });
    svr.Get(R"(/api/sessions/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, get_session(req.matches[1]));
    });
}

Gateway::~Gateway() { stop(); }

std::string Gateway::new_session_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::ostringstream ss;
    ss << std::hex << rng() << rng() << '-' << ++id_counter_;
    return ss.str();
}

Gateway::Response Gateway::create_session(const std::string& body) {
    Response err;
    const auto req = parse_body(body, err);
    if (!req) return err;

    std::string task;
    if (req->contains("task_id") && (*req)["task_id"].is_string()) {
        task = (*req)["task_id"].get<std::string>();
    } else if (req->contains("task") && (*req)["task"].is_string()) {
        task = (*req)["task"].get<std::string>();
    } else {
        return error_response(400, "bad_request", "'task_id' (or 'task') is required");
    }
    auto pack = packs_.find(task);
    if (!pack) return error_response(404, "unknown_task", "no task pack named '" + task + "'");

    if (!req->contains("condition") || !(*req)["condition"].is_string()) {
        return error_response(400, "invalid_condition", "'condition' must be 'matching' or 'control'");
    }

    SessionConfig cfg = options_.defaults;
    try {
        cfg.condition = parse_condition((*req)["condition"].get<std::string>());
    } catch (const InvalidArgument& e) {
        return error_response(400, "invalid_condition", e.what());
    }
    cfg.task_id = task;
    try {
        if (req->contains("overrides") && !(*req)["overrides"].is_null()) {
            json overrides = (*req)["overrides"];
            if (!overrides.is_object()) return error_response(400, "bad_request", "'overrides' must be an object");
            if (overrides.contains("condition") || overrides.contains("task_id")) {
                return error_response(400, "bad_request", "condition and task are fixed at the top level");
            }
            cfg = apply_config_json(cfg, overrides);
        }
        validate(cfg);
    } catch (const Error& e) {
        return error_response(400, "bad_request", e.what());
    }

    const auto now = options_.now();
    std::lock_guard lock(mutex_);
    std::string id;
    do {
        id = new_session_id();
    } while (sessions_.count(id));
    auto entry = std::make_shared<Entry>(Session(cfg, pack), now);
    json config = to_json(entry->session.state().config);
    sessions_.emplace(id, std::move(entry));
    return {201, {{"session_id", id}, {"config", config}}};
}

std::shared_ptr<Gateway::Entry> Gateway::find(const std::string& id) {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    it->second->last_active = options_.now();
    return it->second;
}

Gateway::Response Gateway::post_turn(const std::string& session_id, const std::string& body) {
    evict_idle();
    auto entry = find(session_id);
    if (!entry) return error_response(404, "unknown_session", "no session '" + session_id + "'");

    Response err;
    const auto req = parse_body(body, err);
    if (!req) return err;
    if (!req->contains("text") || !(*req)["text"].is_string()) {
        return error_response(400, "empty_text", "'text' must be a non-empty string");
    }
    std::optional<AcousticFeatures> acoustics;
    try {
        if (req->contains("acoustics") && !(*req)["acoustics"].is_null()) {
            acoustics = acoustics_from_json((*req)["acoustics"]);
        }
    } catch (const Error& e) {
        return error_response(400, "bad_acoustics", e.what());
    }

    if (entry->in_flight.exchange(true)) {
        return error_response(409, "turn_in_flight", "a turn for this session is already being processed");
    }
    struct Release {
        std::atomic<bool>& flag;
        ~Release() { flag = false; }
    } release{entry->in_flight};

    std::function<void(const std::string&)> hook;
    {
        std::lock_guard lock(mutex_);
        hook = turn_hook_;
    }
    std::lock_guard session_lock(entry->mutex);
    if (hook) hook(session_id);
    try {
        const Turn& turn = entry->session.process_turn((*req)["text"].get<std::string>(), acoustics);
        {
            std::lock_guard lock(mutex_);
            entry->last_active = options_.now();
        }
        const json t = to_json(turn);
        const json& d = t["diagnostics"];
        return {200,
                {{"schema_version", kTurnResponseSchema},
                 {"session_id", session_id},
                 {"turn_index", turn.index},
                 {"agent_text", turn.text},
                 {"ssml", *turn.ssml},
                 {"user_style", to_json(entry->session.state().transcript.rbegin()[1].style)},
                 {"diagnostics",
                  {{"intent_id", d["intent_id"]},
                   {"prosody_target", d["prosody_target"]},
                   {"window_style", d["window_style"]},
                   {"candidate_distances", d["candidate_distances"]},
                   {"candidates", d["candidates"]},
                   {"selected_rank", d["selected_rank"]},
                   {"prosody_delta", d["prosody_delta"]}}}}};
    } catch (const InvalidArgument& e) {
        return error_response(400, "empty_text", e.what());
    } catch (const Error& e) {
        return error_response(500, "turn_failed", e.what());
    }
}

Gateway::Response Gateway::get_session(const std::string& session_id) {
    evict_idle();
    auto entry = find(session_id);
    if (!entry) return error_response(404, "unknown_session", "no session '" + session_id + "'");
    std::lock_guard lock(entry->mutex);
    return {200, session_record(entry->session.state())};
}

Gateway::Response Gateway::list_tasks() const {
    json tasks = json::array();
    for (const auto& id : packs_.task_ids()) {
        const auto pack = packs_.find(id);
        tasks.push_back({{"task_id", id},
                         {"description", pack->description},
                         {"intent_count", pack->intents.size()},
                         {"corpus_size", pack->response_corpus.size()}});
    }
    return {200, {{"tasks", tasks}}};
}

Gateway::Response Gateway::health() const {
    return {200, {{"status", "ok"}, {"sessions", session_count()}, {"tasks", packs_.task_ids().size()}}};
}

std::size_t Gateway::evict_idle() {
    const auto now = options_.now();
    std::lock_guard lock(mutex_);
    std::size_t removed = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        auto& e = *it->second;
        if (!e.in_flight && now - e.last_active > options_.idle_timeout) {
            it = sessions_.erase(it);
            ++removed;
        } else {
            ++it;
        }
    }
    return removed;
}

std::size_t Gateway::session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

void Gateway::set_turn_hook(std::function<void(const std::string&)> hook) {
    std::lock_guard lock(mutex_);
    turn_hook_ = std::move(hook);
}

int Gateway::bind(const std::string& host, int port) {
    if (port == 0) return http_->server.bind_to_any_port(host);
    if (!http_->server.bind_to_port(host, port)) return -1;
    return port;
}

void Gateway::listen() { http_->server.listen_after_bind(); }

void Gateway::stop() {
    if (http_ && http_->server.is_running()) http_->server.stop();
}

void Gateway::wait_until_ready() const { http_->server.wait_until_ready(); }

int port_from_env() {
    if (const char* env = std::getenv("STYLEMATCH_PORT"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
    }
    return kDefaultPort;
}

}  // namespace stylematch

#include "server.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <iostream>
#include <mutex>
#include <vector>

namespace generec_tools {
namespace {

using nlohmann::json;

std::atomic<httplib::Server*> g_server{nullptr};

int http_status(generec_status st)
{
    switch (st) {
    case GENEREC_OK: return 200;
    case GENEREC_ERR_NOT_FOUND: return 404;
    case GENEREC_ERR_UNSERVED: return 409;
    case GENEREC_ERR_PARSE: return 422;
    case GENEREC_ERR_CONFIG:
    case GENEREC_ERR_DATA:
    case GENEREC_ERR_INVALID_ARGUMENT: return 400;
    default: return 500;
    }
}

void send_error(httplib::Response& res, int status, const std::string& body)
{
    res.status = status;
    res.set_content(body, "application/json");
}

void send_bad_request(httplib::Response& res, const std::string& message)
{
    send_error(res, 400, json{{"status", "invalid_argument"}, {"code", "InvalidArgument"}, {"message", message}}.dump());
}

// Calls into the C API and turns the result into an HTTP response.
template <class F>
void reply(httplib::Response& res, F&& call)
{
    char* out = nullptr;
    const generec_status st = call(&out);
    if (st == GENEREC_OK) {
        res.status = 200;
        res.set_content(out ? out : "{}", "application/json");
    } else {
        send_error(res, http_status(st), generec_last_error_json());
    }
    generec_free(out);
}

std::optional<json> body_json(const httplib::Request& req, httplib::Response& res)
{
    if (req.body.empty()) return json::object();
    try {
        json j = json::parse(req.body);
        if (j.is_object()) return j;
    } catch (const json::exception&) {
    }
    send_bad_request(res, "request body must be a JSON object");
    return std::nullopt;
}

std::optional<std::string> string_field(const json& body, const char* key, httplib::Response& res, bool required)
{
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) {
        if (required) send_bad_request(res, std::string("missing field '") + key + "'");
        return std::nullopt;
    }
    if (!it->is_string()) {
        send_bad_request(res, std::string("field '") + key + "' must be a string");
        return std::nullopt;
    }
    return it->get<std::string>();
}

bool parse_k(const httplib::Request& req, httplib::Response& res, int& k)
{
    k = 0;
    if (!req.has_param("k")) return true;
    try {
        std::size_t used = 0;
        const std::string v = req.get_param_value("k");
        k = std::stoi(v, &used);
        if (used == v.size() && k > 0 && k <= 1000) return true;
    } catch (const std::exception&) {
    }
    send_bad_request(res, "k must be an integer in [1, 1000]");
    return false;
}

}  // namespace

int serve(generec_engine* engine, const ServeOptions& options, const std::function<void(int)>& on_listen)
{
    httplib::Server server;
    std::mutex ids_mutex;
    std::vector<std::string> session_ids;

    server.Post("/api/session", [&](const httplib::Request& req, httplib::Response& res) {
        auto body = body_json(req, res);
        if (!body) return;
        std::optional<std::string> user;
        if (body->contains("user_id")) {
            user = string_field(*body, "user_id", res, false);
            if (!user && res.status == 400) return;
        }
        char* out = nullptr;
        const generec_status st = generec_session_create(engine, user ? user->c_str() : nullptr, &out);
        if (st == GENEREC_OK) {
            const auto created = json::parse(out);
            std::lock_guard lock(ids_mutex);
            session_ids.push_back(created.at("session_id").get<std::string>());
            res.set_content(out, "application/json");
        } else {
            send_error(res, http_status(st), generec_last_error_json());
        }
        generec_free(out);
    });

    server.Get(R"(/api/session/([^/]+)/feed)", [&](const httplib::Request& req, httplib::Response& res) {
        int k = 0;
        if (!parse_k(req, res, k)) return;
        const std::string sid = req.matches[1];
        reply(res, [&](char** out) { return generec_session_feed(engine, sid.c_str(), k, out); });
    });

    server.Post(R"(/api/session/([^/]+)/feedback)", [&](const httplib::Request& req, httplib::Response& res) {
        auto body = body_json(req, res);
        if (!body) return;
        auto item = string_field(*body, "item_id", res, true);
        if (!item) return;
        auto signal = string_field(*body, "signal", res, true);
        if (!signal) return;
        const std::string sid = req.matches[1];
        reply(res, [&](char** out) {
            return generec_session_feedback(engine, sid.c_str(), item->c_str(), signal->c_str(), out);
        });
    });

    server.Post(R"(/api/session/([^/]+)/instruction)", [&](const httplib::Request& req, httplib::Response& res) {
        auto body = body_json(req, res);
        if (!body) return;
        auto text = string_field(*body, "text", res, true);
        if (!text) return;
        int k = 0;
        if (!parse_k(req, res, k)) return;
        const std::string sid = req.matches[1];
        reply(res, [&](char** out) { return generec_session_instruction(engine, sid.c_str(), text->c_str(), k, out); });
    });

    server.Get(R"(/api/session/([^/]+)/profile)", [&](const httplib::Request& req, httplib::Response& res) {
        const std::string sid = req.matches[1];
        reply(res, [&](char** out) { return generec_session_profile(engine, sid.c_str(), out); });
    });

    server.Get(R"(/api/item/([^/]+)/frames)", [&](const httplib::Request& req, httplib::Response& res) {
        const std::string item = req.matches[1];
        const std::string sid = req.has_param("session") ? req.get_param_value("session") : std::string();
        reply(res, [&](char** out) {
            return generec_item_frames(engine, item.c_str(), sid.empty() ? nullptr : sid.c_str(), out);
        });
    });

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty())
            res.set_content(json{{"status", "not_found"}, {"code", "NotFound"}, {"message", "no such route"}}.dump(),
                            "application/json");
    });

    int port = options.port;
    if (port == 0) {
        port = server.bind_to_any_port(options.host);
    } else if (!server.bind_to_port(options.host, port)) {
        port = -1;
    }
    if (port < 0) {
        std::cerr << "error: cannot bind " << options.host << ":" << options.port << "\n";
        return 3;
    }
    g_server = &server;
    if (on_listen) on_listen(port);
    server.listen_after_bind();
    g_server = nullptr;

    int rc = 0;
    if (options.session_dir) {
        std::lock_guard lock(ids_mutex);
        for (const auto& sid : session_ids) {
            const auto dir = *options.session_dir / sid;
            if (generec_session_save(engine, sid.c_str(), dir.c_str(), options.promote ? 1 : 0) != GENEREC_OK) {
                std::cerr << "error: saving " << sid << ": " << generec_last_error() << "\n";
                rc = 3;
            }
        }
    }
    return rc;
}

void stop_server()
{
    if (auto* s = g_server.load()) s->stop();
}

}  // namespace generec_tools

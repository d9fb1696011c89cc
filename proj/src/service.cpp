//*****************************************************************************
// Copyright 2026 The directmanip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//*****************************************************************************

#include "directmanip/service.hpp"

#include <fstream>
#include <random>

#include <httplib.h>

#include "directmanip/utf8.hpp"
#include "directmanip/wire.hpp"

namespace directmanip {

using nlohmann::json;

Session::Session(std::string id, Document document, std::shared_ptr<const Backend> backend,
                 EngineConfig config)
    : id_(std::move(id)), workspace_(std::move(document), std::move(backend), std::move(config)) {}

void Session::log(std::string kind, std::string summary) {
    std::lock_guard lock(log_mutex_);
    events_.push_back({std::chrono::system_clock::now(), std::move(kind), std::move(summary)});
}

std::vector<Event> Session::events() const {
    std::lock_guard lock(log_mutex_);
    return events_;
}

int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::NotSvg:
        return 400;
    case ErrorCode::UnknownTool:
        return 404;
    case ErrorCode::Busy:
    case ErrorCode::Cancelled:
        return 409;
    case ErrorCode::Timeout:
        return 504;
    case ErrorCode::RemoteError:
    case ErrorCode::NoRuleMatched:
    case ErrorCode::InvalidResponse:
    case ErrorCode::EmptyPayload:
    case ErrorCode::SvgNotFound:
        return 502;
    case ErrorCode::InvalidConfig:
    case ErrorCode::FileNotFound:
    case ErrorCode::FormatError:
        return 500;
    default:
        return 422;
    }
}

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump()}; }

HttpResponse error_response(int status, std::string_view code, std::string_view message) {
    return json_response(status, {{"error", code}, {"message", message}});
}

HttpResponse error_response(const Error& e) {
    return error_response(http_status(e.code()), to_string(e.code()), e.what());
}

std::vector<std::string_view> split_path(std::string_view path) {
    if (const auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        const std::size_t begin = i;
        while (i < path.size() && path[i] != '/') ++i;
        if (i > begin) parts.push_back(path.substr(begin, i - begin));
    }
    return parts;
}

json parse_body(std::string_view body) {
    if (utf8::trim(body).empty()) return json::object();
    auto parsed = json::parse(body);
    if (!parsed.is_object()) throw json::type_error::create(302, "request body must be a JSON object", nullptr);
    return parsed;
}

json history_view(const Workspace& ws) {
    return {{"canUndo", ws.can_undo()}, {"canRedo", ws.can_redo()}};
}

json session_view(const Session& session) {
    const auto& ws = session.workspace();
    json toolbar = json::array();
    for (const auto& tool : ws.tools()) toolbar.push_back(wire::to_json(tool));
    json log = json::array();
    for (const auto& e : session.events()) {
        log.push_back({{"timestamp", wire::iso8601(e.timestamp)}, {"kind", e.kind}, {"summary", e.summary}});
    }
    return {{"id", session.id()},
            {"document", wire::to_json(ws.document())},
            {"toolbar", std::move(toolbar)},
            {"history", history_view(ws)},
            {"busy", ws.busy()},
            {"eventLog", std::move(log)}};
}

std::string summarize(const ComposedPrompt& prompt) {
    return utf8::truncate(tool_label(prompt), 60, "...");
}

}  // namespace

Service::Service(std::shared_ptr<const Backend> backend, EngineConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {}

std::string Service::next_session_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%012llx%04llx",
                  static_cast<unsigned long long>(rng() & 0xFFFFFFFFFFFFull),
                  static_cast<unsigned long long>(counter_.fetch_add(1) & 0xFFFF));
    return buf;
}

std::shared_ptr<Session> Service::find(std::string_view id) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::size_t Service::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

HttpResponse Service::handle(std::string_view method, std::string_view path,
                             std::string_view body) {
    try {
        const auto parts = split_path(path);
        if (parts.empty() || parts[0] != "sessions") {
            return error_response(404, "NotFound", "no such route");
        }
        if (parts.size() == 1) {
            if (method == "POST") return create_session(body);
            if (method == "GET") {
                json ids = json::array();
                std::shared_lock lock(sessions_mutex_);
                for (const auto& [id, session] : sessions_) ids.push_back(id);
                return json_response(200, {{"sessions", std::move(ids)}});
            }
            return error_response(405, "MethodNotAllowed", "use GET or POST");
        }
        auto session = find(parts[1]);
        if (!session) {
            return error_response(404, "UnknownSession",
                                  "no session \"" + std::string(parts[1]) + "\"");
        }
        const std::vector<std::string_view> rest(parts.begin() + 2, parts.end());
        return session_request(*session, method, rest, body);
    } catch (const Error& e) {
        return error_response(e);
    } catch (const json::exception& e) {
        return error_response(400, "BadRequest", e.what());
    }
}

HttpResponse Service::create_session(std::string_view body) {
    const auto request = parse_body(body);
    if (!request.contains("kind") || !request["kind"].is_string()) {
        return error_response(400, "BadRequest", "\"kind\" must be \"text\" or \"svg\"");
    }
    const auto kind = request["kind"].get<std::string>();
    std::string content;
    if (request.contains("content")) {
        if (!request["content"].is_string()) {
            return error_response(400, "BadRequest", "\"content\" must be a string");
        }
        content = request["content"].get<std::string>();
    }
    Document doc;
    if (kind == "text") doc = Document::text(std::move(content));
    else if (kind == "svg") doc = Document::svg(content);
    else return error_response(400, "BadRequest", "\"kind\" must be \"text\" or \"svg\"");

    auto id = next_session_id();
    auto session = std::make_shared<Session>(id, std::move(doc), backend_, config_);
    session->log("create", std::string(to_string(session->workspace().document().kind())) +
                               " document, " +
                               std::to_string(session->workspace().document().content().size()) +
                               " bytes");
    {
        std::unique_lock lock(sessions_mutex_);
        sessions_.emplace(id, session);
    }
    return json_response(201, session_view(*session));
}

HttpResponse Service::session_request(Session& session, std::string_view method,
                                      const std::vector<std::string_view>& rest,
                                      std::string_view body) {
    auto& ws = session.workspace();
    const std::string route = rest.empty() ? "view" : std::string(rest.front());

    auto logged = [&](HttpResponse response, std::string summary) {
        session.log(route, std::to_string(response.status) + " " + summary);
        return response;
    };

    try {
        if (rest.empty()) {
            if (method != "GET") return logged(error_response(405, "MethodNotAllowed", "use GET"), "");
            session.log(route, "200");
            return json_response(200, session_view(session));
        }
        if (method != "POST") {
            return logged(error_response(405, "MethodNotAllowed", "use POST"), "");
        }

        if (rest.size() == 1 && (rest[0] == "prompts" || rest[0] == "preview")) {
            const auto request = parse_body(body);
            const auto doc = ws.document();
            const auto prompt = wire::prompt_from_json(
                request.contains("segments") ? request["segments"] : json::array(), doc);
            const auto selection = wire::selection_from_json(
                request.contains("selection") ? request["selection"] : json(nullptr));
            if (rest[0] == "preview") {
                json targets = json::array();
                for (const auto& ref : ws.preview(prompt, selection)) targets.push_back(wire::to_json(ref));
                return logged(json_response(200, {{"targets", std::move(targets)}}), summarize(prompt));
            }
            const auto result = ws.execute(prompt, selection);
            return logged(json_response(200, wire::to_json(result, ws.tools())),
                          summarize(prompt) + " -> v" + std::to_string(result.document.version()));
        }

        if (rest.size() == 3 && rest[0] == "tools" && rest[2] == "invoke") {
            const auto request = parse_body(body);
            std::vector<ObjectRef> nouns;
            if (request.contains("nouns")) nouns = wire::selection_from_json(request["nouns"]).refs;
            const auto result = ws.invoke_tool(rest[1], nouns);
            return logged(json_response(200, wire::to_json(result, ws.tools())),
                          std::string(rest[1]) + " -> v" + std::to_string(result.document.version()));
        }

        if (rest.size() == 1 && (rest[0] == "undo" || rest[0] == "redo")) {
            const auto doc = rest[0] == "undo" ? ws.undo() : ws.redo();
            return logged(json_response(200, {{"document", wire::to_json(doc)},
                                              {"history", history_view(ws)}}),
                          "v" + std::to_string(doc.version()));
        }

        if (rest.size() == 1 && rest[0] == "cancel") {
            const bool fired = ws.cancel();
            return logged({204, ""}, fired ? "cancelled in-flight operation" : "idle");
        }
        return logged(error_response(404, "NotFound", "no such route"), "");
    } catch (const Error& e) {
        return logged(error_response(e), std::string(to_string(e.code())));
    } catch (const json::exception& e) {
        return logged(error_response(400, "BadRequest", e.what()), "BadRequest");
    }
}

void Service::bind(httplib::Server& server) {
    auto adapter = [this](const httplib::Request& req, httplib::Response& res) {
        const auto response = handle(req.method, req.path, req.body);
        res.status = response.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        if (!response.body.empty()) res.set_content(response.body, "application/json");
    };
    server.Get(R"(/.*)", adapter);
    server.Post(R"(/.*)", adapter);
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
}

void Service::snapshot_to(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::vector<std::shared_ptr<Session>> sessions;
    {
        std::shared_lock lock(sessions_mutex_);
        for (const auto& [id, session] : sessions_) sessions.push_back(session);
    }
    for (const auto& session : sessions) {
        std::ofstream out(dir / (session->id() + ".json"), std::ios::binary | std::ios::trunc);
        out << session_view(*session).dump(2) << '\n';
    }
}

}  // namespace directmanip

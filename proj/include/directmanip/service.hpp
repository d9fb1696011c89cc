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

#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "directmanip/backend.hpp"
#include "directmanip/error.hpp"
#include "directmanip/orchestrator.hpp"

namespace httplib {
class Server;
}

namespace directmanip {

struct HttpResponse {
    int status = 200;
    std::string body;  // JSON, or empty for 204
};

struct Event {
    std::chrono::system_clock::time_point timestamp;
    std::string kind;
    std::string summary;
};

// One editing context exposed over HTTP.
class Session {
public:
    Session(std::string id, Document document, std::shared_ptr<const Backend> backend,
            EngineConfig config);

    const std::string& id() const noexcept { return id_; }
    Workspace& workspace() noexcept { return workspace_; }
    const Workspace& workspace() const noexcept { return workspace_; }

    void log(std::string kind, std::string summary);
    std::vector<Event> events() const;

private:
    std::string id_;
    Workspace workspace_;
    mutable std::mutex log_mutex_;
    std::vector<Event> events_;
};

int http_status(ErrorCode code);

// Routes JSON requests onto sessions. Transport-independent so it can be
// driven directly in tests; `bind` attaches it to an httplib server.
class Service {
public:
    Service(std::shared_ptr<const Backend> backend, EngineConfig config = {});

    HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

    void bind(httplib::Server& server);

    // Writes one JSON file per session into `dir`.
    void snapshot_to(const std::filesystem::path& dir) const;

    std::size_t session_count() const;

private:
    std::shared_ptr<Session> find(std::string_view id) const;
    HttpResponse create_session(std::string_view body);
    HttpResponse session_request(Session& session, std::string_view method,
                                 const std::vector<std::string_view>& rest, std::string_view body);
    std::string next_session_id();

    std::shared_ptr<const Backend> backend_;
    EngineConfig config_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
    std::atomic<std::uint64_t> counter_{0};
};

}  // namespace directmanip

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

#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "directmanip/backend.hpp"
#include "directmanip/error.hpp"
#include "directmanip/service.hpp"

namespace {

httplib::Server* g_server = nullptr;

void stop_server(int) {
    if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"directmanip: direct-manipulation editing service for LLM-backed documents"};

    std::string host = "127.0.0.1";
    int port = 8787;
    std::string backend = "mock";
    std::string mock_rules;
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    std::string endpoint = "https://api.openai.com/v1";
    long timeout_ms = 60'000;
    std::string snapshot_dir;

    app.add_option("--host", host, "Address to listen on")->capture_default_str();
    app.add_option("--port", port, "Port to listen on")->capture_default_str()->check(CLI::Range(1, 65535));
    app.add_option("--backend", backend, "LLM backend")
        ->capture_default_str()
        ->check(CLI::IsMember({"mock", "remote"}));
    app.add_option("--mock-rules", mock_rules, "Rules file for the mock backend")->check(CLI::ExistingFile);
    app.add_option("--model", model, "Model name sent to the backend")->capture_default_str();
    app.add_option("--temperature", temperature, "Sampling temperature")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 2.0));
    app.add_option("--endpoint", endpoint, "Chat-completions base url (remote backend)")
        ->capture_default_str();
    app.add_option("--timeout-ms", timeout_ms, "Per-request timeout")->capture_default_str();
    app.add_option("--snapshot-dir", snapshot_dir, "Write one JSON file per session on shutdown");

    CLI11_PARSE(app, argc, argv);

    directmanip::BackendConfig config;
    config.mode = backend == "remote" ? directmanip::BackendMode::Remote
                                      : directmanip::BackendMode::Mock;
    config.endpoint_url = endpoint;
    config.api_key = directmanip::api_key_from_environment();
    config.model = model;
    config.temperature = temperature;
    config.timeout = std::chrono::milliseconds(timeout_ms);
    config.mock_rules_path = mock_rules;

    std::shared_ptr<const directmanip::Backend> llm;
    try {
        llm = directmanip::make_backend(config);
    } catch (const directmanip::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    directmanip::Service service(llm, config.engine_config());
    httplib::Server server;
    service.bind(server);

    g_server = &server;
    std::signal(SIGINT, stop_server);
    std::signal(SIGTERM, stop_server);

    std::cerr << "directmanip listening on " << host << ':' << port << " (" << backend
              << " backend, model " << model << ")\n";
    if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
        return 1;
    }
    g_server = nullptr;

    if (!snapshot_dir.empty()) {
        service.snapshot_to(snapshot_dir);
        std::cerr << "wrote " << service.session_count() << " session snapshot(s) to "
                  << snapshot_dir << '\n';
    }
    return 0;
}

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

#include "directmanip/backend.hpp"

#include <charconv>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "directmanip/error.hpp"
#include "directmanip/utf8.hpp"

namespace directmanip {

using namespace std::chrono_literals;

struct CancelToken::State {
    mutable std::mutex mutex;
    mutable std::condition_variable cv;
    bool fired = false;
};

CancelToken::CancelToken() : state_(std::make_shared<State>()) {}

void CancelToken::cancel() const {
    {
        std::lock_guard lock(state_->mutex);
        state_->fired = true;
    }
    state_->cv.notify_all();
}

bool CancelToken::cancelled() const {
    std::lock_guard lock(state_->mutex);
    return state_->fired;
}

bool CancelToken::wait_for(std::chrono::milliseconds duration) const {
    std::unique_lock lock(state_->mutex);
    return state_->cv.wait_for(lock, duration, [&] { return state_->fired; });
}

void BackendConfig::validate() const {
    if (temperature < 0.0 || temperature > 2.0) {
        throw Error(ErrorCode::InvalidConfig, "temperature must be within [0, 2]");
    }
    if (timeout <= 0ms) throw Error(ErrorCode::InvalidConfig, "timeout must be positive");
    if (mode == BackendMode::Remote) {
        if (endpoint_url.empty()) {
            throw Error(ErrorCode::InvalidConfig, "remote backend needs an endpoint url");
        }
        if (api_key.empty()) {
            throw Error(ErrorCode::InvalidConfig, "remote backend needs an api key (set " +
                                                      std::string(kApiKeyVariable) + ")");
        }
    } else if (mock_rules_path.empty()) {
        throw Error(ErrorCode::InvalidConfig, "mock backend needs a rules file");
    }
}

std::string api_key_from_environment() {
    const char* value = std::getenv(std::string(kApiKeyVariable).c_str());
    return value == nullptr ? std::string() : std::string(value);
}

bool MockRule::catch_all() const {
    return matches.size() == 1 && matches.front().value.empty();
}

// ---------------------------------------------------------------------------
// Rules file

namespace {

struct RuleBuilder {
    MockRule rule;
    bool has_response = false;
    bool in_block = false;
    std::vector<std::string> block;

    void finish_block() {
        if (!in_block) return;
        while (!block.empty() && block.back().empty()) block.pop_back();
        std::string text;
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (i > 0) text += '\n';
            text += block[i];
        }
        rule.response = std::move(text);
        in_block = false;
        block.clear();
    }
};

std::string field_value(std::string_view line, std::size_t colon) {
    auto value = line.substr(colon + 1);
    if (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    return std::string(value);
}

}  // namespace

std::vector<MockRule> parse_mock_rules(std::string_view text) {
    std::vector<MockRule> rules;
    std::optional<RuleBuilder> current;
    std::size_t line_no = 0;

    auto close_record = [&] {
        if (!current) return;
        current->finish_block();
        if (current->rule.matches.empty()) throw FormatError(current->rule.line, "rule has no match field");
        if (!current->has_response) throw FormatError(current->rule.line, "rule has no response");
        rules.push_back(std::move(current->rule));
        current.reset();
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string_view line = raw;

        if (utf8::trim(line) == "---" && !(current && current->in_block && line.substr(0, 2) == "  ")) {
            close_record();
            continue;
        }
        if (current && current->in_block) {
            if (line.empty() || line.substr(0, 2) == "  ") {
                current->block.emplace_back(line.size() >= 2 ? line.substr(2) : std::string_view());
                continue;
            }
            current->finish_block();
        }
        if (utf8::trim(line).empty() || line.front() == '#') continue;

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw FormatError(line_no, "expected 'field: value'");
        const auto field = line.substr(0, colon);
        if (!current) {
            current.emplace();
            current->rule.line = line_no;
        }
        auto& builder = *current;
        if (field == "match-substring" || field == "match-pattern") {
            if (builder.has_response) throw FormatError(line_no, "match field after response");
            MockMatch match;
            match.value = field_value(line, colon);
            if (field == "match-pattern") {
                match.kind = MatchKind::Pattern;
                try {
                    match.pattern = std::regex(match.value, std::regex::ECMAScript);
                } catch (const std::regex_error& e) {
                    throw FormatError(line_no, std::string("invalid pattern: ") + e.what());
                }
            }
            builder.rule.matches.push_back(std::move(match));
        } else if (field == "response") {
            if (builder.has_response) throw FormatError(line_no, "duplicate response");
            builder.has_response = true;
            auto inline_value = field_value(line, colon);
            if (inline_value.empty()) builder.in_block = true;
            else builder.rule.response = std::move(inline_value);
        } else if (field == "delay-ms") {
            const auto value = utf8::trim(line.substr(colon + 1));
            long long ms = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), ms);
            if (value.empty() || ec != std::errc() || ptr != value.data() + value.size() || ms < 0) {
                throw FormatError(line_no, "delay-ms must be a non-negative integer");
            }
            builder.rule.delay = std::chrono::milliseconds(ms);
        } else {
            throw FormatError(line_no, "unknown field '" + std::string(field) + "'");
        }
    }
    close_record();

    if (rules.empty()) throw FormatError(1, "no rules; a final catch-all rule is required");
    if (!rules.back().catch_all()) {
        throw FormatError(rules.back().line, "the last rule must be a catch-all (empty match)");
    }
    return rules;
}

std::vector<MockRule> load_mock_rules(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open mock rules file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_mock_rules(buffer.str());
}

// ---------------------------------------------------------------------------
// Mock backend

MockBackend::MockBackend(std::vector<MockRule> rules, std::chrono::milliseconds timeout)
    : rules_(std::move(rules)), timeout_(timeout) {}

std::string MockBackend::complete(const EngineeredRequest& request,
                                  const CancelToken& cancel) const {
    if (cancel.cancelled()) throw Error(ErrorCode::Cancelled, "operation cancelled");
    std::string haystack;
    for (std::size_t i = 0; i < request.messages.size(); ++i) {
        if (i > 0) haystack += "\n\n";
        haystack += request.messages[i].content;
    }

    for (const auto& rule : rules_) {
        std::optional<std::smatch> captures;
        bool matched = true;
        for (const auto& match : rule.matches) {
            if (match.kind == MatchKind::Substring) {
                matched = haystack.find(match.value) != std::string::npos;
            } else {
                std::smatch m;
                matched = std::regex_search(haystack, m, match.pattern);
                if (matched && !captures) captures = std::move(m);
            }
            if (!matched) break;
        }
        if (!matched) continue;

        if (rule.delay > 0ms) {
            const auto wait = std::min(rule.delay, timeout_);
            if (cancel.wait_for(wait)) throw Error(ErrorCode::Cancelled, "operation cancelled");
            if (rule.delay > timeout_) {
                throw Error(ErrorCode::Timeout, "mock response delay exceeds the timeout");
            }
        }
        if (cancel.cancelled()) throw Error(ErrorCode::Cancelled, "operation cancelled");
        return captures ? captures->format(rule.response) : rule.response;
    }
    throw Error(ErrorCode::NoRuleMatched, "no mock rule matched the request");
}

// ---------------------------------------------------------------------------
// Remote backend

namespace {

struct Exchange {
    std::mutex mutex;
    std::condition_variable cv;
    bool done = false;
    bool transport_failed = false;
    std::string transport_error;
    int status = 0;
    std::string body;
};

}  // namespace

RemoteBackend::RemoteBackend(BackendConfig config) : config_(std::move(config)) {
    static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(config_.endpoint_url, m, url)) {
        throw Error(ErrorCode::InvalidConfig, "endpoint url must be http(s)://host[:port][/path]");
    }
    origin_ = m[1].str();
    std::string base = m[2].matched ? m[2].str() : std::string();
    while (!base.empty() && base.back() == '/') base.pop_back();
    path_ = base + "/chat/completions";
}

std::string RemoteBackend::request_body(const EngineeredRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : request.messages) {
        messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }
    nlohmann::json body = {
        {"model", request.model},
        {"temperature", request.temperature},
        {"messages", std::move(messages)},
    };
    return body.dump();
}

std::string RemoteBackend::response_content(std::string_view body) {
    const auto json = nlohmann::json::parse(body, nullptr, false);
    if (json.is_discarded() || !json.contains("choices") || !json["choices"].is_array() ||
        json["choices"].empty()) {
        throw RemoteError(200, std::string(body));
    }
    const auto& choice = json["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
        throw RemoteError(200, std::string(body));
    }
    return choice["message"]["content"].get<std::string>();
}

std::string RemoteBackend::complete(const EngineeredRequest& request,
                                    const CancelToken& cancel) const {
    constexpr int kMaxRetries = 2;
    const auto deadline = std::chrono::steady_clock::now() + config_.timeout;
    const std::string body = request_body(request);

    for (int attempt = 0;; ++attempt) {
        if (cancel.cancelled()) throw Error(ErrorCode::Cancelled, "operation cancelled");
        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (remaining <= 0ms) throw Error(ErrorCode::Timeout, "request timed out");

        // The transfer runs on its own thread so a cancel can return
        // immediately; the thread owns everything it touches.
        auto exchange = std::make_shared<Exchange>();
        std::thread([exchange, origin = origin_, path = path_, key = config_.api_key, body,
                     remaining] {
            httplib::Client client(origin);
            const auto secs = std::chrono::duration_cast<std::chrono::seconds>(remaining);
            const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(remaining - secs);
            client.set_connection_timeout(secs.count(), usecs.count());
            client.set_read_timeout(secs.count(), usecs.count());
            client.set_write_timeout(secs.count(), usecs.count());
            httplib::Headers headers{{"Authorization", "Bearer " + key}};
            auto result = client.Post(path, headers, body, "application/json");
            std::lock_guard lock(exchange->mutex);
            if (result) {
                exchange->status = result->status;
                exchange->body = result->body;
            } else {
                exchange->transport_failed = true;
                exchange->transport_error = httplib::to_string(result.error());
            }
            exchange->done = true;
            exchange->cv.notify_all();
        }).detach();

        {
            std::unique_lock lock(exchange->mutex);
            while (!exchange->done) {
                exchange->cv.wait_for(lock, 10ms);
                if (exchange->done) break;
                if (cancel.cancelled()) throw Error(ErrorCode::Cancelled, "operation cancelled");
                if (std::chrono::steady_clock::now() >= deadline) {
                    throw Error(ErrorCode::Timeout, "request timed out");
                }
            }
        }

        if (!exchange->transport_failed) {
            if (exchange->status < 200 || exchange->status >= 300) {
                throw RemoteError(exchange->status, exchange->body);
            }
            return response_content(exchange->body);
        }
        if (attempt >= kMaxRetries) {
            if (std::chrono::steady_clock::now() >= deadline) {
                throw Error(ErrorCode::Timeout, "request timed out");
            }
            throw RemoteError(0, "transport failure: " + exchange->transport_error);
        }
        const auto backoff = std::chrono::milliseconds(250) * (1 << attempt);
        if (cancel.wait_for(backoff)) throw Error(ErrorCode::Cancelled, "operation cancelled");
    }
}

std::shared_ptr<const Backend> make_backend(const BackendConfig& config) {
    config.validate();
    if (config.mode == BackendMode::Remote) return std::make_shared<RemoteBackend>(config);
    return std::make_shared<MockBackend>(load_mock_rules(config.mock_rules_path), config.timeout);
}

std::string complete(const EngineeredRequest& request, const BackendConfig& config,
                     const CancelToken& cancel) {
    return make_backend(config)->complete(request, cancel);
}

}  // namespace directmanip

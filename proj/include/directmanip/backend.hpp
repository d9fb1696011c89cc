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

#include <chrono>
#include <filesystem>
#include <memory>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "directmanip/engine.hpp"

namespace directmanip {

// One-shot cancellation flag shared between the submitter and whoever may
// stop the operation. Copies share state.
class CancelToken {
public:
    CancelToken();

    void cancel() const;
    bool cancelled() const;
    // Sleeps up to `duration`; returns true as soon as the token fires.
    bool wait_for(std::chrono::milliseconds duration) const;

private:
    struct State;
    std::shared_ptr<State> state_;
};

enum class BackendMode { Mock, Remote };

inline constexpr std::string_view kApiKeyVariable = "DIRECTMANIP_API_KEY";

struct BackendConfig {
    BackendMode mode = BackendMode::Mock;
    std::string endpoint_url;
    std::string api_key;  // never logged
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    std::chrono::milliseconds timeout{60'000};
    std::filesystem::path mock_rules_path;

    // Throws InvalidConfig.
    void validate() const;
    EngineConfig engine_config() const { return {model, temperature}; }
};

// Reads DIRECTMANIP_API_KEY; empty when unset.
std::string api_key_from_environment();

enum class MatchKind { Substring, Pattern };

struct MockMatch {
    MatchKind kind = MatchKind::Substring;
    std::string value;
    std::regex pattern;  // compiled when kind == Pattern
};

// Every match must hold for the rule to fire. A rule whose only match is
// empty matches anything.
struct MockRule {
    std::vector<MockMatch> matches;
    std::string response;
    std::chrono::milliseconds delay{0};
    std::size_t line = 0;

    bool catch_all() const;
};

std::vector<MockRule> parse_mock_rules(std::string_view text);
std::vector<MockRule> load_mock_rules(const std::filesystem::path& path);

class Backend {
public:
    virtual ~Backend() = default;

    // Full assistant message content; throws Timeout, Cancelled,
    // RemoteError or NoRuleMatched.
    virtual std::string complete(const EngineeredRequest& request,
                                 const CancelToken& cancel) const = 0;
};

// Deterministic rule-driven backend for tests and offline demos.
class MockBackend : public Backend {
public:
    explicit MockBackend(std::vector<MockRule> rules,
                         std::chrono::milliseconds timeout = std::chrono::milliseconds{60'000});

    std::string complete(const EngineeredRequest& request,
                         const CancelToken& cancel) const override;

    const std::vector<MockRule>& rules() const noexcept { return rules_; }

private:
    std::vector<MockRule> rules_;
    std::chrono::milliseconds timeout_;
};

// Chat-completions client: POST {endpoint}/chat/completions.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(BackendConfig config);

    std::string complete(const EngineeredRequest& request,
                         const CancelToken& cancel) const override;

    static std::string request_body(const EngineeredRequest& request);
    // choices[0].message.content of a successful response body.
    static std::string response_content(std::string_view body);

private:
    BackendConfig config_;
    std::string origin_;  // scheme://host[:port]
    std::string path_;
};

std::shared_ptr<const Backend> make_backend(const BackendConfig& config);

std::string complete(const EngineeredRequest& request, const BackendConfig& config,
                     const CancelToken& cancel);

}  // namespace directmanip

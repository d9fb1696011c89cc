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

#include <stdexcept>
#include <string>
#include <string_view>

namespace directmanip {

enum class ErrorCode {
    InvalidSpan,
    OverlappingSelection,
    UnknownElement,
    KindMismatch,
    MixedSelection,
    NotCanonical,
    ParseError,
    NotSvg,
    InvalidPosition,
    InvalidPrompt,
    NoObjectWords,
    EmptyInstruction,
    InvalidConfig,
    Timeout,
    Cancelled,
    RemoteError,
    NoRuleMatched,
    FileNotFound,
    FormatError,
    ArityMismatch,
    NounKindMismatch,
    UnknownTool,
    StaleSnapshot,
    NothingToUndo,
    NothingToRedo,
    Busy,
    InvalidResponse,
    EmptyPayload,
    SvgNotFound,
};

std::string_view to_string(ErrorCode code);

// Every engine failure is reported through this one exception type; the
// service maps `code()` onto HTTP statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& message)
        : Error(ErrorCode::ParseError,
                message + " at byte " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class RemoteError : public Error {
public:
    RemoteError(int status, std::string body)
        : Error(ErrorCode::RemoteError,
                "remote endpoint returned status " + std::to_string(status)),
          status_(status), body_(std::move(body)) {}

    int status() const noexcept { return status_; }
    const std::string& body() const noexcept { return body_; }

private:
    int status_;
    std::string body_;
};

class FormatError : public Error {
public:
    FormatError(std::size_t line, const std::string& message)
        : Error(ErrorCode::FormatError,
                "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace directmanip

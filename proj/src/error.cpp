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

#include "directmanip/error.hpp"

namespace directmanip {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidSpan: return "InvalidSpan";
    case ErrorCode::OverlappingSelection: return "OverlappingSelection";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::MixedSelection: return "MixedSelection";
    case ErrorCode::NotCanonical: return "NotCanonical";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotSvg: return "NotSvg";
    case ErrorCode::InvalidPosition: return "InvalidPosition";
    case ErrorCode::InvalidPrompt: return "InvalidPrompt";
    case ErrorCode::NoObjectWords: return "NoObjectWords";
    case ErrorCode::EmptyInstruction: return "EmptyInstruction";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::Cancelled: return "Cancelled";
    case ErrorCode::RemoteError: return "RemoteError";
    case ErrorCode::NoRuleMatched: return "NoRuleMatched";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::NounKindMismatch: return "NounKindMismatch";
    case ErrorCode::UnknownTool: return "UnknownTool";
    case ErrorCode::StaleSnapshot: return "StaleSnapshot";
    case ErrorCode::NothingToUndo: return "NothingToUndo";
    case ErrorCode::NothingToRedo: return "NothingToRedo";
    case ErrorCode::Busy: return "Busy";
    case ErrorCode::InvalidResponse: return "InvalidResponse";
    case ErrorCode::EmptyPayload: return "EmptyPayload";
    case ErrorCode::SvgNotFound: return "SvgNotFound";
    }
    return "Unknown";
}

}  // namespace directmanip

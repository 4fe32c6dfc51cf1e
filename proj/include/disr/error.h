// Copyright 2026-present the disretrieval project
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace disr {

enum class Errc {
    // doc-model
    MalformedCorpus,
    EmptyDocument,
    ArityMismatch,
    UnknownNode,
    MalformedTree,
    // discourse-parser
    EmptyInput,
    IllegalAction,
    InvalidTree,
    DimensionMismatch,
    NoLegalAction,
    DomainError,
    ScorerFailure,
    MalformedParameters,
    // rst-adapt
    NonContiguousSentence,
    UnknownSentence,
    DegenerateNode,
    // tree-builder
    ParserFailure,
    SummarizerUnavailable,
    InvalidConfig,
    // embed-retrieve
    EncoderUnavailable,
    EncoderMismatch,
    // eval
    EmptyGold,
    EmptyReferences,
    LengthMismatch,
    // cli / io
    IoError,
    AnswererUnavailable,
};

/// Module that owns an error code, e.g. "doc-model".
std::string_view
error_module(Errc code);

/// Bare code name, e.g. "MalformedCorpus".
std::string_view
error_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {
    }

    Errc
    code() const noexcept {
        return code_;
    }

    /// "<module>/<Name>", the machine-readable form surfaced by the CLI.
    std::string
    qualified_code() const;

private:
    Errc code_;
};

}  // namespace disr

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

#include "disr/error.h"

namespace disr {

std::string_view
error_module(Errc code) {
    switch (code) {
        case Errc::MalformedCorpus:
        case Errc::EmptyDocument:
        case Errc::ArityMismatch:
        case Errc::UnknownNode:
        case Errc::MalformedTree:
            return "doc-model";
        case Errc::EmptyInput:
        case Errc::IllegalAction:
        case Errc::InvalidTree:
        case Errc::DimensionMismatch:
        case Errc::NoLegalAction:
        case Errc::DomainError:
        case Errc::ScorerFailure:
        case Errc::MalformedParameters:
            return "discourse-parser";
        case Errc::NonContiguousSentence:
        case Errc::UnknownSentence:
        case Errc::DegenerateNode:
            return "rst-adapt";
        case Errc::ParserFailure:
        case Errc::SummarizerUnavailable:
        case Errc::InvalidConfig:
            return "tree-builder";
        case Errc::EncoderUnavailable:
        case Errc::EncoderMismatch:
            return "embed-retrieve";
        case Errc::EmptyGold:
        case Errc::EmptyReferences:
        case Errc::LengthMismatch:
            return "eval";
        case Errc::IoError:
        case Errc::AnswererUnavailable:
            return "cli";
    }
    return "unknown";
}

std::string_view
error_name(Errc code) {
    switch (code) {
        case Errc::MalformedCorpus: return "MalformedCorpus";
        case Errc::EmptyDocument: return "EmptyDocument";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::UnknownNode: return "UnknownNode";
        case Errc::MalformedTree: return "MalformedTree";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::IllegalAction: return "IllegalAction";
        case Errc::InvalidTree: return "InvalidTree";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NoLegalAction: return "NoLegalAction";
        case Errc::DomainError: return "DomainError";
        case Errc::ScorerFailure: return "ScorerFailure";
        case Errc::MalformedParameters: return "MalformedParameters";
        case Errc::NonContiguousSentence: return "NonContiguousSentence";
        case Errc::UnknownSentence: return "UnknownSentence";
        case Errc::DegenerateNode: return "DegenerateNode";
        case Errc::ParserFailure: return "ParserFailure";
        case Errc::SummarizerUnavailable: return "SummarizerUnavailable";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::EncoderUnavailable: return "EncoderUnavailable";
        case Errc::EncoderMismatch: return "EncoderMismatch";
        case Errc::EmptyGold: return "EmptyGold";
        case Errc::EmptyReferences: return "EmptyReferences";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::IoError: return "IoError";
        case Errc::AnswererUnavailable: return "AnswererUnavailable";
    }
    return "Unknown";
}

std::string
Error::qualified_code() const {
    std::string out(error_module(code_));
    out += '/';
    out += error_name(code_);
    return out;
}

}  // namespace disr

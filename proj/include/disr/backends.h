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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disr/vector_math.h"

namespace disr {

/// f_LLM client. Implementations must be safe for concurrent calls.
class Summarizer {
public:
    virtual ~Summarizer() = default;

    /// Throws Error(SummarizerUnavailable) on failure.
    virtual std::string
    summarize(std::string_view left, std::string_view right) const = 0;

    virtual std::string
    id() const = 0;
};

/// Offline backend: returns left + " " + right.
class ConcatSummarizer final : public Summarizer {
public:
    std::string
    summarize(std::string_view left, std::string_view right) const override;

    std::string
    id() const override {
        return "concat";
    }
};

/// Sentence encoder client. Implementations must be safe for concurrent calls.
class Encoder {
public:
    virtual ~Encoder() = default;

    /// One vector per text. Throws Error(EncoderUnavailable) on failure.
    virtual std::vector<Vector>
    embed(std::span<const std::string> texts) const = 0;

    virtual std::string
    id() const = 0;
};

class MockEncoder final : public Encoder {
public:
    explicit MockEncoder(int dim = 64) : dim_(dim) {
    }

    std::vector<Vector>
    embed(std::span<const std::string> texts) const override;

    std::string
    id() const override {
        return "mock-" + std::to_string(dim_);
    }

    int
    dim() const {
        return dim_;
    }

private:
    int dim_;
};

struct SidecarOptions {
    std::string base_url;
    int max_in_flight = 4;
    int timeout_seconds = 120;
};

class SidecarConnection;

/// POST {base}/summarize {"left","right"} -> {"summary"}
class HttpSummarizer final : public Summarizer {
public:
    explicit HttpSummarizer(SidecarOptions options);
    ~HttpSummarizer() override;

    std::string
    summarize(std::string_view left, std::string_view right) const override;

    std::string
    id() const override;

private:
    std::shared_ptr<SidecarConnection> conn_;
};

/// POST {base}/embed {"texts"} -> {"dim","vectors"}; id from GET {base}/info.
class HttpEncoder final : public Encoder {
public:
    explicit HttpEncoder(SidecarOptions options);
    ~HttpEncoder() override;

    std::vector<Vector>
    embed(std::span<const std::string> texts) const override;

    std::string
    id() const override;

private:
    std::shared_ptr<SidecarConnection> conn_;
};

enum class AnswerMode { Qasper, Quality };

std::string_view
to_string(AnswerMode mode);

std::optional<AnswerMode>
parse_answer_mode(std::string_view s);

/// Reader model client. Implementations must be safe for concurrent calls.
class Answerer {
public:
    virtual ~Answerer() = default;

    /// Throws Error(AnswererUnavailable) on failure.
    virtual std::string
    answer(std::string_view context, std::string_view question, AnswerMode mode) const = 0;
};

/// Offline backend: the first line of the context, cut to `max_words`.
class LeadAnswerer final : public Answerer {
public:
    explicit LeadAnswerer(int max_words = 7) : max_words_(max_words) {
    }

    std::string
    answer(std::string_view context, std::string_view question, AnswerMode mode) const override;

private:
    int max_words_;
};

/// POST {base}/answer {"context","question","mode"} -> {"answer"}
class HttpAnswerer final : public Answerer {
public:
    explicit HttpAnswerer(SidecarOptions options);
    ~HttpAnswerer() override;

    std::string
    answer(std::string_view context, std::string_view question, AnswerMode mode) const override;

private:
    std::shared_ptr<SidecarConnection> conn_;
};

/// "concat" | "sidecar" (uses DISR_SIDECAR_URL) | "http://..." URL.
std::shared_ptr<Summarizer>
make_summarizer(std::string_view spec, int max_in_flight = 4);

/// "mock" | "mock:<dim>" | "sidecar" | "http://..." URL.
std::shared_ptr<Encoder>
make_encoder(std::string_view spec, int max_in_flight = 4);

/// "lead" | "sidecar" | "http://..." URL.
std::shared_ptr<Answerer>
make_answerer(std::string_view spec, int max_in_flight = 4);

}  // namespace disr

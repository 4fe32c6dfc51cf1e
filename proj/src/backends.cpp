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

#include "disr/backends.h"

#include <cstdlib>
#include <mutex>
#include <optional>
#include <semaphore>

#include <httplib.h>
#include <json.hpp>

#include "disr/doc_model.h"
#include "disr/error.h"

namespace disr {

std::string
ConcatSummarizer::summarize(std::string_view left, std::string_view right) const {
    std::string out;
    out.reserve(left.size() + right.size() + 1);
    out.append(left);
    out += ' ';
    out.append(right);
    return out;
}

std::vector<Vector>
MockEncoder::embed(std::span<const std::string> texts) const {
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(mock_embedder(t, dim_));
    return out;
}

// ---------------------------------------------------------------------------

class SidecarConnection {
public:
    explicit SidecarConnection(SidecarOptions options)
        : options_(std::move(options)), slots_(std::max(1, options_.max_in_flight)) {
        auto scheme = options_.base_url.find("://");
        auto path_start = options_.base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
        if (path_start == std::string::npos) {
            host_ = options_.base_url;
        } else {
            host_ = options_.base_url.substr(0, path_start);
            prefix_ = options_.base_url.substr(path_start);
            while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
        }
    }

    /// Returns the response body; nullopt on transport or HTTP failure.
    std::optional<std::string>
    request(const std::string& method, const std::string& path, const std::string& body,
            std::string& error) {
        slots_.acquire();
        struct Release {
            std::counting_semaphore<1024>& s;
            ~Release() {
                s.release();
            }
        } release{slots_};

        httplib::Client client(host_);
        client.set_connection_timeout(options_.timeout_seconds, 0);
        client.set_read_timeout(options_.timeout_seconds, 0);
        client.set_write_timeout(options_.timeout_seconds, 0);
        auto full = prefix_ + path;
        auto res = method == "GET" ? client.Get(full)
                                   : client.Post(full, body, "application/json");
        if (!res) {
            error = "request to " + host_ + full + " failed: " + httplib::to_string(res.error());
            return std::nullopt;
        }
        if (res->status != 200) {
            error = "request to " + host_ + full + " returned HTTP " + std::to_string(res->status);
            return std::nullopt;
        }
        return res->body;
    }

    /// GET /info, cached after the first success.
    std::optional<nlohmann::json>
    info(std::string& error) {
        std::lock_guard lock(info_mutex_);
        if (!info_) {
            auto body = request("GET", "/info", {}, error);
            if (!body) return std::nullopt;
            try {
                info_ = nlohmann::json::parse(*body);
            } catch (const nlohmann::json::exception& e) {
                error = std::string("bad /info response: ") + e.what();
                return std::nullopt;
            }
        }
        return info_;
    }

private:
    SidecarOptions options_;
    std::string host_;
    std::string prefix_;
    std::counting_semaphore<1024> slots_;
    std::mutex info_mutex_;
    std::optional<nlohmann::json> info_;
};

HttpSummarizer::HttpSummarizer(SidecarOptions options)
    : conn_(std::make_shared<SidecarConnection>(std::move(options))) {
}

HttpSummarizer::~HttpSummarizer() = default;

std::string
HttpSummarizer::summarize(std::string_view left, std::string_view right) const {
    nlohmann::json req{{"left", left}, {"right", right}};
    std::string error;
    auto body = conn_->request("POST", "/summarize", req.dump(), error);
    if (!body) throw Error(Errc::SummarizerUnavailable, error);
    try {
        return nlohmann::json::parse(*body).at("summary").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SummarizerUnavailable, std::string("bad /summarize response: ") + e.what());
    }
}

std::string
HttpSummarizer::id() const {
    std::string error;
    auto info = conn_->info(error);
    if (!info || !info->contains("summarizer_id")) {
        throw Error(Errc::SummarizerUnavailable, error.empty() ? "no summarizer_id" : error);
    }
    return (*info)["summarizer_id"].get<std::string>();
}

HttpEncoder::HttpEncoder(SidecarOptions options)
    : conn_(std::make_shared<SidecarConnection>(std::move(options))) {
}

HttpEncoder::~HttpEncoder() = default;

std::vector<Vector>
HttpEncoder::embed(std::span<const std::string> texts) const {
    nlohmann::json req{{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
    std::string error;
    auto body = conn_->request("POST", "/embed", req.dump(), error);
    if (!body) throw Error(Errc::EncoderUnavailable, error);
    std::vector<Vector> vectors;
    std::size_t dim = 0;
    try {
        auto j = nlohmann::json::parse(*body);
        dim = j.at("dim").get<std::size_t>();
        vectors = j.at("vectors").get<std::vector<Vector>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::EncoderUnavailable, std::string("bad /embed response: ") + e.what());
    }
    if (vectors.size() != texts.size()) {
        throw Error(Errc::EncoderUnavailable, "/embed returned " + std::to_string(vectors.size()) +
                                                  " vectors for " + std::to_string(texts.size()) +
                                                  " texts");
    }
    for (const auto& v : vectors) {
        if (v.size() != dim) {
            throw Error(Errc::DimensionMismatch, "/embed vector length disagrees with declared dim");
        }
    }
    return vectors;
}

std::string
HttpEncoder::id() const {
    std::string error;
    auto info = conn_->info(error);
    if (!info || !info->contains("encoder_id")) {
        throw Error(Errc::EncoderUnavailable, error.empty() ? "no encoder_id" : error);
    }
    return (*info)["encoder_id"].get<std::string>();
}

std::string_view
to_string(AnswerMode mode) {
    return mode == AnswerMode::Qasper ? "qasper" : "quality";
}

std::optional<AnswerMode>
parse_answer_mode(std::string_view s) {
    if (s == "qasper") return AnswerMode::Qasper;
    if (s == "quality") return AnswerMode::Quality;
    return std::nullopt;
}

std::string
LeadAnswerer::answer(std::string_view context, std::string_view, AnswerMode) const {
    auto line = context.substr(0, context.find('\n'));
    return truncate_words(line, max_words_);
}

HttpAnswerer::HttpAnswerer(SidecarOptions options)
    : conn_(std::make_shared<SidecarConnection>(std::move(options))) {
}

HttpAnswerer::~HttpAnswerer() = default;

std::string
HttpAnswerer::answer(std::string_view context, std::string_view question, AnswerMode mode) const {
    nlohmann::json req{{"context", context}, {"question", question}, {"mode", to_string(mode)}};
    std::string error;
    auto body = conn_->request("POST", "/answer", req.dump(), error);
    if (!body) throw Error(Errc::AnswererUnavailable, error);
    try {
        return nlohmann::json::parse(*body).at("answer").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::AnswererUnavailable, std::string("bad /answer response: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

namespace {

std::string
sidecar_url(Errc code) {
    const char* env = std::getenv("DISR_SIDECAR_URL");
    if (env == nullptr || *env == '\0') {
        throw Error(code, "DISR_SIDECAR_URL is not set");
    }
    return env;
}

bool
is_url(std::string_view s) {
    return s.starts_with("http://") || s.starts_with("https://");
}

}  // namespace

std::shared_ptr<Summarizer>
make_summarizer(std::string_view spec, int max_in_flight) {
    if (spec == "concat") return std::make_shared<ConcatSummarizer>();
    if (spec == "sidecar") {
        return std::make_shared<HttpSummarizer>(
            SidecarOptions{sidecar_url(Errc::SummarizerUnavailable), max_in_flight});
    }
    if (is_url(spec)) {
        return std::make_shared<HttpSummarizer>(SidecarOptions{std::string(spec), max_in_flight});
    }
    throw Error(Errc::InvalidConfig, "unknown summarizer '" + std::string(spec) + "'");
}

std::shared_ptr<Encoder>
make_encoder(std::string_view spec, int max_in_flight) {
    if (spec == "mock") return std::make_shared<MockEncoder>();
    if (spec.starts_with("mock:")) {
        int dim = 0;
        try {
            dim = std::stoi(std::string(spec.substr(5)));
        } catch (const std::exception&) {
            dim = 0;
        }
        if (dim < 1) throw Error(Errc::InvalidConfig, "bad mock encoder dimension in '" + std::string(spec) + "'");
        return std::make_shared<MockEncoder>(dim);
    }
    if (spec == "sidecar") {
        return std::make_shared<HttpEncoder>(
            SidecarOptions{sidecar_url(Errc::EncoderUnavailable), max_in_flight});
    }
    if (is_url(spec)) {
        return std::make_shared<HttpEncoder>(SidecarOptions{std::string(spec), max_in_flight});
    }
    throw Error(Errc::InvalidConfig, "unknown encoder '" + std::string(spec) + "'");
}

std::shared_ptr<Answerer>
make_answerer(std::string_view spec, int max_in_flight) {
    if (spec == "lead") return std::make_shared<LeadAnswerer>();
    if (spec == "sidecar") {
        return std::make_shared<HttpAnswerer>(
            SidecarOptions{sidecar_url(Errc::AnswererUnavailable), max_in_flight});
    }
    if (is_url(spec)) {
        return std::make_shared<HttpAnswerer>(SidecarOptions{std::string(spec), max_in_flight});
    }
    throw Error(Errc::InvalidConfig, "unknown answerer '" + std::string(spec) + "'");
}

}  // namespace disr

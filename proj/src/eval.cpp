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

#include "disr/eval.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <tuple>
#include <unordered_map>

#include "disr/error.h"

namespace disr {

std::vector<std::string>
normalize_tokens(std::string_view text, bool remove_articles) {
    std::string clean;
    clean.reserve(text.size());
    for (char c : text) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::ispunct(u)) continue;
        clean.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
    }
    std::vector<std::string> tokens;
    for (auto w : split_words(clean)) {
        if (remove_articles && (w == "a" || w == "an" || w == "the")) continue;
        tokens.emplace_back(w);
    }
    return tokens;
}

namespace {

std::size_t
overlap(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::unordered_map<std::string_view, int> counts;
    for (const auto& t : b) ++counts[t];
    std::size_t common = 0;
    for (const auto& t : a) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    return common;
}

F1Recall
token_scores(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
    F1Recall out;
    auto common = overlap(pred, gold);
    if (common == 0) return out;
    out.precision = static_cast<double>(common) / static_cast<double>(pred.size());
    out.recall = static_cast<double>(common) / static_cast<double>(gold.size());
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

}  // namespace

F1Recall
token_f1_recall(std::string_view retrieved, std::span<const std::string> gold_spans) {
    if (gold_spans.empty()) throw Error(Errc::EmptyGold, "token F1 needs at least one gold span");
    std::vector<std::string> gold;
    for (const auto& span : gold_spans) {
        auto t = normalize_tokens(span, false);
        gold.insert(gold.end(), t.begin(), t.end());
    }
    return token_scores(normalize_tokens(retrieved, false), gold);
}

double
answer_f1_match(std::string_view prediction, std::span<const std::string> references) {
    if (references.empty()) throw Error(Errc::EmptyReferences, "F1-match needs at least one reference");
    auto pred = normalize_tokens(prediction, true);
    double best = 0.0;
    for (const auto& ref : references) {
        auto gold = normalize_tokens(ref, true);
        double f1 = pred == gold ? 1.0 : token_scores(pred, gold).f1;
        best = std::max(best, f1);
    }
    return best;
}

double
accuracy(std::span<const std::string> predictions, std::span<const std::string> gold) {
    if (predictions.size() != gold.size() || gold.empty()) {
        throw Error(Errc::LengthMismatch, "accuracy needs equal, non-empty label lists (" +
                                              std::to_string(predictions.size()) + " vs " +
                                              std::to_string(gold.size()) + ")");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) hits += predictions[i] == gold[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

// ---------------------------------------------------------------------------

std::vector<PredictionRecord>
parse_predictions(const nlohmann::json& j) {
    std::vector<PredictionRecord> out;
    try {
        for (const auto& q : j.at("queries")) {
            PredictionRecord r;
            r.query_id = q.at("query_id").get<std::string>();
            r.prediction = q.value("prediction", std::string());
            r.references = q.value("references", std::vector<std::string>{});
            r.gold_evidence = q.value("gold_evidence", std::vector<std::string>{});
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::IoError, std::string("bad predictions file: ") + e.what());
    }
    return out;
}

std::vector<QueryMetrics>
evaluate_run(std::span<const PredictionRecord> predictions,
             std::span<const EvidenceRecord> evidence,
             const std::string& strategy,
             const std::string& budget,
             const std::string& encoder) {
    std::unordered_map<std::string_view, const EvidenceRecord*> by_query;
    for (const auto& e : evidence) by_query.emplace(e.query_id, &e);
    std::vector<QueryMetrics> out;
    for (const auto& p : predictions) {
        QueryMetrics m{strategy, budget, encoder, p.query_id, {}};
        auto it = by_query.find(p.query_id);
        if (it != by_query.end() && !p.gold_evidence.empty()) {
            auto s = token_f1_recall(it->second->context, p.gold_evidence);
            m.values["token_f1"] = s.f1;
            m.values["token_recall"] = s.recall;
        }
        if (!p.references.empty()) {
            m.values["answer_f1"] = answer_f1_match(p.prediction, p.references);
        }
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

/// Compares digit runs by value, everything else bytewise.
bool
natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            auto na = a.substr(i, ie - i), nb = b.substr(j, je - j);
            while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
            while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
            i = ie;
            j = je;
            continue;
        }
        if (a[i] != b[j]) return a[i] < b[j];
        ++i;
        ++j;
    }
    return a.size() - i < b.size() - j;
}

}  // namespace

std::vector<ReportRow>
emit_report(std::span<const QueryMetrics> metrics) {
    struct Acc {
        std::size_t queries = 0;
        std::map<std::string, std::pair<double, std::size_t>> sums;
    };
    std::map<std::tuple<std::string, std::string, std::string>, Acc> groups;
    for (const auto& m : metrics) {
        auto& acc = groups[{m.strategy, m.budget, m.encoder}];
        ++acc.queries;
        for (const auto& [name, v] : m.values) {
            auto& [sum, n] = acc.sums[name];
            sum += v;
            ++n;
        }
    }
    std::vector<ReportRow> rows;
    for (const auto& [key, acc] : groups) {
        ReportRow row{std::get<0>(key), std::get<1>(key), std::get<2>(key), acc.queries, {}};
        for (const auto& [name, s] : acc.sums) {
            row.means[name] = s.first / static_cast<double>(s.second);
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.strategy != b.strategy) return natural_less(a.strategy, b.strategy);
        if (a.budget != b.budget) return natural_less(a.budget, b.budget);
        return natural_less(a.encoder, b.encoder);
    });
    return rows;
}

nlohmann::ordered_json
report_to_json(std::span<const ReportRow> rows) {
    nlohmann::ordered_json out;
    out["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["strategy"] = r.strategy;
        j["budget"] = r.budget;
        j["encoder"] = r.encoder;
        j["queries"] = r.queries;
        nlohmann::ordered_json means = nlohmann::ordered_json::object();
        for (const auto& [name, v] : r.means) means[name] = v;
        j["means"] = std::move(means);
        out["rows"].push_back(std::move(j));
    }
    return out;
}

std::string
report_to_text(std::span<const ReportRow> rows) {
    std::set<std::string> metric_names;
    for (const auto& r : rows) {
        for (const auto& [name, v] : r.means) metric_names.insert(name);
    }
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"strategy", "budget", "encoder", "queries"};
    header.insert(header.end(), metric_names.begin(), metric_names.end());
    cells.push_back(header);
    for (const auto& r : rows) {
        std::vector<std::string> line{r.strategy, r.budget, r.encoder, std::to_string(r.queries)};
        for (const auto& name : metric_names) {
            auto it = r.means.find(name);
            if (it == r.means.end()) {
                line.emplace_back("-");
            } else {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.4f", it->second * 100.0);
                line.emplace_back(buf);
            }
        }
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    }
    std::string out;
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c > 0) out += "  ";
            out += line[c];
            if (c + 1 < line.size()) out.append(width[c] - line[c].size(), ' ');
        }
        out += '\n';
    }
    return out;
}

}  // namespace disr

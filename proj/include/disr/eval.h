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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "disr/embed_retrieve.h"

namespace disr {

/// Lowercase, drop ASCII punctuation, split on whitespace. With
/// `remove_articles`, also drops the tokens "a", "an" and "the".
std::vector<std::string>
normalize_tokens(std::string_view text, bool remove_articles);

struct F1Recall {
    double f1 = 0.0;
    double recall = 0.0;
    double precision = 0.0;
};

/// Multiset token overlap of retrieved text against the concatenated gold
/// spans. Throws EmptyGold.
F1Recall
token_f1_recall(std::string_view retrieved, std::span<const std::string> gold_spans);

/// Max over references of normalized token F1 (articles removed). Two texts
/// that both normalize to nothing score 1. Throws EmptyReferences.
double
answer_f1_match(std::string_view prediction, std::span<const std::string> references);

/// Fraction of exact label matches. Throws LengthMismatch.
double
accuracy(std::span<const std::string> predictions, std::span<const std::string> gold);

// ---------------------------------------------------------------------------
// Reports

struct PredictionRecord {
    std::string query_id;
    std::string prediction;
    std::vector<std::string> references;
    std::vector<std::string> gold_evidence;
};

/// {"queries":[{"query_id","prediction","references","gold_evidence"}]}
std::vector<PredictionRecord>
parse_predictions(const nlohmann::json& j);

struct QueryMetrics {
    std::string strategy;
    std::string budget;
    std::string encoder;
    std::string query_id;
    std::map<std::string, double> values;
};

/// Per-query metrics for one run. token_f1 / token_recall need gold
/// evidence and a retrieved context; answer_f1 needs references.
std::vector<QueryMetrics>
evaluate_run(std::span<const PredictionRecord> predictions,
             std::span<const EvidenceRecord> evidence,
             const std::string& strategy,
             const std::string& budget,
             const std::string& encoder);

struct ReportRow {
    std::string strategy;
    std::string budget;
    std::string encoder;
    std::size_t queries = 0;
    std::map<std::string, double> means;
};

/// Means per (strategy, budget, encoder). Rows are sorted by strategy,
/// then budget (numbers compared by value), then encoder.
std::vector<ReportRow>
emit_report(std::span<const QueryMetrics> metrics);

nlohmann::ordered_json
report_to_json(std::span<const ReportRow> rows);

std::string
report_to_text(std::span<const ReportRow> rows);

}  // namespace disr

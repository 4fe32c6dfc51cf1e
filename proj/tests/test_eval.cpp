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

#include <gtest/gtest.h>

#include <cmath>

#include "disr/eval.h"
#include "oracles.h"
#include "test_support.h"

namespace disr {
namespace {

using test::error_code_of;
using test::Rng;

using Spans = std::vector<std::string>;

TEST(Normalize, Tokens) {
    EXPECT_EQ(normalize_tokens("The Cat, sat!  on\tthe mat.", false),
              (Spans{"the", "cat", "sat", "on", "the", "mat"}));
    EXPECT_EQ(normalize_tokens("The Cat, sat!  on\tthe mat.", true), (Spans{"cat", "sat", "on", "mat"}));
    EXPECT_EQ(normalize_tokens("An apple; a pear", true), (Spans{"apple", "pear"}));
    EXPECT_EQ(normalize_tokens("state-of-the-art", false), (Spans{"stateoftheart"}));
    EXPECT_TRUE(normalize_tokens("?!", false).empty());
}

TEST(TokenF1Recall, Identity) {
    auto r = token_f1_recall("The cat sat on the mat.", Spans{"The cat sat on the mat."});
    EXPECT_NEAR(r.f1, 1.0, 1e-12);
    EXPECT_NEAR(r.recall, 1.0, 1e-12);
}

TEST(TokenF1Recall, Disjoint) {
    auto r = token_f1_recall("dogs bark loudly", Spans{"cats purr"});
    EXPECT_EQ(r.f1, 0.0);
    EXPECT_EQ(r.recall, 0.0);
    auto empty = token_f1_recall("", Spans{"cats purr"});
    EXPECT_EQ(empty.f1, 0.0);
}

TEST(TokenF1Recall, HandComputed) {
    auto r = token_f1_recall("the cat sat", Spans{"the cat"});
    EXPECT_NEAR(r.precision, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.recall, 1.0, 1e-12);
    EXPECT_NEAR(r.f1, 0.8, 1e-12);
    // Spans are concatenated; repeated tokens count as a multiset.
    auto m = token_f1_recall("a a b", Spans{"a", "a a c"});
    EXPECT_NEAR(m.precision, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(m.recall, 2.0 / 4.0, 1e-12);
    EXPECT_NEAR(m.f1, 2 * (2.0 / 3) * 0.5 / (2.0 / 3 + 0.5), 1e-12);
    EXPECT_EQ(error_code_of([] { token_f1_recall("x", Spans{}); }), Errc::EmptyGold);
}

TEST(TokenF1Recall, MatchesReferenceOnRandomText) {
    Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        std::string retrieved = test::random_sentence(rng, 0, 20);
        Spans gold;
        std::vector<std::string> gold_tokens;
        for (int i = rng.uniform(1, 3); i > 0; --i) {
            gold.push_back(test::random_sentence(rng, 1, 8));
            auto t = oracle::tokens(gold.back(), false);
            gold_tokens.insert(gold_tokens.end(), t.begin(), t.end());
        }
        auto want = oracle::prf(oracle::tokens(retrieved, false), gold_tokens);
        auto got = token_f1_recall(retrieved, gold);
        EXPECT_NEAR(got.f1, want.f1, 1e-12);
        EXPECT_NEAR(got.recall, want.recall, 1e-12);
        EXPECT_NEAR(got.precision, want.precision, 1e-12);
        for (double v : {got.f1, got.recall, got.precision}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(TokenF1Recall, RecallMonotoneAsRetrievedGrows) {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        Spans gold{test::random_sentence(rng, 3, 15), test::random_sentence(rng, 1, 6)};
        std::string retrieved;
        double previous = 0.0;
        for (int step = 0; step < 10; ++step) {
            retrieved += (retrieved.empty() ? "" : "\n") + (rng.coin() ? rng.pick(gold) : test::random_sentence(rng));
            double recall = token_f1_recall(retrieved, gold).recall;
            EXPECT_GE(recall, previous);
            previous = recall;
        }
    }
}

TEST(AnswerF1, Cases) {
    EXPECT_NEAR(answer_f1_match("Transformer encoder", Spans{"transformer encoder"}), 1.0, 1e-12);
    EXPECT_EQ(answer_f1_match("yes", Spans{"no"}), 0.0);
    EXPECT_NEAR(answer_f1_match("the model", Spans{"the model", "a model"}), 1.0, 1e-12);
    EXPECT_NEAR(answer_f1_match("big red dog", Spans{"red dog", "cat"}), 0.8, 1e-12);
    EXPECT_NEAR(answer_f1_match("Unanswerable", Spans{"unanswerable."}), 1.0, 1e-12);
    EXPECT_NEAR(answer_f1_match("the", Spans{"a"}), 1.0, 1e-12);
    EXPECT_EQ(answer_f1_match("the", Spans{"cat"}), 0.0);
    EXPECT_EQ(error_code_of([] { answer_f1_match("x", Spans{}); }), Errc::EmptyReferences);
}

TEST(AnswerF1, SelfMatchIsOneAndMaxOverReferences) {
    Rng rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        std::string x = test::random_sentence(rng, 1, 10);
        EXPECT_NEAR(answer_f1_match(x, Spans{x}), 1.0, 1e-12);
        Spans refs{test::random_sentence(rng, 1, 6), test::random_sentence(rng, 1, 6)};
        double best = 0.0;
        auto pred = oracle::tokens(x, true);
        for (const auto& r : refs) {
            auto gold = oracle::tokens(r, true);
            best = std::max(best, pred == gold ? 1.0 : oracle::prf(pred, gold).f1);
        }
        EXPECT_NEAR(answer_f1_match(x, refs), best, 1e-12);
    }
}

TEST(Accuracy, Cases) {
    EXPECT_EQ(accuracy(Spans{"A", "B"}, Spans{"A", "B"}), 1.0);
    EXPECT_EQ(accuracy(Spans{"A", "B"}, Spans{"C", "D"}), 0.0);
    EXPECT_EQ(accuracy(Spans{"A", "B", "C", "D"}, Spans{"A", "B", "C", "A"}), 0.75);
    EXPECT_EQ(error_code_of([] { accuracy(Spans{"A"}, Spans{"A", "B"}); }), Errc::LengthMismatch);
    EXPECT_EQ(error_code_of([] { accuracy(Spans{}, Spans{}); }), Errc::LengthMismatch);
}

// ---------------------------------------------------------------------------

TEST(Predictions, Parse) {
    auto j = nlohmann::json::parse(R"({"queries":[{"query_id":"q1","prediction":"p","references":["r"],
        "gold_evidence":["g"]},{"query_id":"q2"}]})");
    auto p = parse_predictions(j);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[0].references, Spans{"r"});
    EXPECT_TRUE(p[1].references.empty());
    EXPECT_EQ(error_code_of([] { parse_predictions(nlohmann::json::object()); }), Errc::IoError);
    EXPECT_EQ(error_code_of([] { parse_predictions(nlohmann::json::parse(R"({"queries":[{}]})")); }),
              Errc::IoError);
}

TEST(EvaluateRun, PerQueryMetrics) {
    std::vector<PredictionRecord> preds{{"q1", "the cat", {"the cat"}, {"the cat"}},
                                        {"q2", "x", {}, {"gold words"}},
                                        {"q3", "y", {"y"}, {}}};
    std::vector<EvidenceRecord> ev{{"q1", {}, "the cat sat"}, {"q2", {}, "gold"}};
    auto m = evaluate_run(preds, ev, "s", "b", "e");
    ASSERT_EQ(m.size(), 3u);
    EXPECT_NEAR(m[0].values.at("token_f1"), 0.8, 1e-12);
    EXPECT_NEAR(m[0].values.at("token_recall"), 1.0, 1e-12);
    EXPECT_NEAR(m[0].values.at("answer_f1"), 1.0, 1e-12);
    EXPECT_NEAR(m[1].values.at("token_recall"), 0.5, 1e-12);
    EXPECT_FALSE(m[1].values.count("answer_f1"));
    EXPECT_FALSE(m[2].values.count("token_f1"));
    EXPECT_EQ(m[2].strategy, "s");
}

TEST(Report, SingleQueryMeanIsItsValue) {
    std::vector<QueryMetrics> m{{"s", "b", "e", "q", {{"token_f1", 0.37}}}};
    auto rows = emit_report(m);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].means.at("token_f1"), 0.37);
    EXPECT_EQ(rows[0].queries, 1u);
}

TEST(Report, CrossProductAndOrdering) {
    std::vector<QueryMetrics> m;
    for (const char* s : {"flatten-chunk", "disretrieval"}) {
        for (const char* b : {"words:400", "words:50"}) {
            m.push_back({s, b, "mock-64", "q1", {{"token_f1", 0.2}}});
            m.push_back({s, b, "mock-64", "q2", {{"token_f1", 0.4}, {"answer_f1", 1.0}}});
        }
    }
    auto rows = emit_report(m);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].strategy, "disretrieval");
    EXPECT_EQ(rows[0].budget, "words:50");
    EXPECT_EQ(rows[1].budget, "words:400");
    EXPECT_EQ(rows[2].strategy, "flatten-chunk");
    for (const auto& r : rows) {
        EXPECT_NEAR(r.means.at("token_f1"), 0.3, 1e-15);
        EXPECT_EQ(r.means.at("answer_f1"), 1.0);
        EXPECT_EQ(r.queries, 2u);
    }
    std::reverse(m.begin(), m.end());
    auto again = emit_report(m);
    EXPECT_EQ(report_to_json(again).dump(), report_to_json(rows).dump());
}

TEST(Report, Rendering) {
    std::vector<ReportRow> rows{{"disretrieval", "words:200", "mock-64", 3, {{"token_f1", 0.5}}},
                                {"bisection", "words:200", "mock-64", 3, {{"token_f1", 0.25}, {"answer_f1", 1.0}}}};
    auto j = report_to_json(rows);
    EXPECT_EQ(j["rows"][1]["means"]["answer_f1"], 1.0);
    EXPECT_EQ(j["rows"][0]["queries"], 3);
    auto text = report_to_text(rows);
    EXPECT_EQ(text,
              "strategy      budget     encoder  queries  answer_f1  token_f1\n"
              "disretrieval  words:200  mock-64  3        -          50.0000\n"
              "bisection     words:200  mock-64  3        100.0000   25.0000\n");
}

}  // namespace
}  // namespace disr

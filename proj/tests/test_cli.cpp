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

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "disr/simd/kernels.h"
#include "disr/tree_json.h"
#include "e2e_pipeline.h"
#include "test_support.h"

namespace disr {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class Cli : public ::testing::Test {
protected:
    void
    TearDown() override {
        simd::select_kernels("auto");
    }

    fs::path dir_ = test::scratch_dir("cli");

    std::string
    at(const std::string& name) const {
        return (dir_ / name).string();
    }

    static std::string
    fx(const std::string& name) {
        return test::fixture(name).string();
    }

    test::CliResult
    ok(const std::vector<std::string>& args) {
        auto r = test::run(args);
        EXPECT_EQ(r.code, 0) << r.err;
        return r;
    }

    void
    build_index(const std::string& name = "index") {
        ok({"build-tree", "--corpus", fx("tiny.corpus"), "--out-dir", at(name), "--tau", "0"});
        ok({"embed", "--index-dir", at(name)});
    }
};

std::string
error_code(const test::CliResult& r) {
    auto j = json::parse(r.err, nullptr, false);
    if (j.is_discarded() || !j.contains("error")) return "<not json: " + r.err + ">";
    EXPECT_TRUE(j["error"]["message"].is_string());
    return j["error"]["code"].get<std::string>();
}

std::vector<json>
read_jsonl(const std::string& path) {
    std::vector<json> out;
    std::ifstream in(path);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(json::parse(line));
    }
    return out;
}

// ---------------------------------------------------------------------------

TEST_F(Cli, UsageErrorsExitTwo) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {}, {"frobnicate"}, {"build-tree"}, {"retrieve", "--index-dir", "x", "--queries", "q", "--out", "o",
                                                  "--budget-words", "5", "--budget-nodes", "2"},
             {"build-tree", "--corpus", "c", "--out-dir", "d", "--tau", "many"}}) {
        auto r = test::run(args);
        EXPECT_EQ(r.code, 2);
        EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
    }
}

TEST_F(Cli, HelpExitsZero) {
    auto r = test::run({"--help"});
    EXPECT_EQ(r.code, 0);
    for (const char* sub : {"convert-rst", "build-tree", "embed", "retrieve", "answer", "evaluate", "stats"}) {
        EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
    }
}

TEST_F(Cli, ErrorsAreMachineReadable) {
    auto missing = test::run({"build-tree", "--corpus", at("nope.json"), "--out-dir", at("o")});
    EXPECT_EQ(missing.code, 1);
    EXPECT_EQ(error_code(missing).substr(error_code(missing).find('/')), "/IoError");
    auto bad_strategy =
        test::run({"build-tree", "--corpus", fx("tiny.corpus"), "--out-dir", at("o"), "--strategy", "raptor"});
    EXPECT_EQ(bad_strategy.code, 1);
    EXPECT_EQ(error_code(bad_strategy).substr(error_code(bad_strategy).find('/')), "/InvalidConfig");
    auto bad_fallback =
        test::run({"build-tree", "--corpus", fx("tiny.corpus"), "--out-dir", at("o"), "--fallback", "shrug"});
    EXPECT_EQ(bad_fallback.code, 1);
    auto bad_simd = test::run({"--simd", "sse9", "stats", "--tree", "x"});
    EXPECT_EQ(bad_simd.code, 1);
    EXPECT_NE(error_code(bad_simd).find("InvalidConfig"), std::string::npos);
}

TEST_F(Cli, ConvertRst) {
    ok({"convert-rst", "--input", fx("tiny.edu_tree.json"), "--out", at("sent.tree.json")});
    auto tree = deserialize_tree(read_text_file(at("sent.tree.json")));
    EXPECT_EQ(tree.leaf_count(), 3u);
    EXPECT_EQ(tree.root().relation, "Sequence");
    auto bad = test::run({"convert-rst", "--input", fx("tiny.corpus"), "--out", at("x.json")});
    EXPECT_EQ(bad.code, 1);
}

TEST_F(Cli, BuildTreeWritesOneTreePerDocument) {
    ok({"build-tree", "--corpus", fx("tiny.corpus"), "--out-dir", at("index"), "--tau", "0", "--workers", "3"});
    auto docs = load_corpus(test::fixture("tiny.corpus"));
    ASSERT_EQ(docs.size(), 3u);
    for (const auto& d : docs) {
        auto tree = deserialize_tree(read_text_file(at("index/" + d.doc_id + ".tree.json")));
        validate_tree(tree);
        EXPECT_EQ(tree.leaf_count(), d.sentence_count());
        std::string all;
        for (const auto& s : d.sentences()) all += (all.empty() ? "" : " ") + s.text;
        EXPECT_EQ(tree.root().text, all);
    }
}

TEST_F(Cli, BuildTreeStrategies) {
    for (const char* strategy : {"bisection", "flatten-chunk", "flatten-sentence"}) {
        std::string out = at(strategy);
        ok({"build-tree", "--corpus", fx("tiny.corpus"), "--out-dir", out, "--strategy", strategy, "--chunk-words",
            "20"});
        auto tree = deserialize_tree(read_text_file(out + "/glacier.tree.json"));
        validate_tree(tree);
        if (std::string(strategy) == "flatten-chunk") {
            EXPECT_LT(tree.leaf_count(), 9u);
        } else {
            EXPECT_EQ(tree.leaf_count(), 9u);
        }
        for (const auto& n : tree.nodes()) {
            if (!n.is_leaf()) EXPECT_EQ(n.relation, "bisect");
        }
    }
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
    {
        std::ofstream cfg(at("disr.toml"));
        cfg << "[build-tree]\ncorpus = \"" << fx("tiny.corpus") << "\"\nout-dir = \"" << at("from_cfg")
            << "\"\ntau = 0\nsummarizer = \"bogus\"\n";
    }
    auto failing = test::run({"--config", at("disr.toml"), "build-tree"});
    EXPECT_EQ(failing.code, 1);
    EXPECT_NE(error_code(failing).find("InvalidConfig"), std::string::npos);
    ok({"--config", at("disr.toml"), "build-tree", "--summarizer", "concat"});
    EXPECT_TRUE(fs::exists(at("from_cfg/lighthouse.tree.json")));
}

TEST_F(Cli, EmbedAndRetrieveRespectBudget) {
    build_index();
    auto emb = json::parse(read_text_file(at("index/sourdough.emb.json")));
    EXPECT_EQ(emb["encoder_id"], "mock-64");
    EXPECT_EQ(emb["dim"], 64);
    for (int budget : {10, 25, 200}) {
        std::string out = at("ev" + std::to_string(budget) + ".jsonl");
        ok({"retrieve", "--index-dir", at("index"), "--queries", fx("tiny.queries.json"), "--out", out,
            "--budget-words", std::to_string(budget), "--topk", "5"});
        auto records = read_jsonl(out);
        ASSERT_EQ(records.size(), 5u);
        for (const auto& r : records) {
            int words = 0;
            std::vector<int> order;
            for (const auto& item : r["items"]) {
                words += word_count(item["text"].get<std::string>());
                order.push_back(item["leaf_index"].get<int>());
            }
            EXPECT_LE(words, budget);
            EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));
            EXPECT_LE(word_count(r["context"].get<std::string>()), budget);
        }
    }
    auto nodes = at("nodes.jsonl");
    ok({"retrieve", "--index-dir", at("index"), "--queries", fx("tiny.queries.json"), "--out", nodes,
        "--budget-nodes", "1", "--variant", "leaf-only"});
    for (const auto& r : read_jsonl(nodes)) EXPECT_EQ(r["items"].size(), 1u);
}

TEST_F(Cli, RetrieveRejectsForeignEncoder) {
    build_index();
    auto r = test::run({"retrieve", "--index-dir", at("index"), "--queries", fx("tiny.queries.json"), "--out",
                        at("e.jsonl"), "--encoder", "mock:32"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(error_code(r).find("EncoderMismatch"), std::string::npos);
    auto v = test::run({"retrieve", "--index-dir", at("index"), "--queries", fx("tiny.queries.json"), "--out",
                        at("e.jsonl"), "--variant", "best"});
    EXPECT_EQ(v.code, 1);
}

TEST_F(Cli, AnswerEvaluateStats) {
    build_index();
    ok({"retrieve", "--index-dir", at("index"), "--queries", fx("tiny.queries.json"), "--out", at("ev.jsonl")});
    ok({"answer", "--queries", fx("tiny.queries.json"), "--evidence", at("ev.jsonl"), "--out", at("pred.json")});
    auto preds = json::parse(read_text_file(at("pred.json")));
    ASSERT_EQ(preds["queries"].size(), 5u);
    EXPECT_EQ(preds["queries"][0]["references"], json::array({"in 1952"}));

    auto plain = ok({"evaluate", "--predictions", at("pred.json")});
    EXPECT_NE(plain.out.find("answer_f1"), std::string::npos);
    auto report = ok({"evaluate", "--predictions", at("pred.json"), "--run",
                      "disretrieval,words:200,mock-64," + at("ev.jsonl"), "--out", at("report.json")});
    auto rj = json::parse(read_text_file(at("report.json")));
    ASSERT_EQ(rj["rows"].size(), 1u);
    EXPECT_EQ(rj["rows"][0]["queries"], 5);
    EXPECT_TRUE(rj["rows"][0]["means"].contains("token_recall"));
    EXPECT_NE(report.out.find("disretrieval"), std::string::npos);
    EXPECT_EQ(test::run({"evaluate"}).code, 1);
    EXPECT_EQ(test::run({"evaluate", "--run", "a,b,c"}).code, 1);

    auto single = ok({"stats", "--tree", at("index/glacier.tree.json")});
    auto sj = json::parse(single.out);
    EXPECT_EQ(sj["mid_node_percentage"], 0.0);
    ok({"stats", "--index-dir", at("index"), "--queries", fx("tiny.queries.json"), "--evidence", at("ev.jsonl"),
        "--out", at("stats.json")});
    auto st = json::parse(read_text_file(at("stats.json")));
    EXPECT_EQ(st["documents"].size(), 3u);
    EXPECT_TRUE(st.contains("mean"));
}

TEST_F(Cli, PipelineMatchesGoldenAndIsByteStable) {
    auto first = dir_ / "run1";
    auto second = dir_ / "run2";
    auto f1 = e2e::run_pipeline(test::source_dir(), first);
    ASSERT_FALSE(f1) << f1->step << ": " << f1->err;
    auto f2 = e2e::run_pipeline(test::source_dir(), second);
    ASSERT_FALSE(f2) << f2->step << ": " << f2->err;
    EXPECT_EQ(e2e::compare_dirs(first, second), "");

    auto golden = test::source_dir() / "tests" / "golden";
    if (std::getenv("DISR_UPDATE_GOLDEN") != nullptr) {
        fs::remove_all(golden);
        fs::copy(first, golden, fs::copy_options::recursive);
    }
    EXPECT_EQ(e2e::compare_dirs(first, golden), "");
}

}  // namespace
}  // namespace disr

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

#include "disr/cli.h"

#include <algorithm>
#include <atomic>
#include <climits>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "disr/backends.h"
#include "disr/baselines.h"
#include "disr/discourse_parser.h"
#include "disr/doc_model.h"
#include "disr/embed_retrieve.h"
#include "disr/error.h"
#include "disr/eval.h"
#include "disr/rst_adapt.h"
#include "disr/simd/kernels.h"
#include "disr/tree_builder.h"
#include "disr/tree_json.h"

namespace disr {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTreeSuffix = ".tree.json";
constexpr std::string_view kEmbeddingSuffix = ".emb.json";

std::string
file_stem_for(std::string_view doc_id) {
    std::string s(doc_id);
    for (auto& c : s) {
        if (c == '/' || c == '\\') c = '_';
    }
    return s;
}

fs::path
tree_path(const fs::path& dir, std::string_view doc_id) {
    return dir / (file_stem_for(doc_id) + std::string(kTreeSuffix));
}

fs::path
embedding_path(const fs::path& dir, std::string_view doc_id) {
    return dir / (file_stem_for(doc_id) + std::string(kEmbeddingSuffix));
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads; the first failure
/// in index order is rethrown.
template <typename Fn>
void
parallel_for(std::size_t n, int workers, Fn fn) {
    std::vector<std::exception_ptr> failures(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), n);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
}

nlohmann::json
load_json(const fs::path& path, Errc code) {
    return parse_json(read_text_file(path), code);
}

std::vector<nlohmann::json>
load_jsonl(const fs::path& path) {
    std::vector<nlohmann::json> out;
    std::string text = read_text_file(path);
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        auto line = trim(std::string_view(text).substr(start, end - start));
        if (!line.empty()) out.push_back(parse_json(line, Errc::IoError));
        start = end + 1;
    }
    return out;
}

std::vector<fs::path>
files_with_suffix(const fs::path& dir, std::string_view suffix) {
    if (!fs::is_directory(dir)) throw Error(Errc::IoError, "not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.ends_with(suffix)) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Query {
    std::string query_id;
    std::string doc_id;
    std::string question;
    std::vector<std::string> references;
    std::vector<std::string> gold_evidence;
};

std::vector<Query>
load_queries(const fs::path& path) {
    auto j = load_json(path, Errc::IoError);
    std::vector<Query> out;
    try {
        for (const auto& q : j.at("queries")) {
            out.push_back({q.at("query_id").get<std::string>(), q.value("doc_id", std::string()),
                           q.value("question", std::string()),
                           q.value("references", std::vector<std::string>{}),
                           q.value("gold_evidence", std::vector<std::string>{})});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::IoError, "bad queries file " + path.string() + ": " + e.what());
    }
    return out;
}

std::vector<EvidenceRecord>
load_evidence(const fs::path& path) {
    std::vector<EvidenceRecord> out;
    for (const auto& j : load_jsonl(path)) out.push_back(evidence_from_json(j));
    return out;
}

Parser
make_parser(const std::string& spec) {
    if (spec == "heuristic") return make_heuristic_parser();
    if (spec.starts_with("weights:")) return make_linear_parser(load_scorer_parameters(spec.substr(8)));
    throw Error(Errc::InvalidConfig, "unknown parser '" + spec + "'");
}

TreeStatsReport
mean_stats(const std::vector<TreeStatsReport>& reports) {
    TreeStatsReport m;
    if (reports.empty()) return m;
    for (const auto& r : reports) {
        m.avg_sentence_length += r.avg_sentence_length;
        m.avg_mid_node_depth += r.avg_mid_node_depth;
        m.avg_leaf_num += r.avg_leaf_num;
        m.mid_node_percentage += r.mid_node_percentage;
    }
    auto n = static_cast<double>(reports.size());
    m.avg_sentence_length /= n;
    m.avg_mid_node_depth /= n;
    m.avg_leaf_num /= n;
    m.mid_node_percentage /= n;
    return m;
}

nlohmann::ordered_json
stats_to_json(const TreeStatsReport& r) {
    nlohmann::ordered_json j;
    j["avg_sentence_length"] = r.avg_sentence_length;
    j["avg_mid_node_depth"] = r.avg_mid_node_depth;
    j["avg_leaf_num"] = r.avg_leaf_num;
    j["mid_node_percentage"] = r.mid_node_percentage;
    return j;
}

// ---------------------------------------------------------------------------
// Subcommands

struct ConvertArgs {
    std::string input;
    std::string out;
};

void
cmd_convert_rst(const ConvertArgs& a) {
    auto tree = merge_edus(parse_edu_tree(read_text_file(a.input)));
    write_text_file(a.out, serialize_tree(tree));
}

struct BuildArgs {
    std::string corpus;
    std::string out_dir;
    std::string strategy = "disretrieval";
    int tau = 0;
    int max_summary_words = 200;
    int retry_limit = 2;
    std::string fallback = "concat-truncate";
    std::string summarizer = "concat";
    std::string parser = "heuristic";
    bool split_sentences = false;
    int workers = 1;
    int chunk_words = 100;
    int max_in_flight = 4;
};

DiscourseTree
build_one(const Document& doc, const BuildArgs& a, const EnhancerConfig& cfg, const Parser& parser,
          const Summarizer& summarizer) {
    if (a.strategy == "disretrieval") return build_full(doc, cfg, parser, summarizer);
    if (a.strategy == "bisection") {
        std::vector<std::string> units;
        for (const auto& s : doc.sentences()) units.push_back(s.text);
        return enhance_tree(bisection_tree(units), cfg, summarizer);
    }
    std::vector<std::string> units;
    if (a.strategy == "flatten-chunk") {
        for (auto& c : flatten_chunk(doc, a.chunk_words)) units.push_back(std::move(c.text));
    } else {
        for (auto& s : flatten_sentence(doc)) units.push_back(std::move(s.text));
    }
    EnhancerConfig concat_only = cfg;
    concat_only.tau = INT_MAX;
    return enhance_tree(bisection_tree(units), concat_only, ConcatSummarizer());
}

void
cmd_build_tree(const BuildArgs& a) {
    static const std::vector<std::string> strategies{"disretrieval", "bisection", "flatten-chunk",
                                                     "flatten-sentence"};
    if (std::find(strategies.begin(), strategies.end(), a.strategy) == strategies.end()) {
        throw Error(Errc::InvalidConfig, "unknown strategy '" + a.strategy + "'");
    }
    EnhancerConfig cfg;
    cfg.tau = a.tau;
    cfg.max_summary_words = a.max_summary_words;
    cfg.retry_limit = a.retry_limit;
    if (a.fallback == "concat-truncate") {
        cfg.fallback = SummaryFallback::ConcatTruncate;
    } else if (a.fallback == "propagate") {
        cfg.fallback = SummaryFallback::Propagate;
    } else {
        throw Error(Errc::InvalidConfig, "unknown fallback '" + a.fallback + "'");
    }
    cfg.validate();
    auto docs = load_corpus(a.corpus, a.split_sentences);
    auto parser = make_parser(a.parser);
    auto summarizer = make_summarizer(a.summarizer, a.max_in_flight);

    std::vector<std::string> serialized(docs.size());
    parallel_for(docs.size(), a.workers, [&](std::size_t i) {
        serialized[i] = serialize_tree(build_one(docs[i], a, cfg, parser, *summarizer));
    });
    for (std::size_t i = 0; i < docs.size(); ++i) {
        write_text_file(tree_path(a.out_dir, docs[i].doc_id), serialized[i]);
    }
}

struct EmbedArgs {
    std::string index_dir;
    std::string out_dir;
    std::string encoder = "mock";
    int batch_size = 64;
    int workers = 1;
    int max_in_flight = 4;
};

void
cmd_embed(const EmbedArgs& a) {
    auto encoder = make_encoder(a.encoder, a.max_in_flight);
    auto out_dir = a.out_dir.empty() ? fs::path(a.index_dir) : fs::path(a.out_dir);
    auto inputs = files_with_suffix(a.index_dir, kTreeSuffix);
    std::vector<std::string> serialized(inputs.size());
    parallel_for(inputs.size(), a.workers, [&](std::size_t i) {
        auto tree = std::make_shared<const DiscourseTree>(deserialize_tree(read_text_file(inputs[i])));
        auto etree = build_embedding_tree(tree, *encoder, static_cast<std::size_t>(std::max(1, a.batch_size)));
        serialized[i] = embedding_tree_to_json(etree).dump() + "\n";
    });
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        auto name = inputs[i].filename().string();
        name = name.substr(0, name.size() - kTreeSuffix.size()) + std::string(kEmbeddingSuffix);
        write_text_file(out_dir / name, serialized[i]);
    }
}

struct RetrieveArgs {
    std::string index_dir;
    std::string queries;
    std::string out;
    std::string encoder = "mock";
    std::string variant = "topk-original";
    std::optional<int> budget_words;
    std::optional<int> budget_nodes;
    int topk = 5;
    int max_in_flight = 4;
};

void
cmd_retrieve(const RetrieveArgs& a) {
    RetrievalConfig cfg;
    auto variant = parse_retrieval_variant(a.variant);
    if (!variant) throw Error(Errc::InvalidConfig, "unknown variant '" + a.variant + "'");
    cfg.variant = *variant;
    cfg.leaf_top_k = a.topk;
    if (a.budget_nodes) {
        cfg.budget = Budget::nodes(*a.budget_nodes);
    } else {
        cfg.budget = Budget::words(a.budget_words.value_or(200));
    }
    cfg.validate();
    auto encoder = make_encoder(a.encoder, a.max_in_flight);
    std::optional<int> context_budget;
    if (cfg.budget.kind == BudgetKind::Words) context_budget = cfg.budget.value;

    std::map<std::string, std::unique_ptr<EmbeddingTree>> index;
    std::string out;
    for (const auto& q : load_queries(a.queries)) {
        auto it = index.find(q.doc_id);
        if (it == index.end()) {
            auto tree = std::make_shared<const DiscourseTree>(
                deserialize_tree(read_text_file(tree_path(a.index_dir, q.doc_id))));
            auto j = load_json(embedding_path(a.index_dir, q.doc_id), Errc::EncoderMismatch);
            it = index.emplace(q.doc_id, std::make_unique<EmbeddingTree>(
                                             embedding_tree_from_json(tree, j))).first;
        }
        auto evidence = retrieve(q.question, *it->second, cfg, *encoder);
        out += evidence_to_json(q.query_id, evidence, assemble_context(evidence, context_budget)).dump();
        out += '\n';
    }
    write_text_file(a.out, out);
}

struct AnswerArgs {
    std::string queries;
    std::string evidence;
    std::string out;
    std::string answerer = "lead";
    std::string mode = "qasper";
    int workers = 1;
    int max_in_flight = 4;
};

void
cmd_answer(const AnswerArgs& a) {
    auto mode = parse_answer_mode(a.mode);
    if (!mode) throw Error(Errc::InvalidConfig, "unknown answer mode '" + a.mode + "'");
    auto answerer = make_answerer(a.answerer, a.max_in_flight);
    auto queries = load_queries(a.queries);
    std::map<std::string, std::string> contexts;
    for (auto& e : load_evidence(a.evidence)) contexts[e.query_id] = std::move(e.context);
    std::vector<std::string> answers(queries.size());
    parallel_for(queries.size(), a.workers, [&](std::size_t i) {
        auto it = contexts.find(queries[i].query_id);
        if (it == contexts.end()) {
            throw Error(Errc::IoError, "no evidence for query '" + queries[i].query_id + "'");
        }
        answers[i] = answerer->answer(it->second, queries[i].question, *mode);
    });
    nlohmann::ordered_json j;
    j["queries"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < queries.size(); ++i) {
        nlohmann::ordered_json q;
        q["query_id"] = queries[i].query_id;
        q["prediction"] = answers[i];
        q["references"] = queries[i].references;
        q["gold_evidence"] = queries[i].gold_evidence;
        j["queries"].push_back(std::move(q));
    }
    write_text_file(a.out, j.dump(2) + "\n");
}

struct EvaluateArgs {
    std::string predictions;
    std::vector<std::string> runs;
    std::string out;
    std::string out_text;
};

void
cmd_evaluate(const EvaluateArgs& a, std::ostream& os) {
    std::vector<QueryMetrics> metrics;
    if (a.runs.empty()) {
        if (a.predictions.empty()) throw Error(Errc::InvalidConfig, "evaluate needs --predictions or --run");
        auto preds = parse_predictions(load_json(a.predictions, Errc::IoError));
        auto m = evaluate_run(preds, {}, "-", "-", "-");
        metrics.insert(metrics.end(), m.begin(), m.end());
    }
    for (const auto& run : a.runs) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            auto comma = run.find(',', start);
            parts.push_back(run.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (parts.size() != 4 && parts.size() != 5) {
            throw Error(Errc::InvalidConfig,
                        "--run expects strategy,budget,encoder,evidence[,predictions]: '" + run + "'");
        }
        auto pred_path = parts.size() == 5 ? parts[4] : a.predictions;
        if (pred_path.empty()) throw Error(Errc::InvalidConfig, "run '" + run + "' has no predictions file");
        auto preds = parse_predictions(load_json(pred_path, Errc::IoError));
        auto evidence = load_evidence(parts[3]);
        auto m = evaluate_run(preds, evidence, parts[0], parts[1], parts[2]);
        metrics.insert(metrics.end(), m.begin(), m.end());
    }
    auto rows = emit_report(metrics);
    auto text = report_to_text(rows);
    if (!a.out.empty()) write_text_file(a.out, report_to_json(rows).dump(2) + "\n");
    if (!a.out_text.empty()) write_text_file(a.out_text, text);
    os << text;
}

struct StatsArgs {
    std::string tree;
    std::string index_dir;
    std::string queries;
    std::string evidence;
    std::string out;
};

void
cmd_stats(const StatsArgs& a, std::ostream& os) {
    nlohmann::ordered_json result;
    std::vector<EvidenceRecord> evidence;
    if (!a.evidence.empty()) evidence = load_evidence(a.evidence);

    auto node_ids = [](const std::vector<const EvidenceRecord*>& records) {
        std::vector<NodeId> ids;
        for (const auto* r : records) {
            for (const auto& item : r->items) ids.push_back(item.node_id);
        }
        return ids;
    };

    if (!a.tree.empty()) {
        auto tree = deserialize_tree(read_text_file(a.tree));
        std::vector<const EvidenceRecord*> all;
        for (const auto& e : evidence) all.push_back(&e);
        result = stats_to_json(tree_stats(tree, node_ids(all)));
    } else {
        if (a.index_dir.empty()) throw Error(Errc::InvalidConfig, "stats needs --tree or --index-dir");
        std::map<std::string, std::vector<const EvidenceRecord*>> by_doc;
        std::map<std::string, std::string> doc_of;
        if (!a.queries.empty()) {
            for (const auto& q : load_queries(a.queries)) doc_of[q.query_id] = q.doc_id;
        }
        for (const auto& e : evidence) {
            auto it = doc_of.find(e.query_id);
            if (it == doc_of.end()) {
                throw Error(Errc::IoError, "evidence for unknown query '" + e.query_id + "'");
            }
            by_doc[it->second].push_back(&e);
        }
        std::vector<TreeStatsReport> reports;
        result["documents"] = nlohmann::ordered_json::array();
        for (const auto& path : files_with_suffix(a.index_dir, kTreeSuffix)) {
            auto name = path.filename().string();
            auto stem = name.substr(0, name.size() - kTreeSuffix.size());
            auto tree = deserialize_tree(read_text_file(path));
            std::vector<const EvidenceRecord*> records;
            for (const auto& [doc_id, recs] : by_doc) {
                if (file_stem_for(doc_id) == stem) records.insert(records.end(), recs.begin(), recs.end());
            }
            auto report = tree_stats(tree, node_ids(records));
            reports.push_back(report);
            auto j = stats_to_json(report);
            j["document"] = stem;
            result["documents"].push_back(std::move(j));
        }
        result["mean"] = stats_to_json(mean_stats(reports));
    }
    auto text = result.dump(2) + "\n";
    if (!a.out.empty()) {
        write_text_file(a.out, text);
    } else {
        os << text;
    }
}

void
print_error(std::ostream& err, std::string_view code, std::string_view message) {
    nlohmann::ordered_json j;
    j["error"]["code"] = code;
    j["error"]["message"] = message;
    err << j.dump() << '\n';
}

}  // namespace

int
run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discourse-structured retrieval pipeline", "disr"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file mirroring the flags; flags override it");
    std::string simd = "auto";
    app.add_option("--simd", simd, "Numeric kernels: auto, scalar, avx2, neon")->capture_default_str();

    ConvertArgs convert;
    auto* c_convert = app.add_subcommand("convert-rst", "EDU tree -> sentence-level tree");
    c_convert->add_option("--input", convert.input, "EDU tree JSON")->required();
    c_convert->add_option("--out", convert.out, "Output tree JSON")->required();

    BuildArgs build;
    auto* c_build = app.add_subcommand("build-tree", "Corpus -> one tree file per document");
    c_build->add_option("--corpus", build.corpus, "Corpus JSON")->required();
    c_build->add_option("--out-dir", build.out_dir, "Directory for <doc_id>.tree.json")->required();
    c_build->add_option("--strategy", build.strategy,
                        "disretrieval | bisection | flatten-chunk | flatten-sentence")
        ->capture_default_str();
    c_build->add_option("--tau", build.tau, "Summarize when children have >= tau words")
        ->capture_default_str();
    c_build->add_option("--max-summary-words", build.max_summary_words)->capture_default_str();
    c_build->add_option("--retry-limit", build.retry_limit)->capture_default_str();
    c_build->add_option("--fallback", build.fallback, "concat-truncate | propagate")->capture_default_str();
    c_build->add_option("--summarizer", build.summarizer, "concat | sidecar | URL")->capture_default_str();
    c_build->add_option("--parser", build.parser, "heuristic | weights:<path>")->capture_default_str();
    c_build->add_flag("--split-sentences", build.split_sentences, "Split raw paragraph text into sentences");
    c_build->add_option("--workers", build.workers, "Documents built in parallel")->capture_default_str();
    c_build->add_option("--chunk-words", build.chunk_words, "Chunk size for flatten-chunk")
        ->capture_default_str();
    c_build->add_option("--max-in-flight", build.max_in_flight)->capture_default_str();

    EmbedArgs embed;
    auto* c_embed = app.add_subcommand("embed", "Tree files -> embedding files");
    c_embed->add_option("--index-dir", embed.index_dir, "Directory with <doc_id>.tree.json")->required();
    c_embed->add_option("--out-dir", embed.out_dir, "Defaults to --index-dir");
    c_embed->add_option("--encoder", embed.encoder, "mock | mock:<dim> | sidecar | URL")->capture_default_str();
    c_embed->add_option("--batch-size", embed.batch_size)->capture_default_str();
    c_embed->add_option("--workers", embed.workers)->capture_default_str();
    c_embed->add_option("--max-in-flight", embed.max_in_flight)->capture_default_str();

    RetrieveArgs ret;
    auto* c_ret = app.add_subcommand("retrieve", "Queries + index -> evidence JSONL");
    c_ret->add_option("--index-dir", ret.index_dir)->required();
    c_ret->add_option("--queries", ret.queries)->required();
    c_ret->add_option("--out", ret.out, "Evidence JSONL")->required();
    c_ret->add_option("--encoder", ret.encoder)->capture_default_str();
    c_ret->add_option("--variant", ret.variant,
                      "topk-original | topk-ranked | all-filtered-leaves | leaf-only | summary-nodes")
        ->capture_default_str();
    auto* bw = c_ret->add_option("--budget-words", ret.budget_words, "Word budget (default 200)");
    auto* bn = c_ret->add_option("--budget-nodes", ret.budget_nodes, "Evidence-size budget K");
    bw->excludes(bn);
    c_ret->add_option("--topk", ret.topk, "Leaves taken per internal node")->capture_default_str();
    c_ret->add_option("--max-in-flight", ret.max_in_flight)->capture_default_str();

    AnswerArgs ans;
    auto* c_ans = app.add_subcommand("answer", "Evidence -> predictions file");
    c_ans->add_option("--queries", ans.queries)->required();
    c_ans->add_option("--evidence", ans.evidence)->required();
    c_ans->add_option("--out", ans.out)->required();
    c_ans->add_option("--answerer", ans.answerer, "lead | sidecar | URL")->capture_default_str();
    c_ans->add_option("--mode", ans.mode, "qasper | quality")->capture_default_str();
    c_ans->add_option("--workers", ans.workers)->capture_default_str();
    c_ans->add_option("--max-in-flight", ans.max_in_flight)->capture_default_str();

    EvaluateArgs ev;
    auto* c_ev = app.add_subcommand("evaluate", "Predictions (+ evidence) -> report");
    c_ev->add_option("--predictions", ev.predictions);
    c_ev->add_option("--run", ev.runs, "strategy,budget,encoder,evidence[,predictions]");
    c_ev->add_option("--out", ev.out, "Report JSON");
    c_ev->add_option("--out-text", ev.out_text, "Report table");

    StatsArgs st;
    auto* c_st = app.add_subcommand("stats", "Tree (+ evidence) -> tree statistics");
    c_st->add_option("--tree", st.tree);
    c_st->add_option("--index-dir", st.index_dir);
    c_st->add_option("--queries", st.queries);
    c_st->add_option("--evidence", st.evidence);
    c_st->add_option("--out", st.out);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (!simd::select_kernels(simd)) {
            throw Error(Errc::InvalidConfig, "unsupported --simd '" + simd + "' on this machine");
        }
        if (c_convert->parsed()) cmd_convert_rst(convert);
        if (c_build->parsed()) cmd_build_tree(build);
        if (c_embed->parsed()) cmd_embed(embed);
        if (c_ret->parsed()) cmd_retrieve(ret);
        if (c_ans->parsed()) cmd_answer(ans);
        if (c_ev->parsed()) cmd_evaluate(ev, out);
        if (c_st->parsed()) cmd_stats(st, out);
    } catch (const Error& e) {
        print_error(err, e.qualified_code(), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error(err, "cli/Internal", e.what());
        return 1;
    }
    return 0;
}

int
run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace disr

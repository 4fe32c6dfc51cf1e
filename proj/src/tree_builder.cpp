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

#include "disr/tree_builder.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "disr/error.h"

namespace disr {

void
EnhancerConfig::validate() const {
    if (tau < 0) throw Error(Errc::InvalidConfig, "tau must be >= 0");
    if (max_summary_words <= 0) throw Error(Errc::InvalidConfig, "max_summary_words must be > 0");
    if (retry_limit < 0) throw Error(Errc::InvalidConfig, "retry_limit must be >= 0");
}

namespace {

DiscourseTree
run_parser(std::vector<ParseUnit> units, const Parser& parser, TreeLevel level) {
    try {
        return parser.parse(std::move(units), level);
    } catch (const Error& e) {
        throw Error(Errc::ParserFailure, std::string("discourse parser failed: ") + e.what());
    }
}

}  // namespace

DiscourseTree
build_paragraph_tree(const Paragraph& paragraph, const Parser& parser) {
    if (paragraph.sentences.empty()) {
        throw Error(Errc::EmptyDocument,
                    "paragraph " + std::to_string(paragraph.para_id) + " has no sentences");
    }
    std::vector<ParseUnit> units;
    units.reserve(paragraph.sentences.size());
    for (const auto& s : paragraph.sentences) units.push_back({s.text, s.leaf_index});
    return run_parser(std::move(units), parser, TreeLevel::Paragraph);
}

std::string
enhance_node_text(std::string_view left,
                  std::string_view right,
                  const EnhancerConfig& cfg,
                  const Summarizer& summarizer) {
    if (word_count(left) + word_count(right) < cfg.tau) {
        std::string out;
        out.reserve(left.size() + right.size() + 1);
        out.append(left);
        out += ' ';
        out.append(right);
        return out;
    }
    std::string last_error = "summarizer returned an empty summary";
    for (int attempt = 0; attempt <= cfg.retry_limit; ++attempt) {
        try {
            auto summary = summarizer.summarize(left, right);
            if (!trim(summary).empty()) {
                return truncate_words(summary, cfg.max_summary_words);
            }
        } catch (const Error& e) {
            if (e.code() != Errc::SummarizerUnavailable) throw;
            last_error = e.what();
        }
    }
    if (cfg.fallback == SummaryFallback::Propagate) {
        throw Error(Errc::SummarizerUnavailable, last_error);
    }
    std::string joined(left);
    joined += ' ';
    joined.append(right);
    return truncate_words(joined, cfg.max_summary_words);
}

DiscourseTree
enhance_tree(const DiscourseTree& tree, const EnhancerConfig& cfg, const Summarizer& summarizer) {
    DiscourseTree out = tree;
    std::vector<std::pair<NodeId, bool>> stack{{tree.root_id(), false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        const auto& n = out.node(id);
        if (n.is_leaf()) continue;
        if (n.children.size() != 2) {
            throw Error(Errc::MalformedTree, "enhancement requires a binary tree");
        }
        if (!expanded) {
            stack.emplace_back(id, true);
            stack.emplace_back(n.children[1], false);
            stack.emplace_back(n.children[0], false);
            continue;
        }
        auto text = enhance_node_text(out.node(n.children[0]).text, out.node(n.children[1]).text,
                                      cfg, summarizer);
        out.set_text(id, std::move(text));
    }
    return out;
}

DiscourseTree
build_document_tree(std::span<const ParagraphUnit> units, const Parser& parser) {
    if (units.empty()) {
        throw Error(Errc::EmptyDocument, "document has no paragraph units");
    }
    std::vector<ParseUnit> parse_units;
    parse_units.reserve(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) {
        parse_units.push_back({units[i].root_text, static_cast<int>(i)});
    }
    return run_parser(std::move(parse_units), parser, TreeLevel::Document);
}

DiscourseTree
build_full(const Document& document,
           const EnhancerConfig& cfg,
           const Parser& parser,
           const Summarizer& summarizer,
           int workers) {
    cfg.validate();
    if (document.paragraphs.empty()) {
        throw Error(Errc::EmptyDocument, "document '" + document.doc_id + "' has no paragraphs");
    }
    const std::size_t n = document.paragraphs.size();
    std::vector<ParagraphUnit> units(n);
    std::vector<std::exception_ptr> failures(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                const auto& para = document.paragraphs[i];
                auto tree = enhance_tree(build_paragraph_tree(para, parser), cfg, summarizer);
                units[i].para_id = para.para_id;
                units[i].root_text = tree.root().text;
                units[i].tree = std::move(tree);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    auto threads = static_cast<std::size_t>(std::max(1, workers));
    if (threads <= 1 || n <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(work);
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    auto doc_tree = enhance_tree(build_document_tree(units, parser), cfg, summarizer);
    std::vector<DiscourseTree> para_trees;
    para_trees.reserve(n);
    for (auto& u : units) para_trees.push_back(std::move(u.tree));
    return integrate_trees(doc_tree, para_trees);
}

}  // namespace disr

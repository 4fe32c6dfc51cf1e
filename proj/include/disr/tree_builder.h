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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disr/backends.h"
#include "disr/discourse_parser.h"
#include "disr/doc_model.h"

namespace disr {

enum class SummaryFallback {
    ConcatTruncate,  // join the children and cut to max_summary_words
    Propagate,       // rethrow SummarizerUnavailable
};

struct EnhancerConfig {
    int tau = 0;
    int max_summary_words = 200;
    int retry_limit = 2;
    SummaryFallback fallback = SummaryFallback::ConcatTruncate;

    /// Throws InvalidConfig.
    void
    validate() const;
};

struct ParagraphUnit {
    int para_id = 0;
    std::string root_text;
    DiscourseTree tree;
};

DiscourseTree
build_paragraph_tree(const Paragraph& paragraph, const Parser& parser);

/// Summarizes when the two children together have at least tau words,
/// otherwise joins them with a single space.
std::string
enhance_node_text(std::string_view left,
                  std::string_view right,
                  const EnhancerConfig& cfg,
                  const Summarizer& summarizer);

/// Fills every internal node's text, children before parents.
DiscourseTree
enhance_tree(const DiscourseTree& tree, const EnhancerConfig& cfg, const Summarizer& summarizer);

DiscourseTree
build_document_tree(std::span<const ParagraphUnit> units, const Parser& parser);

/// Paragraph trees -> enhancement -> document tree over paragraph root
/// texts -> enhancement -> integration. Paragraphs are processed by up to
/// `workers` threads.
DiscourseTree
build_full(const Document& document,
           const EnhancerConfig& cfg,
           const Parser& parser,
           const Summarizer& summarizer,
           int workers = 1);

}  // namespace disr

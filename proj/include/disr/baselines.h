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
#include "disr/doc_model.h"

namespace disr {

struct Chunk {
    std::string text;
    int first_leaf = 0;
    int last_leaf = 0;
    int word_count = 0;

    bool
    operator==(const Chunk&) const = default;
};

/// Greedy left-to-right packing of whole sentences into chunks of at most
/// `max_words` words. A sentence longer than `max_words` is its own chunk.
std::vector<Chunk>
flatten_chunk(const Document& document, int max_words = 100);

/// Every sentence in reading order.
std::vector<Sentence>
flatten_sentence(const Document& document);

inline constexpr std::string_view kBisectRelation = "bisect";

/// Balanced binary tree by recursive midpoint split; the left half gets
/// ceil(n/2) units. Internal texts are left empty for enhance_tree.
DiscourseTree
bisection_tree(std::span<const std::string> units);

/// Unit indices by descending cosine to the query, ties by reading order.
std::vector<int>
rank_flat_units(std::span<const std::string> units, std::string_view query, const Encoder& encoder);

}  // namespace disr

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

#include "disr/baselines.h"

#include <algorithm>
#include <numeric>

#include "disr/error.h"
#include "disr/vector_math.h"

namespace disr {

std::vector<Chunk>
flatten_chunk(const Document& document, int max_words) {
    if (max_words < 1) throw Error(Errc::InvalidConfig, "chunk size must be >= 1 word");
    std::vector<Chunk> chunks;
    bool open = false;
    for (const auto& s : document.sentences()) {
        if (open && chunks.back().word_count + s.word_count <= max_words) {
            auto& c = chunks.back();
            c.text += ' ';
            c.text += s.text;
            c.last_leaf = s.leaf_index;
            c.word_count += s.word_count;
            continue;
        }
        chunks.push_back({s.text, s.leaf_index, s.leaf_index, s.word_count});
        open = true;
    }
    return chunks;
}

std::vector<Sentence>
flatten_sentence(const Document& document) {
    return document.sentences();
}

namespace {

NodeId
bisect(DiscourseTree& tree, std::span<const std::string> units, int offset) {
    if (units.size() == 1) return tree.add_leaf(units.front(), offset);
    auto left_size = (units.size() + 1) / 2;
    NodeId left = bisect(tree, units.first(left_size), offset);
    NodeId right = bisect(tree, units.subspan(left_size), offset + static_cast<int>(left_size));
    return tree.add_internal({left, right}, std::string(kBisectRelation), Nuclearity::NN);
}

}  // namespace

DiscourseTree
bisection_tree(std::span<const std::string> units) {
    if (units.empty()) throw Error(Errc::EmptyInput, "bisection needs at least one unit");
    DiscourseTree tree(TreeLevel::Integrated);
    tree.set_root(bisect(tree, units, 0));
    return tree;
}

std::vector<int>
rank_flat_units(std::span<const std::string> units, std::string_view query, const Encoder& encoder) {
    std::string q(query);
    auto qv = encoder.embed(std::span<const std::string>(&q, 1));
    auto vectors = encoder.embed(units);
    if (qv.size() != 1 || vectors.size() != units.size()) {
        throw Error(Errc::EncoderUnavailable, "encoder returned the wrong number of vectors");
    }
    std::vector<double> scores(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) scores[i] = cosine(qv.front(), vectors[i]);
    std::vector<int> order(units.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace disr

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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "disr/doc_model.h"

namespace disr {

/// Leaves are EDUs; internal nodes may be n-ary.
struct EduNode {
    NodeId id = 0;
    std::string text;
    std::optional<std::string> relation;
    std::optional<Nuclearity> nuclearity;
    std::vector<NodeId> children;
    std::optional<int> edu_index;
    std::optional<int> sentence_index;

    bool
    is_leaf() const {
        return children.empty();
    }
};

struct EduTree {
    std::vector<EduNode> nodes;  // nodes[i].id == i
    NodeId root_id = 0;
};

/// Structure checks (MalformedTree), strictly increasing edu_index, and
/// contiguous non-decreasing sentence_index in-order (NonContiguousSentence).
void
validate_edu_tree(const EduTree& tree);

EduTree
edu_tree_from_json(const nlohmann::json& j);

EduTree
parse_edu_tree(std::string_view json_text);

struct RelationLabel {
    std::optional<std::string> relation;
    std::optional<Nuclearity> nuclearity;

    bool
    operator==(const RelationLabel&) const = default;
};

/// Label stored at the lowest common ancestor of the two sentences' EDUs.
/// Throws UnknownSentence.
RelationLabel
relation_between(const EduTree& tree, int sentence_a, int sentence_b);

/// Collapses each sentence's EDUs into one leaf (texts joined by a space);
/// structure above sentences follows the adjacent-sentence LCAs. Leaf
/// indices are the sentence ranks 0..m-1. Output is binarized.
DiscourseTree
merge_edus(const EduTree& tree);

/// Right-branching binarization; introduced nodes copy the parent's label.
/// Throws DegenerateNode for internal nodes with fewer than two children.
DiscourseTree
binarize(const DiscourseTree& tree);

}  // namespace disr

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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace disr {

using NodeId = int;

enum class Nuclearity { NN, NS, SN };

std::string_view
to_string(Nuclearity n);

std::optional<Nuclearity>
parse_nuclearity(std::string_view s);

enum class NodeKind { Leaf, Internal };

enum class TreeLevel { Paragraph, Document, Integrated };

std::string_view
to_string(TreeLevel level);

std::optional<TreeLevel>
parse_tree_level(std::string_view s);

// ---------------------------------------------------------------------------
// Text helpers. A "word" is a whitespace-separated token of the trimmed text;
// the same definition drives the enhancement threshold, chunking and budgets.

std::vector<std::string_view>
split_words(std::string_view text);

int
word_count(std::string_view text);

std::string_view
trim(std::string_view text);

/// Keeps the first max_words words, re-joined with single spaces.
/// Text that already fits is returned unchanged.
std::string
truncate_words(std::string_view text, int max_words);

/// Fallback splitter: breaks after '.', '?' or '!' when followed by whitespace.
std::vector<std::string>
naive_split_sentences(std::string_view text);

// ---------------------------------------------------------------------------
// Documents

struct Sentence {
    std::string text;
    int leaf_index = 0;
    int word_count = 0;
};

struct Paragraph {
    int para_id = 0;
    std::vector<Sentence> sentences;
};

struct Document {
    std::string doc_id;
    std::vector<Paragraph> paragraphs;

    std::size_t
    sentence_count() const;

    /// All sentences in reading order.
    std::vector<Sentence>
    sentences() const;
};

/// Builds a Document from raw paragraph text lists, assigning global
/// leaf indices in reading order. Throws EmptyDocument on any empty
/// paragraph or blank sentence.
Document
make_document(std::string doc_id, const std::vector<std::vector<std::string>>& paragraphs);

std::vector<Document>
parse_corpus(std::string_view json_text, bool split_sentences = false);

std::vector<Document>
load_corpus(const std::filesystem::path& path, bool split_sentences = false);

// ---------------------------------------------------------------------------
// Discourse trees

struct DiscourseNode {
    NodeId id = 0;
    NodeKind kind = NodeKind::Leaf;
    std::string text;
    std::optional<std::string> relation;
    std::optional<Nuclearity> nuclearity;
    std::vector<NodeId> children;
    std::optional<int> leaf_index;
    int depth = 0;

    bool
    is_leaf() const {
        return kind == NodeKind::Leaf;
    }

    bool
    operator==(const DiscourseNode&) const = default;
};

/// Rooted tree stored as a dense node array (node_id == position). Nodes are
/// appended in construction order; set_root() fixes the root and depths.
class DiscourseTree {
public:
    DiscourseTree() = default;
    explicit DiscourseTree(TreeLevel level) : level_(level) {
    }

    /// Adopts a complete node array (node i must have id i) and sets the root.
    static DiscourseTree
    from_nodes(TreeLevel level, std::vector<DiscourseNode> nodes, NodeId root);

    NodeId
    add_leaf(std::string text, int leaf_index);

    NodeId
    add_internal(std::vector<NodeId> children,
                 std::optional<std::string> relation = std::nullopt,
                 std::optional<Nuclearity> nuclearity = std::nullopt,
                 std::string text = {});

    /// Sets the root and recomputes every depth. Throws MalformedTree when
    /// some node is unreachable or reachable twice.
    void
    set_root(NodeId root);

    void
    set_text(NodeId id, std::string text);

    void
    set_level(TreeLevel level) {
        level_ = level;
    }

    const DiscourseNode&
    node(NodeId id) const;

    bool
    contains(NodeId id) const {
        return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
    }

    std::span<const DiscourseNode>
    nodes() const {
        return nodes_;
    }

    std::size_t
    size() const {
        return nodes_.size();
    }

    NodeId
    root_id() const {
        return root_;
    }

    const DiscourseNode&
    root() const {
        return node(root_);
    }

    TreeLevel
    level() const {
        return level_;
    }

    std::size_t
    leaf_count() const;

    bool
    operator==(const DiscourseTree&) const = default;

private:
    std::vector<DiscourseNode> nodes_;
    NodeId root_ = -1;
    TreeLevel level_ = TreeLevel::Paragraph;
};

/// Checks single root, acyclicity, unique parents, leaf/child consistency and
/// strictly increasing in-order leaf_index. With require_binary, every
/// internal node must have exactly two children. Throws MalformedTree.
void
validate_tree(const DiscourseTree& tree, bool require_binary = true);

/// parent[id], -1 for the root.
std::vector<NodeId>
parent_ids(const DiscourseTree& tree);

/// Leaves under node_id in increasing leaf_index order.
std::vector<NodeId>
leaves_in_order(const DiscourseTree& tree, NodeId node_id);

/// Number of leaves below every node (1 for a leaf).
std::vector<int>
subtree_leaf_counts(const DiscourseTree& tree);

/// Same shape, relations, nuclearity, leaf texts and leaf indices.
/// Node ids, depths and internal texts are ignored.
bool
structurally_equal(const DiscourseTree& a, const DiscourseTree& b);

/// Each doc_tree leaf i is replaced by para_trees[i]. Multi-sentence
/// paragraphs keep the doc leaf's (enhanced) text on the spliced root.
/// Leaf indices are renumbered to reading order.
DiscourseTree
integrate_trees(const DiscourseTree& doc_tree, std::span<const DiscourseTree> para_trees);

struct TreeStatsReport {
    double avg_sentence_length = 0.0;
    double avg_mid_node_depth = 0.0;
    double avg_leaf_num = 0.0;
    double mid_node_percentage = 0.0;
};

TreeStatsReport
tree_stats(const DiscourseTree& tree, std::span<const NodeId> retrieved_nodes);

}  // namespace disr

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

#include "disr/doc_model.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "disr/error.h"

namespace disr {

namespace {

bool
is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string_view
to_string(Nuclearity n) {
    switch (n) {
        case Nuclearity::NN: return "NN";
        case Nuclearity::NS: return "NS";
        case Nuclearity::SN: return "SN";
    }
    return "NN";
}

std::optional<Nuclearity>
parse_nuclearity(std::string_view s) {
    if (s == "NN") return Nuclearity::NN;
    if (s == "NS") return Nuclearity::NS;
    if (s == "SN") return Nuclearity::SN;
    return std::nullopt;
}

std::string_view
to_string(TreeLevel level) {
    switch (level) {
        case TreeLevel::Paragraph: return "paragraph";
        case TreeLevel::Document: return "document";
        case TreeLevel::Integrated: return "integrated";
    }
    return "paragraph";
}

std::optional<TreeLevel>
parse_tree_level(std::string_view s) {
    if (s == "paragraph") return TreeLevel::Paragraph;
    if (s == "document") return TreeLevel::Document;
    if (s == "integrated") return TreeLevel::Integrated;
    return std::nullopt;
}

std::vector<std::string_view>
split_words(std::string_view text) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) {
            words.push_back(text.substr(start, i - start));
        }
    }
    return words;
}

int
word_count(std::string_view text) {
    int count = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

std::string_view
trim(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    return text.substr(b, e - b);
}

std::string
truncate_words(std::string_view text, int max_words) {
    auto words = split_words(text);
    if (static_cast<int>(words.size()) <= max_words) {
        return std::string(text);
    }
    std::string out;
    for (int i = 0; i < max_words; ++i) {
        if (i > 0) out += ' ';
        out += words[i];
    }
    return out;
}

std::vector<std::string>
naive_split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if ((c == '.' || c == '?' || c == '!') && i + 1 < text.size() && is_space(text[i + 1])) {
            auto piece = trim(text.substr(start, i + 1 - start));
            if (!piece.empty()) out.emplace_back(piece);
            start = i + 1;
        }
    }
    auto tail = trim(text.substr(std::min(start, text.size())));
    if (!tail.empty()) out.emplace_back(tail);
    return out;
}

// ---------------------------------------------------------------------------

std::size_t
Document::sentence_count() const {
    std::size_t n = 0;
    for (const auto& p : paragraphs) n += p.sentences.size();
    return n;
}

std::vector<Sentence>
Document::sentences() const {
    std::vector<Sentence> out;
    out.reserve(sentence_count());
    for (const auto& p : paragraphs) {
        out.insert(out.end(), p.sentences.begin(), p.sentences.end());
    }
    return out;
}

Document
make_document(std::string doc_id, const std::vector<std::vector<std::string>>& paragraphs) {
    if (paragraphs.empty()) {
        throw Error(Errc::EmptyDocument, "document '" + doc_id + "' has no paragraphs");
    }
    Document doc;
    doc.doc_id = std::move(doc_id);
    int leaf = 0;
    for (std::size_t p = 0; p < paragraphs.size(); ++p) {
        if (paragraphs[p].empty()) {
            throw Error(Errc::EmptyDocument,
                        "document '" + doc.doc_id + "' paragraph " + std::to_string(p) +
                            " has no sentences");
        }
        Paragraph para;
        para.para_id = static_cast<int>(p);
        for (const auto& raw : paragraphs[p]) {
            auto text = trim(raw);
            if (text.empty()) {
                throw Error(Errc::EmptyDocument,
                            "document '" + doc.doc_id + "' paragraph " + std::to_string(p) +
                                " contains an empty sentence");
            }
            para.sentences.push_back({std::string(text), leaf++, word_count(text)});
        }
        doc.paragraphs.push_back(std::move(para));
    }
    return doc;
}

std::vector<Document>
parse_corpus(std::string_view json_text, bool split_sentences) {
    using nlohmann::json;
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::MalformedCorpus, std::string("corpus is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("documents") || !root["documents"].is_array()) {
        throw Error(Errc::MalformedCorpus, "corpus must be an object with a 'documents' array");
    }
    std::vector<Document> docs;
    for (const auto& d : root["documents"]) {
        if (!d.is_object() || !d.contains("doc_id") || !d["doc_id"].is_string() ||
            !d.contains("paragraphs") || !d["paragraphs"].is_array()) {
            throw Error(Errc::MalformedCorpus, "each document needs 'doc_id' and 'paragraphs'");
        }
        std::vector<std::vector<std::string>> paragraphs;
        for (const auto& p : d["paragraphs"]) {
            if (!p.is_array()) {
                throw Error(Errc::MalformedCorpus, "a paragraph must be an array of strings");
            }
            std::vector<std::string> sentences;
            for (const auto& s : p) {
                if (!s.is_string()) {
                    throw Error(Errc::MalformedCorpus, "a sentence must be a string");
                }
                if (split_sentences) {
                    auto parts = naive_split_sentences(s.get<std::string>());
                    if (parts.empty()) {
                        sentences.emplace_back();  // rejected by make_document
                    }
                    sentences.insert(sentences.end(), parts.begin(), parts.end());
                } else {
                    sentences.push_back(s.get<std::string>());
                }
            }
            paragraphs.push_back(std::move(sentences));
        }
        docs.push_back(make_document(d["doc_id"].get<std::string>(), paragraphs));
    }
    return docs;
}

std::vector<Document>
load_corpus(const std::filesystem::path& path, bool split_sentences) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::IoError, "cannot open corpus " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_corpus(buf.str(), split_sentences);
}

// ---------------------------------------------------------------------------

DiscourseTree
DiscourseTree::from_nodes(TreeLevel level, std::vector<DiscourseNode> nodes, NodeId root) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id != static_cast<NodeId>(i)) {
            throw Error(Errc::MalformedTree, "node ids must equal their positions");
        }
        for (NodeId c : nodes[i].children) {
            if (c < 0 || static_cast<std::size_t>(c) >= nodes.size()) {
                throw Error(Errc::MalformedTree, "dangling child " + std::to_string(c));
            }
        }
    }
    DiscourseTree tree(level);
    tree.nodes_ = std::move(nodes);
    tree.set_root(root);
    return tree;
}

NodeId
DiscourseTree::add_leaf(std::string text, int leaf_index) {
    DiscourseNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::Leaf;
    n.text = std::move(text);
    n.leaf_index = leaf_index;
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
}

NodeId
DiscourseTree::add_internal(std::vector<NodeId> children,
                            std::optional<std::string> relation,
                            std::optional<Nuclearity> nuclearity,
                            std::string text) {
    for (NodeId c : children) {
        if (!contains(c)) {
            throw Error(Errc::UnknownNode, "child node " + std::to_string(c) + " does not exist");
        }
    }
    DiscourseNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::Internal;
    n.text = std::move(text);
    n.relation = std::move(relation);
    n.nuclearity = nuclearity;
    n.children = std::move(children);
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
}

void
DiscourseTree::set_root(NodeId root) {
    if (!contains(root)) {
        throw Error(Errc::UnknownNode, "root node " + std::to_string(root) + " does not exist");
    }
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<NodeId> frontier{root};
    nodes_[root].depth = 0;
    seen[root] = 1;
    std::size_t visited = 0;
    while (!frontier.empty()) {
        NodeId id = frontier.back();
        frontier.pop_back();
        ++visited;
        for (NodeId c : nodes_[id].children) {
            if (seen[c]) {
                throw Error(Errc::MalformedTree,
                            "node " + std::to_string(c) + " is reachable more than once");
            }
            seen[c] = 1;
            nodes_[c].depth = nodes_[id].depth + 1;
            frontier.push_back(c);
        }
    }
    if (visited != nodes_.size()) {
        throw Error(Errc::MalformedTree, "tree has nodes unreachable from the root");
    }
    root_ = root;
}

void
DiscourseTree::set_text(NodeId id, std::string text) {
    if (!contains(id)) {
        throw Error(Errc::UnknownNode, "node " + std::to_string(id) + " does not exist");
    }
    nodes_[id].text = std::move(text);
}

const DiscourseNode&
DiscourseTree::node(NodeId id) const {
    if (!contains(id)) {
        throw Error(Errc::UnknownNode, "node " + std::to_string(id) + " does not exist");
    }
    return nodes_[id];
}

std::size_t
DiscourseTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.is_leaf(); }));
}

void
validate_tree(const DiscourseTree& tree, bool require_binary) {
    auto fail = [](const std::string& why) { throw Error(Errc::MalformedTree, why); };
    if (tree.size() == 0) fail("tree is empty");
    if (!tree.contains(tree.root_id())) fail("tree has no root");
    std::vector<int> parent_count(tree.size(), 0);
    for (const auto& n : tree.nodes()) {
        if (n.is_leaf()) {
            if (!n.children.empty()) fail("leaf " + std::to_string(n.id) + " has children");
            if (!n.leaf_index) fail("leaf " + std::to_string(n.id) + " has no leaf_index");
        } else {
            if (n.leaf_index) fail("internal node " + std::to_string(n.id) + " has a leaf_index");
            if (n.children.empty()) fail("internal node " + std::to_string(n.id) + " has no children");
            if (require_binary && n.children.size() != 2) {
                fail("internal node " + std::to_string(n.id) + " is not binary");
            }
        }
        for (NodeId c : n.children) {
            if (!tree.contains(c)) fail("dangling child " + std::to_string(c));
            ++parent_count[c];
        }
    }
    for (const auto& n : tree.nodes()) {
        int expected = n.id == tree.root_id() ? 0 : 1;
        if (parent_count[n.id] != expected) {
            fail("node " + std::to_string(n.id) + " has " + std::to_string(parent_count[n.id]) +
                 " parents");
        }
    }
    // Unique parents plus a parentless root can still hide a detached cycle.
    std::size_t reachable = 0;
    std::vector<NodeId> stack{tree.root_id()};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (++reachable > tree.size()) fail("tree contains a cycle");
        for (NodeId c : tree.node(id).children) stack.push_back(c);
    }
    if (reachable != tree.size()) fail("tree contains a cycle or unreachable nodes");

    int previous = -1;
    bool first = true;
    for (NodeId leaf : leaves_in_order(tree, tree.root_id())) {
        int idx = *tree.node(leaf).leaf_index;
        if (!first && idx <= previous) fail("leaf_index is not strictly increasing in order");
        previous = idx;
        first = false;
    }
}

std::vector<NodeId>
parent_ids(const DiscourseTree& tree) {
    std::vector<NodeId> parent(tree.size(), -1);
    for (const auto& n : tree.nodes()) {
        for (NodeId c : n.children) parent[c] = n.id;
    }
    return parent;
}

std::vector<NodeId>
leaves_in_order(const DiscourseTree& tree, NodeId node_id) {
    tree.node(node_id);  // UnknownNode check
    std::vector<NodeId> out;
    std::vector<NodeId> stack{node_id};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        const auto& n = tree.node(id);
        if (n.is_leaf()) {
            out.push_back(id);
            continue;
        }
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

std::vector<int>
subtree_leaf_counts(const DiscourseTree& tree) {
    std::vector<int> counts(tree.size(), 0);
    // Children before parents: reverse of a pre-order walk.
    std::vector<NodeId> order;
    order.reserve(tree.size());
    std::vector<NodeId> stack{tree.root_id()};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        order.push_back(id);
        for (NodeId c : tree.node(id).children) stack.push_back(c);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto& n = tree.node(*it);
        if (n.is_leaf()) {
            counts[*it] = 1;
        } else {
            for (NodeId c : n.children) counts[*it] += counts[c];
        }
    }
    return counts;
}

bool
structurally_equal(const DiscourseTree& a, const DiscourseTree& b) {
    if (a.size() != b.size()) return false;
    if (a.size() == 0) return true;
    std::vector<std::pair<NodeId, NodeId>> stack{{a.root_id(), b.root_id()}};
    while (!stack.empty()) {
        auto [ia, ib] = stack.back();
        stack.pop_back();
        const auto& na = a.node(ia);
        const auto& nb = b.node(ib);
        if (na.kind != nb.kind || na.children.size() != nb.children.size()) return false;
        if (na.is_leaf()) {
            if (na.text != nb.text || na.leaf_index != nb.leaf_index) return false;
            continue;
        }
        if (na.relation != nb.relation || na.nuclearity != nb.nuclearity) return false;
        for (std::size_t i = 0; i < na.children.size(); ++i) {
            stack.emplace_back(na.children[i], nb.children[i]);
        }
    }
    return true;
}

namespace {

/// Copies the subtree of `src` rooted at `id` into `dst` in post-order.
/// `root_override` replaces the text of the copied root when set.
NodeId
copy_subtree(const DiscourseTree& src,
             NodeId id,
             DiscourseTree& dst,
             int& next_leaf,
             const std::string* root_override) {
    const auto& n = src.node(id);
    if (n.is_leaf()) {
        return dst.add_leaf(n.text, next_leaf++);
    }
    std::vector<NodeId> kids;
    kids.reserve(n.children.size());
    for (NodeId c : n.children) {
        kids.push_back(copy_subtree(src, c, dst, next_leaf, nullptr));
    }
    return dst.add_internal(std::move(kids), n.relation, n.nuclearity,
                            root_override != nullptr ? *root_override : n.text);
}

NodeId
splice(const DiscourseTree& doc_tree,
       NodeId id,
       std::span<const DiscourseTree> para_trees,
       DiscourseTree& dst,
       std::size_t& next_para,
       int& next_leaf) {
    const auto& n = doc_tree.node(id);
    if (n.is_leaf()) {
        const auto& para = para_trees[next_para++];
        return copy_subtree(para, para.root_id(), dst, next_leaf,
                            para.root().is_leaf() ? nullptr : &n.text);
    }
    std::vector<NodeId> kids;
    kids.reserve(n.children.size());
    for (NodeId c : n.children) {
        kids.push_back(splice(doc_tree, c, para_trees, dst, next_para, next_leaf));
    }
    return dst.add_internal(std::move(kids), n.relation, n.nuclearity, n.text);
}

}  // namespace

DiscourseTree
integrate_trees(const DiscourseTree& doc_tree, std::span<const DiscourseTree> para_trees) {
    auto doc_leaves = leaves_in_order(doc_tree, doc_tree.root_id());
    if (doc_leaves.size() != para_trees.size()) {
        throw Error(Errc::ArityMismatch,
                    "document tree has " + std::to_string(doc_leaves.size()) + " leaves but " +
                        std::to_string(para_trees.size()) + " paragraph trees were given");
    }
    DiscourseTree out(TreeLevel::Integrated);
    std::size_t next_para = 0;
    int next_leaf = 0;
    out.set_root(splice(doc_tree, doc_tree.root_id(), para_trees, out, next_para, next_leaf));
    return out;
}

TreeStatsReport
tree_stats(const DiscourseTree& tree, std::span<const NodeId> retrieved_nodes) {
    for (NodeId id : retrieved_nodes) tree.node(id);

    TreeStatsReport report;
    std::size_t leaves = 0;
    std::size_t words = 0;
    for (const auto& n : tree.nodes()) {
        if (n.is_leaf()) {
            ++leaves;
            words += static_cast<std::size_t>(word_count(n.text));
        }
    }
    if (leaves > 0) report.avg_sentence_length = static_cast<double>(words) / leaves;

    auto counts = subtree_leaf_counts(tree);
    std::size_t internal = 0;
    double depth_sum = 0.0;
    double leaf_sum = 0.0;
    for (NodeId id : retrieved_nodes) {
        const auto& n = tree.node(id);
        if (n.is_leaf()) continue;
        ++internal;
        depth_sum += n.depth;
        leaf_sum += counts[id];
    }
    if (internal > 0) {
        report.avg_mid_node_depth = depth_sum / internal;
        report.avg_leaf_num = leaf_sum / internal;
    }
    if (!retrieved_nodes.empty()) {
        report.mid_node_percentage = 100.0 * internal / retrieved_nodes.size();
    }
    return report;
}

}  // namespace disr

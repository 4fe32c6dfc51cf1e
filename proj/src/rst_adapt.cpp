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

#include "disr/rst_adapt.h"

#include <algorithm>
#include <map>

#include "disr/error.h"
#include "disr/tree_json.h"

namespace disr {

namespace {

std::vector<NodeId>
edu_leaves_in_order(const EduTree& tree) {
    std::vector<NodeId> out;
    std::vector<NodeId> stack{tree.root_id};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        const auto& n = tree.nodes[static_cast<std::size_t>(id)];
        if (n.is_leaf()) {
            out.push_back(id);
        } else {
            for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
        }
    }
    return out;
}

/// Parent/depth tables plus per-sentence first/last EDU leaves.
struct EduIndex {
    std::vector<NodeId> parent;
    std::vector<int> depth;
    std::vector<NodeId> leaves;
    std::map<int, std::pair<NodeId, NodeId>> sentence_span;  // sentence -> (first, last) EDU
    std::vector<int> sentences;                               // distinct, in order

    explicit EduIndex(const EduTree& tree)
        : parent(tree.nodes.size(), -1), depth(tree.nodes.size(), 0) {
        std::vector<NodeId> stack{tree.root_id};
        while (!stack.empty()) {
            NodeId id = stack.back();
            stack.pop_back();
            for (NodeId c : tree.nodes[static_cast<std::size_t>(id)].children) {
                parent[c] = id;
                depth[c] = depth[id] + 1;
                stack.push_back(c);
            }
        }
        leaves = edu_leaves_in_order(tree);
        for (NodeId leaf : leaves) {
            int s = *tree.nodes[static_cast<std::size_t>(leaf)].sentence_index;
            auto it = sentence_span.find(s);
            if (it == sentence_span.end()) {
                sentence_span.emplace(s, std::make_pair(leaf, leaf));
                sentences.push_back(s);
            } else {
                it->second.second = leaf;
            }
        }
    }

    NodeId
    lca(NodeId a, NodeId b) const {
        while (depth[a] > depth[b]) a = parent[a];
        while (depth[b] > depth[a]) b = parent[b];
        while (a != b) {
            a = parent[a];
            b = parent[b];
        }
        return a;
    }

    /// Lowest node covering every EDU of both sentences.
    NodeId
    sentence_lca(int sa, int sb) const {
        const auto& a = sentence_span.at(sa);
        const auto& b = sentence_span.at(sb);
        return lca(lca(a.first, a.second), lca(b.first, b.second));
    }
};

}  // namespace

void
validate_edu_tree(const EduTree& tree) {
    auto fail = [](const std::string& why) { throw Error(Errc::MalformedTree, why); };
    if (tree.nodes.empty()) fail("EDU tree is empty");
    if (tree.root_id < 0 || static_cast<std::size_t>(tree.root_id) >= tree.nodes.size()) {
        fail("EDU tree root out of range");
    }
    std::vector<int> parents(tree.nodes.size(), 0);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& n = tree.nodes[i];
        if (n.id != static_cast<NodeId>(i)) fail("EDU node ids must equal positions");
        if (n.is_leaf() && (!n.edu_index || !n.sentence_index)) {
            fail("EDU leaf " + std::to_string(i) + " needs edu_index and sentence_index");
        }
        for (NodeId c : n.children) {
            if (c < 0 || static_cast<std::size_t>(c) >= tree.nodes.size()) fail("dangling child");
            ++parents[c];
        }
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        int expected = static_cast<NodeId>(i) == tree.root_id ? 0 : 1;
        if (parents[i] != expected) fail("EDU node " + std::to_string(i) + " has a bad parent count");
    }
    std::size_t reachable = 0;
    std::vector<NodeId> stack{tree.root_id};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (++reachable > tree.nodes.size()) fail("EDU tree has a cycle");
        for (NodeId c : tree.nodes[static_cast<std::size_t>(id)].children) stack.push_back(c);
    }
    if (reachable != tree.nodes.size()) fail("EDU tree has unreachable nodes");

    auto leaves = edu_leaves_in_order(tree);
    for (std::size_t i = 1; i < leaves.size(); ++i) {
        const auto& prev = tree.nodes[static_cast<std::size_t>(leaves[i - 1])];
        const auto& cur = tree.nodes[static_cast<std::size_t>(leaves[i])];
        if (*cur.edu_index <= *prev.edu_index) fail("edu_index must increase in reading order");
        if (*cur.sentence_index < *prev.sentence_index) {
            throw Error(Errc::NonContiguousSentence,
                        "sentence " + std::to_string(*prev.sentence_index) +
                            " resumes after sentence " + std::to_string(*cur.sentence_index));
        }
    }
}

EduTree
edu_tree_from_json(const nlohmann::json& j) {
    auto fail = [](const std::string& why) { throw Error(Errc::MalformedTree, why); };
    if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array() ||
        !j.contains("root_id") || !j["root_id"].is_number_integer()) {
        fail("EDU tree JSON needs 'root_id' and a 'nodes' array");
    }
    EduTree tree;
    tree.nodes.resize(j["nodes"].size());
    std::vector<char> seen(tree.nodes.size(), 0);
    try {
        for (const auto& jn : j["nodes"]) {
            auto id = jn.at("id").get<long long>();
            if (id < 0 || static_cast<std::size_t>(id) >= tree.nodes.size() || seen[id]) {
                fail("EDU node ids must be unique and dense from 0");
            }
            seen[id] = 1;
            EduNode n;
            n.id = static_cast<NodeId>(id);
            n.text = jn.value("text", std::string());
            if (jn.contains("relation") && !jn["relation"].is_null()) {
                n.relation = jn["relation"].get<std::string>();
            }
            if (jn.contains("nuclearity") && !jn["nuclearity"].is_null()) {
                n.nuclearity = parse_nuclearity(jn["nuclearity"].get<std::string>());
                if (!n.nuclearity) fail("invalid nuclearity on EDU node " + std::to_string(id));
            }
            if (jn.contains("children")) n.children = jn["children"].get<std::vector<NodeId>>();
            if (jn.contains("edu_index") && !jn["edu_index"].is_null()) {
                n.edu_index = jn["edu_index"].get<int>();
            }
            if (jn.contains("sentence_index") && !jn["sentence_index"].is_null()) {
                n.sentence_index = jn["sentence_index"].get<int>();
            }
            auto kind = jn.value("kind", std::string(n.children.empty() ? "leaf" : "internal"));
            if ((kind == "leaf") != n.children.empty()) {
                fail("EDU node " + std::to_string(id) + " kind disagrees with its children");
            }
            tree.nodes[static_cast<std::size_t>(id)] = std::move(n);
        }
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("bad EDU tree: ") + e.what());
    }
    tree.root_id = j["root_id"].get<NodeId>();
    validate_edu_tree(tree);
    return tree;
}

EduTree
parse_edu_tree(std::string_view json_text) {
    return edu_tree_from_json(parse_json(json_text, Errc::MalformedTree));
}

RelationLabel
relation_between(const EduTree& tree, int sentence_a, int sentence_b) {
    EduIndex index(tree);
    for (int s : {sentence_a, sentence_b}) {
        if (!index.sentence_span.count(s)) {
            throw Error(Errc::UnknownSentence, "sentence " + std::to_string(s) + " is not in the tree");
        }
    }
    if (sentence_a == sentence_b) {
        throw Error(Errc::UnknownSentence, "relation_between needs two distinct sentences");
    }
    const auto& n = tree.nodes[static_cast<std::size_t>(index.sentence_lca(sentence_a, sentence_b))];
    return {n.relation, n.nuclearity};
}

namespace {

NodeId
build_sentence_span(const EduTree& tree,
                    const EduIndex& index,
                    std::size_t lo,
                    std::size_t hi,
                    DiscourseTree& out) {
    if (lo == hi) {
        int s = index.sentences[lo];
        const auto& [first, last] = index.sentence_span.at(s);
        std::string text;
        bool inside = false;
        for (NodeId leaf : index.leaves) {
            if (leaf == first) inside = true;
            if (inside) {
                auto piece = trim(tree.nodes[static_cast<std::size_t>(leaf)].text);
                if (!piece.empty()) {
                    if (!text.empty()) text += ' ';
                    text += piece;
                }
            }
            if (leaf == last) break;
        }
        return out.add_leaf(std::move(text), static_cast<int>(lo));
    }
    // Split at every boundary whose sentence-pair LCA is the shallowest.
    std::vector<NodeId> lcas;
    int best_depth = -1;
    for (std::size_t j = lo; j < hi; ++j) {
        NodeId l = index.sentence_lca(index.sentences[j], index.sentences[j + 1]);
        lcas.push_back(l);
        if (best_depth < 0 || index.depth[l] < best_depth) best_depth = index.depth[l];
    }
    std::vector<NodeId> kids;
    std::size_t start = lo;
    NodeId top = -1;
    for (std::size_t j = lo; j < hi; ++j) {
        if (index.depth[lcas[j - lo]] != best_depth) continue;
        top = lcas[j - lo];
        kids.push_back(build_sentence_span(tree, index, start, j, out));
        start = j + 1;
    }
    kids.push_back(build_sentence_span(tree, index, start, hi, out));
    const auto& label = tree.nodes[static_cast<std::size_t>(top)];
    return out.add_internal(std::move(kids), label.relation, label.nuclearity);
}

}  // namespace

DiscourseTree
merge_edus(const EduTree& tree) {
    validate_edu_tree(tree);
    EduIndex index(tree);
    DiscourseTree nary(TreeLevel::Paragraph);
    nary.set_root(build_sentence_span(tree, index, 0, index.sentences.size() - 1, nary));
    return binarize(nary);
}

namespace {

NodeId
binarize_node(const DiscourseTree& src, NodeId id, DiscourseTree& dst) {
    const auto& n = src.node(id);
    if (n.is_leaf()) return dst.add_leaf(n.text, *n.leaf_index);
    if (n.children.size() < 2) {
        throw Error(Errc::DegenerateNode,
                    "internal node " + std::to_string(id) + " has fewer than two children");
    }
    std::vector<NodeId> kids;
    kids.reserve(n.children.size());
    for (NodeId c : n.children) kids.push_back(binarize_node(src, c, dst));
    // Fold from the right: (a, (b, (c, d)))
    NodeId right = kids.back();
    for (std::size_t i = kids.size() - 1; i-- > 1;) {
        right = dst.add_internal({kids[i], right}, n.relation, n.nuclearity);
    }
    return dst.add_internal({kids[0], right}, n.relation, n.nuclearity, n.text);
}

}  // namespace

DiscourseTree
binarize(const DiscourseTree& tree) {
    for (const auto& n : tree.nodes()) {
        if (!n.is_leaf() && n.children.size() < 2) {
            throw Error(Errc::DegenerateNode,
                        "internal node " + std::to_string(n.id) + " has fewer than two children");
        }
    }
    validate_tree(tree, false);
    DiscourseTree out(tree.level());
    out.set_root(binarize_node(tree, tree.root_id(), out));
    return out;
}

}  // namespace disr

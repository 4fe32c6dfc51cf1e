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

#include "disr/embed_retrieve.h"

#include <algorithm>
#include <numeric>

#include "disr/error.h"
#include "disr/simd/kernels.h"

namespace disr {

EmbeddingTree::EmbeddingTree(std::shared_ptr<const DiscourseTree> tree,
                             std::string encoder_id,
                             std::size_t dim,
                             std::vector<double> rows)
    : tree_(std::move(tree)), encoder_id_(std::move(encoder_id)), dim_(dim), rows_(std::move(rows)) {
    if (tree_ == nullptr) {
        throw Error(Errc::MalformedTree, "embedding tree needs a discourse tree");
    }
    if (dim_ == 0 || rows_.size() != tree_->size() * dim_) {
        throw Error(Errc::DimensionMismatch, "embedding tree needs one vector of length dim per node");
    }
}

std::span<const double>
EmbeddingTree::vector(NodeId id) const {
    tree_->node(id);
    return std::span<const double>(rows_).subspan(static_cast<std::size_t>(id) * dim_, dim_);
}

EmbeddingTree
build_embedding_tree(std::shared_ptr<const DiscourseTree> tree,
                     const Encoder& encoder,
                     std::size_t batch_size) {
    if (tree == nullptr || tree->size() == 0) {
        throw Error(Errc::MalformedTree, "cannot embed an empty tree");
    }
    batch_size = std::max<std::size_t>(1, batch_size);
    std::vector<std::string> texts;
    texts.reserve(tree->size());
    for (const auto& n : tree->nodes()) {
        if (trim(n.text).empty()) {
            throw Error(Errc::MalformedTree, "node " + std::to_string(n.id) + " has no text to embed");
        }
        texts.push_back(n.text);
    }
    std::size_t dim = 0;
    std::vector<double> rows;
    for (std::size_t start = 0; start < texts.size(); start += batch_size) {
        auto count = std::min(batch_size, texts.size() - start);
        auto batch = encoder.embed(std::span<const std::string>(texts).subspan(start, count));
        if (batch.size() != count) {
            throw Error(Errc::EncoderUnavailable, "encoder returned " + std::to_string(batch.size()) +
                                                      " vectors for " + std::to_string(count) +
                                                      " texts");
        }
        for (auto& v : batch) {
            if (dim == 0) {
                dim = v.size();
                if (dim == 0) throw Error(Errc::DimensionMismatch, "encoder returned an empty vector");
                rows.reserve(dim * texts.size());
            } else if (v.size() != dim) {
                throw Error(Errc::DimensionMismatch, "encoder returned length " +
                                                         std::to_string(v.size()) + " after " +
                                                         std::to_string(dim));
            }
            rows.insert(rows.end(), v.begin(), v.end());
        }
    }
    return EmbeddingTree(std::move(tree), encoder.id(), dim, std::move(rows));
}

// ---------------------------------------------------------------------------

std::string_view
to_string(RetrievalVariant v) {
    switch (v) {
        case RetrievalVariant::TopKOriginal: return "topk-original";
        case RetrievalVariant::TopKRanked: return "topk-ranked";
        case RetrievalVariant::AllFilteredLeaves: return "all-filtered-leaves";
        case RetrievalVariant::LeafOnly: return "leaf-only";
        case RetrievalVariant::SummaryNodes: return "summary-nodes";
    }
    return "topk-original";
}

std::optional<RetrievalVariant>
parse_retrieval_variant(std::string_view s) {
    for (auto v : {RetrievalVariant::TopKOriginal, RetrievalVariant::TopKRanked,
                   RetrievalVariant::AllFilteredLeaves, RetrievalVariant::LeafOnly,
                   RetrievalVariant::SummaryNodes}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

void
RetrievalConfig::validate() const {
    if (leaf_top_k < 1) throw Error(Errc::InvalidConfig, "leaf top-k must be >= 1");
    if (budget.value < 1) throw Error(Errc::InvalidConfig, "retrieval budget must be positive");
}

std::vector<NodeId>
rank_nodes(std::span<const double> scores) {
    std::vector<NodeId> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });
    return order;
}

std::vector<double>
score_nodes(const EmbeddingTree& etree, std::span<const double> query) {
    if (query.size() != etree.dim()) {
        throw Error(Errc::DimensionMismatch, "query has length " + std::to_string(query.size()) +
                                                 ", tree vectors have " +
                                                 std::to_string(etree.dim()));
    }
    std::vector<double> scores(etree.tree().size());
    for (std::size_t id = 0; id < scores.size(); ++id) {
        scores[id] = cosine(query, etree.vector(static_cast<NodeId>(id)));
    }
    return scores;
}

namespace {

/// Shared state for one selection pass.
class Selector {
public:
    Selector(const DiscourseTree& tree, std::span<const double> scores, const RetrievalConfig& cfg)
        : tree_(tree), scores_(scores), cfg_(cfg), used_(tree.size(), 0), words_(tree.size(), 0) {
        for (const auto& n : tree.nodes()) {
            words_[n.id] = word_count(n.text);
            if (n.is_leaf()) ++unused_leaves_;
        }
    }

    bool
    fits(NodeId id) const {
        return cfg_.budget.kind != BudgetKind::Words || used_words_ + words_[id] <= cfg_.budget.value;
    }

    void
    take(NodeId id) {
        used_[id] = 1;
        used_words_ += words_[id];
        if (tree_.node(id).is_leaf()) --unused_leaves_;
        picked_.push_back(id);
    }

    bool
    used(NodeId id) const {
        return used_[id] != 0;
    }

    /// Nodes: |E| >= K. Words: nothing left that could still fit.
    bool
    budget_reached() const {
        if (cfg_.budget.kind == BudgetKind::Nodes) {
            return static_cast<int>(picked_.size()) >= cfg_.budget.value;
        }
        if (unused_leaves_ == 0) return true;
        for (const auto& n : tree_.nodes()) {
            if (n.is_leaf() && !used_[n.id] && fits(n.id)) return false;
        }
        return true;
    }

    bool
    leaves_exhausted() const {
        return unused_leaves_ == 0;
    }

    /// Unused leaves of the subtree, best score first, ties by leaf_index.
    std::vector<NodeId>
    unused_leaves_ranked(NodeId id) const {
        std::vector<NodeId> leaves;
        for (NodeId leaf : leaves_in_order(tree_, id)) {
            if (!used_[leaf]) leaves.push_back(leaf);
        }
        std::stable_sort(leaves.begin(), leaves.end(),
                         [&](NodeId a, NodeId b) { return scores_[a] > scores_[b]; });
        return leaves;
    }

    std::vector<NodeId>&
    picked() {
        return picked_;
    }

private:
    const DiscourseTree& tree_;
    std::span<const double> scores_;
    const RetrievalConfig& cfg_;
    std::vector<char> used_;
    std::vector<int> words_;
    std::size_t unused_leaves_ = 0;
    int used_words_ = 0;
    std::vector<NodeId> picked_;
};

void
select_structured(const DiscourseTree& tree,
                  std::span<const double> scores,
                  const RetrievalConfig& cfg,
                  Selector& sel) {
    const bool take_all = cfg.variant == RetrievalVariant::AllFilteredLeaves;
    for (NodeId v : rank_nodes(scores)) {
        const auto& node = tree.node(v);
        if (node.is_leaf()) {
            if (!sel.used(v) && sel.fits(v)) sel.take(v);
        } else {
            int taken = 0;
            for (NodeId leaf : sel.unused_leaves_ranked(v)) {
                if (!take_all && taken >= cfg.leaf_top_k) break;
                if (!sel.fits(leaf)) continue;
                sel.take(leaf);
                ++taken;
            }
        }
        if (sel.budget_reached()) break;
    }
}

void
select_leaf_only(const DiscourseTree& tree, std::span<const double> scores, Selector& sel) {
    std::vector<NodeId> leaves = leaves_in_order(tree, tree.root_id());
    std::stable_sort(leaves.begin(), leaves.end(),
                     [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });
    for (NodeId leaf : leaves) {
        if (sel.fits(leaf)) sel.take(leaf);
        if (sel.budget_reached()) break;
    }
}

void
select_summary_nodes(std::span<const double> scores, const RetrievalConfig& cfg, Selector& sel) {
    for (NodeId v : rank_nodes(scores)) {
        if (sel.fits(v)) sel.take(v);
        if (cfg.budget.kind == BudgetKind::Nodes &&
            static_cast<int>(sel.picked().size()) >= cfg.budget.value) {
            break;
        }
    }
}

}  // namespace

EvidenceSet
select_evidence(const DiscourseTree& tree, std::span<const double> scores, const RetrievalConfig& cfg) {
    cfg.validate();
    if (scores.size() != tree.size()) {
        throw Error(Errc::DimensionMismatch, "one score per node is required");
    }
    Selector sel(tree, scores, cfg);
    switch (cfg.variant) {
        case RetrievalVariant::TopKOriginal:
        case RetrievalVariant::TopKRanked:
        case RetrievalVariant::AllFilteredLeaves:
            select_structured(tree, scores, cfg, sel);
            break;
        case RetrievalVariant::LeafOnly:
            select_leaf_only(tree, scores, sel);
            break;
        case RetrievalVariant::SummaryNodes:
            select_summary_nodes(scores, cfg, sel);
            break;
    }

    EvidenceSet out;
    out.selection_order = sel.picked();
    out.assembly_order = cfg.variant == RetrievalVariant::TopKRanked ? AssemblyOrder::Ranked
                                                                      : AssemblyOrder::Original;
    for (NodeId id : out.selection_order) {
        const auto& n = tree.node(id);
        int first_leaf = n.is_leaf() ? *n.leaf_index
                                     : *tree.node(leaves_in_order(tree, id).front()).leaf_index;
        out.items.push_back({id, first_leaf, scores[id], n.text});
    }
    if (out.assembly_order == AssemblyOrder::Original) {
        std::stable_sort(out.items.begin(), out.items.end(), [](const auto& a, const auto& b) {
            return a.leaf_index != b.leaf_index ? a.leaf_index < b.leaf_index : a.node_id < b.node_id;
        });
    }
    return out;
}

EvidenceSet
retrieve(std::string_view query,
         const EmbeddingTree& etree,
         const RetrievalConfig& cfg,
         const Encoder& encoder) {
    auto encoder_id = encoder.id();
    if (encoder_id != etree.encoder_id()) {
        throw Error(Errc::EncoderMismatch, "tree was embedded with '" + etree.encoder_id() +
                                               "' but the query encoder is '" + encoder_id + "'");
    }
    std::string q(query);
    auto encoded = encoder.embed(std::span<const std::string>(&q, 1));
    if (encoded.size() != 1) {
        throw Error(Errc::EncoderUnavailable, "encoder returned no vector for the query");
    }
    auto scores = score_nodes(etree, encoded.front());
    return select_evidence(etree.tree(), scores, cfg);
}

std::string
assemble_context(const EvidenceSet& evidence, std::optional<int> word_budget) {
    std::string out;
    int used = 0;
    bool first = true;
    for (const auto& item : evidence.items) {
        int wc = word_count(item.text);
        if (word_budget && used + wc > *word_budget) continue;
        used += wc;
        if (!first) out += '\n';
        out += item.text;
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json
embedding_tree_to_json(const EmbeddingTree& etree) {
    nlohmann::ordered_json j;
    j["encoder_id"] = etree.encoder_id();
    j["dim"] = etree.dim();
    nlohmann::ordered_json vectors = nlohmann::ordered_json::object();
    for (std::size_t id = 0; id < etree.tree().size(); ++id) {
        auto v = etree.vector(static_cast<NodeId>(id));
        vectors[std::to_string(id)] = std::vector<double>(v.begin(), v.end());
    }
    j["vectors"] = std::move(vectors);
    return j;
}

EmbeddingTree
embedding_tree_from_json(std::shared_ptr<const DiscourseTree> tree, const nlohmann::json& j) {
    auto fail = [](const std::string& why) { throw Error(Errc::DimensionMismatch, why); };
    if (tree == nullptr) throw Error(Errc::MalformedTree, "embedding file needs its tree");
    std::string encoder_id;
    std::size_t dim = 0;
    std::vector<double> rows;
    try {
        encoder_id = j.at("encoder_id").get<std::string>();
        dim = j.at("dim").get<std::size_t>();
        const auto& vectors = j.at("vectors");
        if (!vectors.is_object() || vectors.size() != tree->size()) {
            fail("embedding file must hold exactly one vector per tree node");
        }
        rows.assign(tree->size() * dim, 0.0);
        for (std::size_t id = 0; id < tree->size(); ++id) {
            auto key = std::to_string(id);
            if (!vectors.contains(key)) fail("embedding file has no vector for node " + key);
            auto v = vectors[key].get<std::vector<double>>();
            if (v.size() != dim) fail("vector for node " + key + " has the wrong length");
            std::copy(v.begin(), v.end(), rows.begin() + static_cast<std::ptrdiff_t>(id * dim));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("bad embedding file: ") + e.what());
    }
    return EmbeddingTree(std::move(tree), std::move(encoder_id), dim, std::move(rows));
}

nlohmann::ordered_json
evidence_to_json(std::string_view query_id, const EvidenceSet& evidence, std::string_view context) {
    nlohmann::ordered_json j;
    j["query_id"] = query_id;
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    for (const auto& it : evidence.items) {
        nlohmann::ordered_json ji;
        ji["node_id"] = it.node_id;
        ji["leaf_index"] = it.leaf_index;
        ji["score"] = it.score;
        ji["text"] = it.text;
        items.push_back(std::move(ji));
    }
    j["items"] = std::move(items);
    j["context"] = context;
    return j;
}

EvidenceRecord
evidence_from_json(const nlohmann::json& j) {
    EvidenceRecord rec;
    try {
        rec.query_id = j.at("query_id").get<std::string>();
        for (const auto& ji : j.at("items")) {
            rec.items.push_back({ji.at("node_id").get<NodeId>(), ji.at("leaf_index").get<int>(),
                                 ji.at("score").get<double>(), ji.at("text").get<std::string>()});
        }
        rec.context = j.value("context", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::IoError, std::string("bad evidence record: ") + e.what());
    }
    return rec;
}

}  // namespace disr

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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "disr/backends.h"
#include "disr/doc_model.h"
#include "disr/vector_math.h"

namespace disr {

/// A discourse tree with one encoder vector per node, stored row-major.
class EmbeddingTree {
public:
    EmbeddingTree(std::shared_ptr<const DiscourseTree> tree,
                  std::string encoder_id,
                  std::size_t dim,
                  std::vector<double> rows);

    const DiscourseTree&
    tree() const {
        return *tree_;
    }

    std::shared_ptr<const DiscourseTree>
    shared_tree() const {
        return tree_;
    }

    const std::string&
    encoder_id() const {
        return encoder_id_;
    }

    std::size_t
    dim() const {
        return dim_;
    }

    std::span<const double>
    vector(NodeId id) const;

    std::span<const double>
    rows() const {
        return rows_;
    }

private:
    std::shared_ptr<const DiscourseTree> tree_;
    std::string encoder_id_;
    std::size_t dim_;
    std::vector<double> rows_;
};

/// Encodes every node text in batches of `batch_size`.
/// Throws EncoderUnavailable or DimensionMismatch.
EmbeddingTree
build_embedding_tree(std::shared_ptr<const DiscourseTree> tree,
                     const Encoder& encoder,
                     std::size_t batch_size = 64);

enum class BudgetKind { Nodes, Words };

struct Budget {
    BudgetKind kind = BudgetKind::Nodes;
    int value = 5;

    static Budget
    nodes(int k) {
        return {BudgetKind::Nodes, k};
    }

    static Budget
    words(int w) {
        return {BudgetKind::Words, w};
    }
};

enum class RetrievalVariant {
    TopKOriginal,       // structure-aware selection, reading-order assembly
    TopKRanked,         // structure-aware selection, selection-order assembly
    AllFilteredLeaves,  // internal nodes contribute every unused leaf
    LeafOnly,           // rank leaves only
    SummaryNodes,       // any node is evidence, including internal summaries
};

std::string_view
to_string(RetrievalVariant v);

std::optional<RetrievalVariant>
parse_retrieval_variant(std::string_view s);

enum class AssemblyOrder { Original, Ranked };

struct RetrievalConfig {
    int leaf_top_k = 5;
    Budget budget;
    RetrievalVariant variant = RetrievalVariant::TopKOriginal;

    /// Throws InvalidConfig.
    void
    validate() const;
};

struct EvidenceItem {
    NodeId node_id = 0;
    /// Smallest leaf_index under the node (the node's own index for leaves).
    int leaf_index = 0;
    double score = 0.0;
    std::string text;

    bool
    operator==(const EvidenceItem&) const = default;
};

struct EvidenceSet {
    std::vector<EvidenceItem> items;  // in assembly order
    AssemblyOrder assembly_order = AssemblyOrder::Original;
    std::vector<NodeId> selection_order;
};

/// Node ids by descending score, ties by ascending id.
std::vector<NodeId>
rank_nodes(std::span<const double> scores);

/// cosine(query, e_v) for every node.
std::vector<double>
score_nodes(const EmbeddingTree& etree, std::span<const double> query);

/// Evidence selection over precomputed per-node scores.
EvidenceSet
select_evidence(const DiscourseTree& tree, std::span<const double> scores, const RetrievalConfig& cfg);

/// Encodes the query with `encoder` (which must match the tree's encoder)
/// and selects evidence.
EvidenceSet
retrieve(std::string_view query,
         const EmbeddingTree& etree,
         const RetrievalConfig& cfg,
         const Encoder& encoder);

/// Joins item texts with '\n', greedily skipping items that would push the
/// total past word_budget. No budget means every item.
std::string
assemble_context(const EvidenceSet& evidence, std::optional<int> word_budget);

// ---------------------------------------------------------------------------
// File formats

nlohmann::ordered_json
embedding_tree_to_json(const EmbeddingTree& etree);

EmbeddingTree
embedding_tree_from_json(std::shared_ptr<const DiscourseTree> tree, const nlohmann::json& j);

nlohmann::ordered_json
evidence_to_json(std::string_view query_id, const EvidenceSet& evidence, std::string_view context);

/// One line of an evidence file, as read back.
struct EvidenceRecord {
    std::string query_id;
    std::vector<EvidenceItem> items;
    std::string context;
};

EvidenceRecord
evidence_from_json(const nlohmann::json& j);

}  // namespace disr

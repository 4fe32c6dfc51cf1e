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

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disr/doc_model.h"
#include "disr/vector_math.h"

namespace disr {

// ---------------------------------------------------------------------------
// Transition system

enum class ActionKind { Shift, Reduce, PopRoot };

std::string_view
to_string(ActionKind kind);

std::optional<ActionKind>
parse_action_kind(std::string_view s);

/// Relation and nuclearity are only meaningful on Reduce.
struct Action {
    ActionKind kind = ActionKind::Shift;
    std::optional<std::string> relation;
    std::optional<Nuclearity> nuclearity;

    static Action
    shift() {
        return {ActionKind::Shift, std::nullopt, std::nullopt};
    }

    static Action
    reduce(std::optional<std::string> relation, std::optional<Nuclearity> nuclearity) {
        return {ActionKind::Reduce, std::move(relation), nuclearity};
    }

    static Action
    pop_root() {
        return {ActionKind::PopRoot, std::nullopt, std::nullopt};
    }

    bool
    operator==(const Action&) const = default;
};

std::string
to_string(const Action& action);

struct ParseUnit {
    std::string text;
    int leaf_index = 0;
};

/// Stack of partial trees plus the pending queue. Nodes built so far live in
/// an append-only arena, so their ids are in construction (post-)order.
class ParserState {
public:
    /// Throws EmptyInput for an empty unit list.
    static ParserState
    initial(std::vector<ParseUnit> units);

    /// Arena ids, bottom to top.
    std::span<const NodeId>
    stack() const {
        return stack_;
    }

    /// Pending units, front first.
    std::span<const ParseUnit>
    queue() const {
        return std::span<const ParseUnit>(*units_).subspan(queue_front_);
    }

    std::span<const ParseUnit>
    units() const {
        return *units_;
    }

    std::span<const DiscourseNode>
    built_nodes() const {
        return built_;
    }

    /// Position in units() of the unit a built leaf came from (-1 for internal nodes).
    int
    unit_of(NodeId id) const {
        return built_unit_[static_cast<std::size_t>(id)];
    }

    int
    step() const {
        return step_;
    }

    /// Queue empty and exactly one tree on the stack: only PopRoot remains.
    bool
    is_terminal() const {
        return queue_front_ == units_->size() && stack_.size() == 1 && !finished_;
    }

    /// PopRoot has been applied.
    bool
    is_finished() const {
        return finished_;
    }

    /// In-place transition; throws IllegalAction.
    void
    apply(const Action& action);

private:
    std::shared_ptr<const std::vector<ParseUnit>> units_;
    std::size_t queue_front_ = 0;
    std::vector<NodeId> stack_;
    std::vector<DiscourseNode> built_;
    std::vector<int> built_unit_;
    int step_ = 0;
    bool finished_ = false;
};

inline ParserState
initial_state(std::vector<ParseUnit> units) {
    return ParserState::initial(std::move(units));
}

/// Legal action kinds in enum order; empty once the parse is finished.
std::vector<ActionKind>
legal_actions(const ParserState& state);

bool
is_legal(const ParserState& state, ActionKind kind);

ParserState
apply_action(const ParserState& state, const Action& action);

/// Tree held by a finished state. Throws IllegalAction if not finished.
DiscourseTree
finished_tree(const ParserState& state, TreeLevel level = TreeLevel::Paragraph);

/// Gold post-order derivation. Throws InvalidTree for non-binary or invalid trees.
std::vector<Action>
oracle_actions(const DiscourseTree& gold);

/// Leaves of `tree` as parser input, in reading order.
std::vector<ParseUnit>
leaf_units(const DiscourseTree& tree);

/// Runs `actions` from initial_state(units) to a finished tree.
DiscourseTree
replay_actions(std::vector<ParseUnit> units,
               std::span<const Action> actions,
               TreeLevel level = TreeLevel::Paragraph);

// ---------------------------------------------------------------------------
// Representations and scoring

using LeafEmbedder = std::function<Vector(std::string_view)>;

struct NodeRepresentation {
    std::size_t dim = 0;
    /// Indexed by arena id.
    std::vector<Vector> nodes;
    /// Indexed by unit position; empty until first needed.
    std::vector<Vector> units;

    /// Representation of the queue front, or nullptr when the queue is empty.
    const Vector*
    queue_front(const ParserState& state) const;
};

/// Leaves get leaf_embed(text); internal nodes the mean of their children.
/// Throws DimensionMismatch if leaf_embed returns inconsistent lengths.
NodeRepresentation
node_representation(const ParserState& state, const LeafEmbedder& leaf_embed);

/// Extends `reps` with any arena nodes (and the queue front) it lacks.
void
extend_representation(const ParserState& state,
                      const LeafEmbedder& leaf_embed,
                      NodeRepresentation& reps);

struct ScorerParameters {
    int dim = 0;
    double l2_lambda = 0.0;
    std::vector<Action> actions;
    /// Row-major |actions| x 4*dim.
    std::vector<double> weight;
    std::vector<double> bias;

    /// Throws MalformedParameters on inconsistent shapes.
    void
    validate() const;

    /// Row for an action (kind + relation + nuclearity), or -1.
    int
    row_of(const Action& action) const;
};

ScorerParameters
parse_scorer_parameters(std::string_view json_text);

ScorerParameters
load_scorer_parameters(const std::filesystem::path& path);

/// y = W (h_s1 ++ h_s2 ++ h_s3 ++ h_q1) + b, missing slots as zero vectors.
Vector
score_actions(const ParserState& state, const NodeRepresentation& reps, const ScorerParameters& params);

/// Softmax restricted to rows whose kind is legal; other rows get 0.
/// Throws NoLegalAction.
Vector
action_probabilities(std::span<const double> scores,
                     std::span<const ActionKind> row_kinds,
                     std::span<const ActionKind> legal);

/// -log(p) + lambda * ||theta||^2 / 2 over all entries of W and b.
double
training_loss(double prob_of_gold, const ScorerParameters& params);

struct ActionDistribution {
    std::vector<Action> actions;
    Vector probabilities;
};

class ActionScorer {
public:
    virtual ~ActionScorer() = default;

    /// Must be safe to call concurrently.
    virtual ActionDistribution
    score(const ParserState& state, const NodeRepresentation& reps) const = 0;
};

inline constexpr std::string_view kHeuristicRelation = "span";

/// One-hot: forced moves follow legal_actions; otherwise Reduce iff
/// cos(s1, s2) >= cos(s1, q1).
ActionDistribution
heuristic_scorer(const ParserState& state, const NodeRepresentation& reps);

class HeuristicScorer final : public ActionScorer {
public:
    ActionDistribution
    score(const ParserState& state, const NodeRepresentation& reps) const override {
        return heuristic_scorer(state, reps);
    }
};

class LinearScorer final : public ActionScorer {
public:
    explicit LinearScorer(ScorerParameters params);

    ActionDistribution
    score(const ParserState& state, const NodeRepresentation& reps) const override;

    const ScorerParameters&
    parameters() const {
        return params_;
    }

private:
    ScorerParameters params_;
    std::vector<ActionKind> row_kinds_;
};

struct ParseResult {
    DiscourseTree tree;
    std::vector<Action> actions;
};

/// Greedy decoding: at each step take the most probable legal action.
ParseResult
greedy_parse_traced(std::vector<ParseUnit> units,
                    const ActionScorer& scorer,
                    const LeafEmbedder& leaf_embed,
                    TreeLevel level = TreeLevel::Paragraph);

DiscourseTree
greedy_parse(std::vector<ParseUnit> units,
             const ActionScorer& scorer,
             const LeafEmbedder& leaf_embed,
             TreeLevel level = TreeLevel::Paragraph);

/// Scorer plus the leaf encoder it reads. Shared by both construction phases.
struct Parser {
    std::shared_ptr<const ActionScorer> scorer;
    LeafEmbedder leaf_embed;

    DiscourseTree
    parse(std::vector<ParseUnit> units, TreeLevel level) const;
};

inline constexpr int kHeuristicDim = 64;

/// Heuristic scorer over mock embeddings.
Parser
make_heuristic_parser(int dim = kHeuristicDim);

/// Linear scorer over mock embeddings of the parameters' dimension.
Parser
make_linear_parser(ScorerParameters params);

}  // namespace disr

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

#include "disr/discourse_parser.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "disr/error.h"
#include "disr/simd/kernels.h"
#include "disr/tree_json.h"

namespace disr {

std::string_view
to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::Shift: return "shift";
        case ActionKind::Reduce: return "reduce";
        case ActionKind::PopRoot: return "pop_root";
    }
    return "shift";
}

std::optional<ActionKind>
parse_action_kind(std::string_view s) {
    if (s == "shift") return ActionKind::Shift;
    if (s == "reduce") return ActionKind::Reduce;
    if (s == "pop_root") return ActionKind::PopRoot;
    return std::nullopt;
}

std::string
to_string(const Action& action) {
    std::string out(to_string(action.kind));
    if (action.kind == ActionKind::Reduce) {
        out += '(';
        out += action.relation.value_or("-");
        out += ',';
        out += action.nuclearity ? to_string(*action.nuclearity) : "-";
        out += ')';
    }
    return out;
}

// ---------------------------------------------------------------------------

ParserState
ParserState::initial(std::vector<ParseUnit> units) {
    if (units.empty()) {
        throw Error(Errc::EmptyInput, "parser input has no units");
    }
    ParserState state;
    state.units_ = std::make_shared<const std::vector<ParseUnit>>(std::move(units));
    return state;
}

void
ParserState::apply(const Action& action) {
    auto illegal = [&](const std::string& why) {
        throw Error(Errc::IllegalAction, to_string(action) + " at step " + std::to_string(step_) +
                                             ": " + why);
    };
    if (finished_) illegal("the parse is already finished");
    if (action.kind != ActionKind::Reduce && (action.relation || action.nuclearity)) {
        illegal("only reduce carries a relation or nuclearity");
    }
    switch (action.kind) {
        case ActionKind::Shift: {
            if (queue_front_ == units_->size()) illegal("queue is empty");
            const auto& unit = (*units_)[queue_front_];
            DiscourseNode leaf;
            leaf.id = static_cast<NodeId>(built_.size());
            leaf.kind = NodeKind::Leaf;
            leaf.text = unit.text;
            leaf.leaf_index = unit.leaf_index;
            built_.push_back(std::move(leaf));
            built_unit_.push_back(static_cast<int>(queue_front_));
            stack_.push_back(built_.back().id);
            ++queue_front_;
            break;
        }
        case ActionKind::Reduce: {
            if (stack_.size() < 2) illegal("stack holds fewer than two trees");
            NodeId s1 = stack_.back();
            stack_.pop_back();
            NodeId s2 = stack_.back();
            stack_.pop_back();
            DiscourseNode node;
            node.id = static_cast<NodeId>(built_.size());
            node.kind = NodeKind::Internal;
            node.relation = action.relation;
            node.nuclearity = action.nuclearity;
            node.children = {s2, s1};
            built_.push_back(std::move(node));
            built_unit_.push_back(-1);
            stack_.push_back(built_.back().id);
            break;
        }
        case ActionKind::PopRoot: {
            if (!is_terminal()) illegal("queue must be empty with a single tree on the stack");
            finished_ = true;
            break;
        }
    }
    ++step_;
}

std::vector<ActionKind>
legal_actions(const ParserState& state) {
    std::vector<ActionKind> out;
    if (state.is_finished()) return out;
    if (state.is_terminal()) {
        out.push_back(ActionKind::PopRoot);
        return out;
    }
    if (!state.queue().empty()) out.push_back(ActionKind::Shift);
    if (state.stack().size() >= 2) out.push_back(ActionKind::Reduce);
    return out;
}

bool
is_legal(const ParserState& state, ActionKind kind) {
    auto legal = legal_actions(state);
    return std::find(legal.begin(), legal.end(), kind) != legal.end();
}

ParserState
apply_action(const ParserState& state, const Action& action) {
    ParserState next = state;
    next.apply(action);
    return next;
}

DiscourseTree
finished_tree(const ParserState& state, TreeLevel level) {
    if (!state.is_finished()) {
        throw Error(Errc::IllegalAction, "parse is not finished");
    }
    std::vector<DiscourseNode> nodes(state.built_nodes().begin(), state.built_nodes().end());
    return DiscourseTree::from_nodes(level, std::move(nodes), state.stack().front());
}

std::vector<Action>
oracle_actions(const DiscourseTree& gold) {
    try {
        validate_tree(gold, true);
    } catch (const Error& e) {
        throw Error(Errc::InvalidTree, std::string("gold tree is invalid: ") + e.what());
    }
    std::vector<Action> actions;
    actions.reserve(2 * gold.size());
    // Post-order: (node, children_done)
    std::vector<std::pair<NodeId, bool>> stack{{gold.root_id(), false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        const auto& n = gold.node(id);
        if (n.is_leaf()) {
            actions.push_back(Action::shift());
        } else if (expanded) {
            actions.push_back(Action::reduce(n.relation, n.nuclearity));
        } else {
            stack.emplace_back(id, true);
            stack.emplace_back(n.children[1], false);
            stack.emplace_back(n.children[0], false);
        }
    }
    actions.push_back(Action::pop_root());
    return actions;
}

std::vector<ParseUnit>
leaf_units(const DiscourseTree& tree) {
    std::vector<ParseUnit> units;
    for (NodeId id : leaves_in_order(tree, tree.root_id())) {
        const auto& n = tree.node(id);
        units.push_back({n.text, *n.leaf_index});
    }
    return units;
}

DiscourseTree
replay_actions(std::vector<ParseUnit> units, std::span<const Action> actions, TreeLevel level) {
    auto state = ParserState::initial(std::move(units));
    for (const auto& a : actions) state.apply(a);
    return finished_tree(state, level);
}

// ---------------------------------------------------------------------------

const Vector*
NodeRepresentation::queue_front(const ParserState& state) const {
    if (state.queue().empty()) return nullptr;
    auto pos = state.units().size() - state.queue().size();
    if (pos >= units.size() || units[pos].empty()) return nullptr;
    return &units[pos];
}

namespace {

const Vector&
unit_rep(const ParserState& state,
         std::size_t pos,
         const LeafEmbedder& leaf_embed,
         NodeRepresentation& reps) {
    if (reps.units.size() < state.units().size()) reps.units.resize(state.units().size());
    auto& slot = reps.units[pos];
    if (slot.empty()) {
        slot = leaf_embed(state.units()[pos].text);
        if (slot.empty()) {
            throw Error(Errc::DimensionMismatch, "leaf embedder returned an empty vector");
        }
        if (reps.dim == 0) {
            reps.dim = slot.size();
        } else if (slot.size() != reps.dim) {
            throw Error(Errc::DimensionMismatch,
                        "leaf embedder returned length " + std::to_string(slot.size()) +
                            ", expected " + std::to_string(reps.dim));
        }
    }
    return slot;
}

}  // namespace

void
extend_representation(const ParserState& state,
                      const LeafEmbedder& leaf_embed,
                      NodeRepresentation& reps) {
    auto built = state.built_nodes();
    for (std::size_t id = reps.nodes.size(); id < built.size(); ++id) {
        const auto& n = built[id];
        if (n.is_leaf()) {
            reps.nodes.push_back(
                unit_rep(state, static_cast<std::size_t>(state.unit_of(n.id)), leaf_embed, reps));
            continue;
        }
        Vector mean(reps.dim, 0.0);
        double w = 1.0 / static_cast<double>(n.children.size());
        for (NodeId c : n.children) {
            simd::axpy(w, reps.nodes[static_cast<std::size_t>(c)], mean);
        }
        reps.nodes.push_back(std::move(mean));
    }
    if (!state.queue().empty()) {
        unit_rep(state, state.units().size() - state.queue().size(), leaf_embed, reps);
    }
}

NodeRepresentation
node_representation(const ParserState& state, const LeafEmbedder& leaf_embed) {
    NodeRepresentation reps;
    extend_representation(state, leaf_embed, reps);
    return reps;
}

// ---------------------------------------------------------------------------

void
ScorerParameters::validate() const {
    auto fail = [](const std::string& why) { throw Error(Errc::MalformedParameters, why); };
    if (dim < 1) fail("dim must be >= 1");
    if (l2_lambda < 0.0 || !std::isfinite(l2_lambda)) fail("l2_lambda must be finite and >= 0");
    if (actions.empty()) fail("at least one action row is required");
    for (const auto& a : actions) {
        if (a.kind != ActionKind::Reduce && (a.relation || a.nuclearity)) {
            fail("only reduce rows may carry relation or nuclearity");
        }
    }
    auto cols = static_cast<std::size_t>(4 * dim);
    if (weight.size() != actions.size() * cols) fail("weight must be |actions| x 4*dim");
    if (bias.size() != actions.size()) fail("bias must have one entry per action");
}

int
ScorerParameters::row_of(const Action& action) const {
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (actions[i] == action) return static_cast<int>(i);
    }
    return -1;
}

ScorerParameters
parse_scorer_parameters(std::string_view json_text) {
    auto j = parse_json(json_text, Errc::MalformedParameters);
    auto fail = [](const std::string& why) { throw Error(Errc::MalformedParameters, why); };
    ScorerParameters p;
    try {
        p.dim = j.at("dim").get<int>();
        p.l2_lambda = j.value("l2_lambda", 0.0);
        for (const auto& ja : j.at("actions")) {
            auto kind = parse_action_kind(ja.at("kind").get<std::string>());
            if (!kind) fail("unknown action kind " + ja.at("kind").dump());
            Action a{*kind, std::nullopt, std::nullopt};
            if (ja.contains("relation") && !ja["relation"].is_null()) {
                a.relation = ja["relation"].get<std::string>();
            }
            if (ja.contains("nuclearity") && !ja["nuclearity"].is_null()) {
                a.nuclearity = parse_nuclearity(ja["nuclearity"].get<std::string>());
                if (!a.nuclearity) fail("invalid nuclearity " + ja["nuclearity"].dump());
            }
            p.actions.push_back(std::move(a));
        }
        for (const auto& row : j.at("weight")) {
            if (row.size() != static_cast<std::size_t>(4 * p.dim)) fail("weight row has wrong length");
            for (const auto& x : row) p.weight.push_back(x.get<double>());
        }
        p.bias = j.at("bias").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("bad scorer parameters: ") + e.what());
    }
    p.validate();
    return p;
}

ScorerParameters
load_scorer_parameters(const std::filesystem::path& path) {
    return parse_scorer_parameters(read_text_file(path));
}

Vector
score_actions(const ParserState& state, const NodeRepresentation& reps, const ScorerParameters& params) {
    auto d = static_cast<std::size_t>(params.dim);
    if (reps.dim != 0 && reps.dim != d) {
        throw Error(Errc::DimensionMismatch, "representations have dim " + std::to_string(reps.dim) +
                                                 " but parameters expect " + std::to_string(d));
    }
    Vector input(4 * d, 0.0);
    auto stack = state.stack();
    for (std::size_t slot = 0; slot < 3 && slot < stack.size(); ++slot) {
        const auto& h = reps.nodes.at(static_cast<std::size_t>(stack[stack.size() - 1 - slot]));
        std::copy(h.begin(), h.end(), input.begin() + static_cast<std::ptrdiff_t>(slot * d));
    }
    if (const Vector* q = reps.queue_front(state)) {
        std::copy(q->begin(), q->end(), input.begin() + static_cast<std::ptrdiff_t>(3 * d));
    }
    Vector y(params.actions.size(), 0.0);
    simd::matvec(params.weight, params.actions.size(), 4 * d, input, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += params.bias[i];
    return y;
}

Vector
action_probabilities(std::span<const double> scores,
                     std::span<const ActionKind> row_kinds,
                     std::span<const ActionKind> legal) {
    if (scores.size() != row_kinds.size()) {
        throw Error(Errc::DimensionMismatch, "one action kind per score row is required");
    }
    Vector probs(scores.size(), 0.0);
    double max_score = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            throw Error(Errc::DomainError, "action scores must be finite");
        }
        if (std::find(legal.begin(), legal.end(), row_kinds[i]) == legal.end()) continue;
        any = true;
        max_score = std::max(max_score, scores[i]);
    }
    if (!any) {
        throw Error(Errc::NoLegalAction, "no score row corresponds to a legal action");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (std::find(legal.begin(), legal.end(), row_kinds[i]) == legal.end()) continue;
        probs[i] = std::exp(scores[i] - max_score);
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
}

double
training_loss(double prob_of_gold, const ScorerParameters& params) {
    if (!(prob_of_gold > 0.0) || prob_of_gold > 1.0) {
        throw Error(Errc::DomainError, "gold-action probability must lie in (0, 1]");
    }
    double sq = simd::squared_norm(params.weight) + simd::squared_norm(params.bias);
    return -std::log(prob_of_gold) + params.l2_lambda * sq / 2.0;
}

// ---------------------------------------------------------------------------

ActionDistribution
heuristic_scorer(const ParserState& state, const NodeRepresentation& reps) {
    auto legal = legal_actions(state);
    if (legal.empty()) {
        throw Error(Errc::NoLegalAction, "parse is finished");
    }
    if (legal.size() == 1 && legal[0] == ActionKind::PopRoot) {
        return {{Action::pop_root()}, {1.0}};
    }
    ActionDistribution dist{
        {Action::shift(), Action::reduce(std::string(kHeuristicRelation), Nuclearity::NN)},
        {0.0, 0.0}};
    bool reduce;
    if (legal.size() == 1) {
        reduce = legal[0] == ActionKind::Reduce;
    } else {
        auto stack = state.stack();
        const auto& s1 = reps.nodes.at(static_cast<std::size_t>(stack[stack.size() - 1]));
        const auto& s2 = reps.nodes.at(static_cast<std::size_t>(stack[stack.size() - 2]));
        const Vector* q1 = reps.queue_front(state);
        if (q1 == nullptr) {
            throw Error(Errc::DimensionMismatch, "queue front has no representation");
        }
        reduce = cosine(s1, s2) >= cosine(s1, *q1);
    }
    dist.probabilities[reduce ? 1 : 0] = 1.0;
    return dist;
}

LinearScorer::LinearScorer(ScorerParameters params) : params_(std::move(params)) {
    params_.validate();
    for (const auto& a : params_.actions) row_kinds_.push_back(a.kind);
}

ActionDistribution
LinearScorer::score(const ParserState& state, const NodeRepresentation& reps) const {
    auto y = score_actions(state, reps, params_);
    auto legal = legal_actions(state);
    return {params_.actions, action_probabilities(y, row_kinds_, legal)};
}

ParseResult
greedy_parse_traced(std::vector<ParseUnit> units,
                    const ActionScorer& scorer,
                    const LeafEmbedder& leaf_embed,
                    TreeLevel level) {
    auto state = ParserState::initial(std::move(units));
    NodeRepresentation reps;
    std::vector<Action> trace;
    while (!state.is_finished()) {
        if (state.is_terminal()) {
            trace.push_back(Action::pop_root());
            state.apply(trace.back());
            continue;
        }
        extend_representation(state, leaf_embed, reps);
        ActionDistribution dist;
        try {
            dist = scorer.score(state, reps);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(Errc::ScorerFailure, std::string("scorer failed: ") + e.what());
        }
        if (dist.actions.size() != dist.probabilities.size()) {
            throw Error(Errc::ScorerFailure, "scorer returned mismatched actions and probabilities");
        }
        auto legal = legal_actions(state);
        int best = -1;
        for (std::size_t i = 0; i < dist.actions.size(); ++i) {
            double p = dist.probabilities[i];
            if (std::isnan(p)) {
                throw Error(Errc::ScorerFailure, "scorer returned NaN");
            }
            if (std::find(legal.begin(), legal.end(), dist.actions[i].kind) == legal.end()) continue;
            if (best < 0 || p > dist.probabilities[static_cast<std::size_t>(best)]) {
                best = static_cast<int>(i);
            }
        }
        if (best < 0) {
            throw Error(Errc::ScorerFailure,
                        "scorer offered no legal action at step " + std::to_string(state.step()));
        }
        trace.push_back(dist.actions[static_cast<std::size_t>(best)]);
        state.apply(trace.back());
    }
    return {finished_tree(state, level), std::move(trace)};
}

DiscourseTree
greedy_parse(std::vector<ParseUnit> units,
             const ActionScorer& scorer,
             const LeafEmbedder& leaf_embed,
             TreeLevel level) {
    return greedy_parse_traced(std::move(units), scorer, leaf_embed, level).tree;
}

DiscourseTree
Parser::parse(std::vector<ParseUnit> units, TreeLevel level) const {
    return greedy_parse(std::move(units), *scorer, leaf_embed, level);
}

Parser
make_heuristic_parser(int dim) {
    return {std::make_shared<HeuristicScorer>(),
            [dim](std::string_view text) { return mock_embedder(text, dim); }};
}

Parser
make_linear_parser(ScorerParameters params) {
    int dim = params.dim;
    return {std::make_shared<LinearScorer>(std::move(params)),
            [dim](std::string_view text) { return mock_embedder(text, dim); }};
}

}  // namespace disr

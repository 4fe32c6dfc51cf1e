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

#include "disr/tree_json.h"

#include <fstream>
#include <sstream>

#include "disr/error.h"

namespace disr {

std::string
read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::IoError, "cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void
write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::IoError, "cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(Errc::IoError, "short write to " + path.string());
    }
}

nlohmann::json
parse_json(std::string_view text, Errc code) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(code, std::string("invalid JSON: ") + e.what());
    }
}

ordered_json
tree_to_json(const DiscourseTree& tree) {
    ordered_json j;
    j["level"] = to_string(tree.level());
    j["root_id"] = tree.root_id();
    ordered_json nodes = ordered_json::array();
    for (const auto& n : tree.nodes()) {
        ordered_json jn;
        jn["id"] = n.id;
        jn["kind"] = n.is_leaf() ? "leaf" : "internal";
        jn["text"] = n.text;
        jn["relation"] = n.relation ? ordered_json(*n.relation) : ordered_json(nullptr);
        jn["nuclearity"] =
            n.nuclearity ? ordered_json(std::string(to_string(*n.nuclearity))) : ordered_json(nullptr);
        jn["children"] = n.children;
        jn["leaf_index"] = n.leaf_index ? ordered_json(*n.leaf_index) : ordered_json(nullptr);
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
    return j;
}

DiscourseTree
tree_from_json(const nlohmann::json& j, bool require_binary) {
    auto fail = [](const std::string& why) -> void { throw Error(Errc::MalformedTree, why); };
    if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array() ||
        !j.contains("root_id") || !j["root_id"].is_number_integer()) {
        fail("tree JSON needs 'root_id' and a 'nodes' array");
    }
    TreeLevel level = TreeLevel::Paragraph;
    if (j.contains("level")) {
        if (!j["level"].is_string()) fail("'level' must be a string");
        auto parsed = parse_tree_level(j["level"].get<std::string>());
        if (!parsed) fail("unknown tree level '" + j["level"].get<std::string>() + "'");
        level = *parsed;
    }

    std::vector<const nlohmann::json*> by_id(j["nodes"].size(), nullptr);
    for (const auto& jn : j["nodes"]) {
        if (!jn.is_object() || !jn.contains("id") || !jn["id"].is_number_integer()) {
            fail("every node needs an integer 'id'");
        }
        auto id = jn["id"].get<long long>();
        if (id < 0 || static_cast<std::size_t>(id) >= by_id.size() || by_id[id] != nullptr) {
            fail("node ids must be unique and dense from 0");
        }
        by_id[id] = &jn;
    }

    // Nodes are appended by id; children may reference later ids, so build
    // raw nodes first and validate once everything exists.
    std::vector<DiscourseNode> raw;
    for (std::size_t id = 0; id < by_id.size(); ++id) {
        const auto& jn = *by_id[id];
        DiscourseNode n;
        n.id = static_cast<NodeId>(id);
        auto kind = jn.value("kind", std::string());
        if (kind == "leaf") {
            n.kind = NodeKind::Leaf;
        } else if (kind == "internal") {
            n.kind = NodeKind::Internal;
        } else {
            fail("node " + std::to_string(id) + " has unknown kind '" + kind + "'");
        }
        if (!jn.contains("text") || !jn["text"].is_string()) {
            fail("node " + std::to_string(id) + " needs a string 'text'");
        }
        n.text = jn["text"].get<std::string>();
        if (jn.contains("relation") && !jn["relation"].is_null()) {
            if (!jn["relation"].is_string()) fail("'relation' must be a string or null");
            n.relation = jn["relation"].get<std::string>();
        }
        if (jn.contains("nuclearity") && !jn["nuclearity"].is_null()) {
            auto nuc = jn["nuclearity"].is_string()
                           ? parse_nuclearity(jn["nuclearity"].get<std::string>())
                           : std::nullopt;
            if (!nuc) fail("node " + std::to_string(id) + " has invalid nuclearity");
            n.nuclearity = nuc;
        }
        if (jn.contains("children")) {
            if (!jn["children"].is_array()) fail("'children' must be an array");
            for (const auto& c : jn["children"]) {
                if (!c.is_number_integer()) fail("child ids must be integers");
                auto cid = c.get<long long>();
                if (cid < 0 || static_cast<std::size_t>(cid) >= by_id.size()) {
                    fail("node " + std::to_string(id) + " has dangling child " + std::to_string(cid));
                }
                n.children.push_back(static_cast<NodeId>(cid));
            }
        }
        if (jn.contains("leaf_index") && !jn["leaf_index"].is_null()) {
            if (!jn["leaf_index"].is_number_integer()) fail("'leaf_index' must be an integer");
            n.leaf_index = jn["leaf_index"].get<int>();
        }
        if (n.is_leaf() != n.children.empty()) {
            fail("node " + std::to_string(id) + ": leaves have no children, internal nodes do");
        }
        if (n.is_leaf() != n.leaf_index.has_value()) {
            fail("node " + std::to_string(id) + ": leaf_index is required on leaves only");
        }
        raw.push_back(std::move(n));
    }

    auto root = j["root_id"].get<long long>();
    if (root < 0 || static_cast<std::size_t>(root) >= raw.size()) fail("root_id out of range");

    auto tree = DiscourseTree::from_nodes(level, std::move(raw), static_cast<NodeId>(root));
    validate_tree(tree, require_binary);
    return tree;
}

std::string
serialize_tree(const DiscourseTree& tree) {
    return tree_to_json(tree).dump(2) + "\n";
}

DiscourseTree
deserialize_tree(std::string_view text, bool require_binary) {
    return tree_from_json(parse_json(text, Errc::MalformedTree), require_binary);
}

}  // namespace disr

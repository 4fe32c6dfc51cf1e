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
#include <string>
#include <string_view>

#include <json.hpp>

#include "disr/doc_model.h"
#include "disr/error.h"

namespace disr {

using ordered_json = nlohmann::ordered_json;

std::string
read_text_file(const std::filesystem::path& path);

void
write_text_file(const std::filesystem::path& path, std::string_view content);

/// Parses a JSON document, mapping syntax errors to `code`.
nlohmann::json
parse_json(std::string_view text, Errc code);

ordered_json
tree_to_json(const DiscourseTree& tree);

/// Nodes may appear in any order but ids must be dense. Throws MalformedTree.
DiscourseTree
tree_from_json(const nlohmann::json& j, bool require_binary = true);

/// Canonical text form: nodes ordered by id, two-space indent, trailing newline.
std::string
serialize_tree(const DiscourseTree& tree);

DiscourseTree
deserialize_tree(std::string_view text, bool require_binary = true);

}  // namespace disr

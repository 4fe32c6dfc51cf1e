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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace disr {

using Vector = std::vector<double>;

inline constexpr std::uint64_t kMockSeed = 0x5eed5eedULL;

/// dot(u, v) / (|u| |v|), or 0 when either norm is 0. Throws DimensionMismatch.
double
cosine(std::span<const double> u, std::span<const double> v);

/// Deterministic test encoder: every whitespace token is hashed (seeded
/// FNV-1a + splitmix64) into one of `dim` buckets with a +1/-1 sign, and the
/// result is L2-normalized. Text without tokens maps to the zero vector.
Vector
mock_embedder(std::string_view text, int dim, std::uint64_t seed = kMockSeed);

}  // namespace disr

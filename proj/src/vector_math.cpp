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

#include "disr/vector_math.h"

#include <cmath>
#include <string>

#include "disr/doc_model.h"
#include "disr/error.h"
#include "disr/simd/kernels.h"

namespace disr {

double
cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error(Errc::DimensionMismatch, "cosine of vectors with lengths " +
                                                 std::to_string(u.size()) + " and " +
                                                 std::to_string(v.size()));
    }
    const auto& k = simd::active_kernels();
    double nu = k.squared_norm(u.data(), u.size());
    double nv = k.squared_norm(v.data(), v.size());
    if (nu == 0.0 || nv == 0.0) {
        return 0.0;
    }
    double c = k.dot(u.data(), v.data(), u.size()) / (std::sqrt(nu) * std::sqrt(nv));
    return std::fmax(-1.0, std::fmin(1.0, c));
}

namespace {

std::uint64_t
splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t
hash_bytes(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(h);
}

}  // namespace

Vector
mock_embedder(std::string_view text, int dim, std::uint64_t seed) {
    if (dim < 1) {
        throw Error(Errc::DimensionMismatch, "mock embedder dimension must be >= 1");
    }
    Vector v(static_cast<std::size_t>(dim), 0.0);
    auto words = split_words(text);
    if (words.empty()) {
        return v;
    }
    for (auto w : words) {
        std::uint64_t h = hash_bytes(w, seed);
        v[h % static_cast<std::uint64_t>(dim)] += (h >> 63) != 0 ? -1.0 : 1.0;
    }
    double sq = simd::squared_norm(v);
    if (sq == 0.0) {
        // Every contribution cancelled; fall back to a whole-text bucket.
        v[hash_bytes(text, seed) % static_cast<std::uint64_t>(dim)] = 1.0;
        return v;
    }
    double inv = 1.0 / std::sqrt(sq);
    for (double& x : v) x *= inv;
    return v;
}

}  // namespace disr

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

#include <cstdlib>
#include <cstring>
#include <atomic>

#include "disr/simd/kernels.h"

namespace disr::simd {

namespace scalar {

double
dot(const double* x, const double* y, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

double
squared_norm(const double* x, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += x[i] * x[i];
    }
    return sum;
}

void
axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

}  // namespace scalar

namespace {

const KernelTable kScalar{"scalar", &scalar::dot, &scalar::squared_norm, &scalar::axpy};

#if defined(DISR_HAVE_AVX2)
const KernelTable kAvx2{"avx2", &avx2::dot, &avx2::squared_norm, &avx2::axpy};

bool
cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

#if defined(DISR_HAVE_NEON)
const KernelTable kNeon{"neon", &neon::dot, &neon::squared_norm, &neon::axpy};
#endif

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable&
scalar_kernels() {
    return kScalar;
}

const KernelTable&
detect_kernels() {
    const char* forced = std::getenv("DISR_SIMD");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
        return kScalar;
    }
#if defined(DISR_HAVE_AVX2)
    if (cpu_has_avx2()) {
        return kAvx2;
    }
#endif
#if defined(DISR_HAVE_NEON)
    return kNeon;
#else
    return kScalar;
#endif
}

const KernelTable&
active_kernels() {
    const KernelTable* table = g_active.load(std::memory_order_acquire);
    if (table == nullptr) {
        table = &detect_kernels();
        const KernelTable* expected = nullptr;
        if (!g_active.compare_exchange_strong(expected, table, std::memory_order_acq_rel)) {
            table = expected;
        }
    }
    return *table;
}

bool
select_kernels(std::string_view name) {
    const KernelTable* table = nullptr;
    if (name == "auto") {
        table = &detect_kernels();
    } else if (name == "scalar") {
        table = &kScalar;
    }
#if defined(DISR_HAVE_AVX2)
    else if (name == "avx2" && cpu_has_avx2()) {
        table = &kAvx2;
    }
#endif
#if defined(DISR_HAVE_NEON)
    else if (name == "neon") {
        table = &kNeon;
    }
#endif
    if (table == nullptr) {
        return false;
    }
    g_active.store(table, std::memory_order_release);
    return true;
}

void
matvec(std::span<const double> matrix,
       std::size_t rows,
       std::size_t cols,
       std::span<const double> x,
       std::span<double> out) {
    const auto& k = active_kernels();
    for (std::size_t r = 0; r < rows; ++r) {
        out[r] = k.dot(matrix.data() + r * cols, x.data(), cols);
    }
}

}  // namespace disr::simd

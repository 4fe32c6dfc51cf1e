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

#include <cstddef>
#include <span>
#include <string_view>

namespace disr::simd {

using DotFn = double (*)(const double* x, const double* y, std::size_t n);
using SquaredNormFn = double (*)(const double* x, std::size_t n);
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);

/// One complete set of kernels for a given instruction set.
struct KernelTable {
    std::string_view name;
    DotFn dot;
    SquaredNormFn squared_norm;
    AxpyFn axpy;
};

namespace scalar {
double
dot(const double* x, const double* y, std::size_t n);
double
squared_norm(const double* x, std::size_t n);
void
axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(DISR_HAVE_AVX2)
namespace avx2 {
double
dot(const double* x, const double* y, std::size_t n);
double
squared_norm(const double* x, std::size_t n);
void
axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(DISR_HAVE_NEON)
namespace neon {
double
dot(const double* x, const double* y, std::size_t n);
double
squared_norm(const double* x, std::size_t n);
void
axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

const KernelTable&
scalar_kernels();

/// Best table supported by the running CPU. Honors DISR_SIMD=scalar.
const KernelTable&
detect_kernels();

/// Table used by the free functions below; resolved once on first use.
const KernelTable&
active_kernels();

/// Pins the active table. Accepts "auto", "scalar", "avx2", "neon".
/// Returns false if the requested table is not available on this CPU/build.
bool
select_kernels(std::string_view name);

inline double
dot(std::span<const double> x, std::span<const double> y) {
    return active_kernels().dot(x.data(), y.data(), x.size());
}

inline double
squared_norm(std::span<const double> x) {
    return active_kernels().squared_norm(x.data(), x.size());
}

/// y += alpha * x
inline void
axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

/// out[r] = dot(row r of the row-major rows x cols matrix, x)
void
matvec(std::span<const double> matrix,
       std::size_t rows,
       std::size_t cols,
       std::span<const double> x,
       std::span<double> out);

}  // namespace disr::simd

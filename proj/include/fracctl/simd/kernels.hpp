/*******************************************************************************
* Copyright 2026 The fracctl Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/

#pragma once

// Data-parallel inner loops shared by the fractional operators.
//
// Every kernel has a scalar reference implementation; vectorized variants
// (AVX2+FMA on x86-64, NEON on AArch64) are selected once at runtime. The
// variants agree with the reference up to summation-order rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace fracctl::simd {

enum class Variant { scalar, avx2, neon };

std::string_view to_string(Variant v) noexcept;

struct KernelTable {
    // sum_{j<n} weights[j] * newest[-j], n = count
    double (*reversed_dot)(const double* weights, const double* newest, std::size_t count);
    // sum_i (a[i] - b[i])^2
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t count);
    // y[i] += scale * x[i]
    void (*axpy)(double scale, const double* x, double* y, std::size_t count);
};

// Variants compiled into this binary and supported by the running CPU.
bool is_available(Variant v) noexcept;

// Best available variant, unless FRACCTL_SIMD=scalar|avx2|neon asks otherwise.
Variant detect_variant() noexcept;

const KernelTable& kernels(Variant v);
const KernelTable& active_kernels() noexcept;
Variant active_variant() noexcept;

// Process-wide override, intended for tests and benchmarks. Throws
// DomainError if the variant is not available.
void set_active_variant(Variant v);

// Convenience wrappers over the active table.

// Dot product of `weights` with the tail of `history` read backwards:
// sum_{j < n} weights[j] * history[history.size() - 1 - j],
// n = min(weights.size(), history.size()).
double reversed_dot(std::span<const double> weights, std::span<const double> history) noexcept;

double sum_sq_diff(std::span<const double> a, std::span<const double> b) noexcept;

void axpy(double scale, std::span<const double> x, std::span<double> y) noexcept;

namespace detail {
const KernelTable& scalar_table() noexcept;
const KernelTable* avx2_table() noexcept;  // nullptr when not compiled in
const KernelTable* neon_table() noexcept;
}  // namespace detail

}  // namespace fracctl::simd

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

#include "fracctl/simd/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

#include "fracctl/error.hpp"

namespace fracctl::simd {

#if !defined(FRACCTL_HAVE_AVX2)
const KernelTable* detail::avx2_table() noexcept { return nullptr; }
#endif
#if !defined(FRACCTL_HAVE_NEON)
const KernelTable* detail::neon_table() noexcept { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(FRACCTL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<Variant>& active_slot() noexcept {
    static std::atomic<Variant> slot{detect_variant()};
    return slot;
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::scalar: return "scalar";
        case Variant::avx2: return "avx2";
        case Variant::neon: return "neon";
    }
    return "unknown";
}

bool is_available(Variant v) noexcept {
    switch (v) {
        case Variant::scalar: return true;
        case Variant::avx2: return detail::avx2_table() != nullptr && cpu_has_avx2();
        case Variant::neon: return detail::neon_table() != nullptr;
    }
    return false;
}

Variant detect_variant() noexcept {
    if (const char* env = std::getenv("FRACCTL_SIMD")) {
        const std::string_view want{env};
        for (Variant v : {Variant::scalar, Variant::avx2, Variant::neon}) {
            if (want == to_string(v) && is_available(v)) return v;
        }
    }
    if (is_available(Variant::avx2)) return Variant::avx2;
    if (is_available(Variant::neon)) return Variant::neon;
    return Variant::scalar;
}

const KernelTable& kernels(Variant v) {
    if (!is_available(v)) {
        throw DomainError("SIMD variant '" + std::string(to_string(v)) + "' is not available");
    }
    switch (v) {
        case Variant::avx2: return *detail::avx2_table();
        case Variant::neon: return *detail::neon_table();
        case Variant::scalar: break;
    }
    return detail::scalar_table();
}

Variant active_variant() noexcept { return active_slot().load(std::memory_order_relaxed); }

const KernelTable& active_kernels() noexcept {
    switch (active_variant()) {
        case Variant::avx2: return *detail::avx2_table();
        case Variant::neon: return *detail::neon_table();
        case Variant::scalar: break;
    }
    return detail::scalar_table();
}

void set_active_variant(Variant v) {
    (void)kernels(v);
    active_slot().store(v, std::memory_order_relaxed);
}

double reversed_dot(std::span<const double> weights, std::span<const double> history) noexcept {
    const std::size_t n = std::min(weights.size(), history.size());
    if (n == 0) return 0.0;
    return active_kernels().reversed_dot(weights.data(), history.data() + history.size() - 1, n);
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) noexcept {
    return active_kernels().sum_sq_diff(a.data(), b.data(), std::min(a.size(), b.size()));
}

void axpy(double scale, std::span<const double> x, std::span<double> y) noexcept {
    active_kernels().axpy(scale, x.data(), y.data(), std::min(x.size(), y.size()));
}

}  // namespace fracctl::simd

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

// AArch64 only; NEON is part of the baseline ISA there.

#include "fracctl/simd/kernels.hpp"

#include <arm_neon.h>

namespace fracctl::simd::detail {
namespace {

// newest[-j], newest[-j-1] into lanes 0, 1.
inline float64x2_t load_reversed(const double* newest, std::size_t j) {
    return vextq_f64(vld1q_f64(newest - j - 1), vld1q_f64(newest - j - 1), 1);
}

double reversed_dot_neon(const double* weights, const double* newest, std::size_t count) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(weights + j), load_reversed(newest, j));
        acc1 = vfmaq_f64(acc1, vld1q_f64(weights + j + 2), load_reversed(newest, j + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; j < count; ++j) {
        acc += weights[j] * *(newest - j);
    }
    return acc;
}

double sum_sq_diff_neon(const double* a, const double* b, std::size_t count) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        acc0 = vfmaq_f64(acc0, d0, d0);
        acc1 = vfmaq_f64(acc1, d1, d1);
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < count; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void axpy_neon(double scale, const double* x, double* y, std::size_t count) {
    const float64x2_t s = vdupq_n_f64(scale);
    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) {
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), s, vld1q_f64(x + i)));
    }
    for (; i < count; ++i) {
        y[i] += scale * x[i];
    }
}

constexpr KernelTable neon_kernels{
    &reversed_dot_neon,
    &sum_sq_diff_neon,
    &axpy_neon,
};

}  // namespace

const KernelTable* neon_table() noexcept { return &neon_kernels; }

}  // namespace fracctl::simd::detail

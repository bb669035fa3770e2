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

// Built with -mavx2 -mfma; only reached after a runtime CPU check.

#include "fracctl/simd/kernels.hpp"

#include <immintrin.h>

namespace fracctl::simd::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Loads newest[-j], newest[-j-1], newest[-j-2], newest[-j-3] into lanes 0..3.
inline __m256d load_reversed(const double* newest, std::size_t j) {
    const __m256d v = _mm256_loadu_pd(newest - j - 3);
    return _mm256_permute4x64_pd(v, 0x1B);
}

double reversed_dot_avx2(const double* weights, const double* newest, std::size_t count) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 16 <= count; j += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(weights + j), load_reversed(newest, j), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(weights + j + 4), load_reversed(newest, j + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(weights + j + 8), load_reversed(newest, j + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(weights + j + 12), load_reversed(newest, j + 12), acc3);
    }
    for (; j + 4 <= count; j += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(weights + j), load_reversed(newest, j), acc0);
    }
    double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
    for (; j < count; ++j) {
        acc += weights[j] * *(newest - j);
    }
    return acc;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t count) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= count; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; i + 4 <= count; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < count; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void axpy_avx2(double scale, const double* x, double* y, std::size_t count) {
    const __m256d s = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(s, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < count; ++i) {
        y[i] += scale * x[i];
    }
}

constexpr KernelTable avx2_kernels{
    &reversed_dot_avx2,
    &sum_sq_diff_avx2,
    &axpy_avx2,
};

}  // namespace

const KernelTable* avx2_table() noexcept { return &avx2_kernels; }

}  // namespace fracctl::simd::detail

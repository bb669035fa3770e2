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

namespace fracctl::simd::detail {
namespace {

double reversed_dot_scalar(const double* weights, const double* newest, std::size_t count) {
    double acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        acc += weights[j] * *(newest - j);
    }
    return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t count) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void axpy_scalar(double scale, const double* x, double* y, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        y[i] += scale * x[i];
    }
}

constexpr KernelTable scalar_kernels{
    &reversed_dot_scalar,
    &sum_sq_diff_scalar,
    &axpy_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return scalar_kernels; }

}  // namespace fracctl::simd::detail

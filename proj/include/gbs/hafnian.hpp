// Copyright 2026 The loopgbs Authors.
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

#include <span>

#include "gbs/types.hpp"

namespace gbs {

/// Largest dimension accepted by the brute-force matching sum.
inline constexpr int kPmpMaxDimension = 12;
/// Largest dimension accepted by the trace-formula algorithm.
inline constexpr int kFastMaxDimension = 40;

/// Sum over all perfect matchings of the product of matched entries.
/// Reference implementation: (n-1)!! terms, n <= kPmpMaxDimension.
/// Odd n gives 0, the 0x0 matrix gives 1. Throws std::invalid_argument on
/// non-square, asymmetric (beyond 1e-12) or oversize input.
Complex hafnian_pmp(const CMatrix& m);

/// Same function via the inclusion-exclusion power-trace formula,
/// O(n^3 2^{n/2}): for each subset S of the n/2 row pairs, the power sums of
/// the paired submatrix come from a Hessenberg characteristic polynomial.
/// The subset sum is accumulated in a fixed order, so results are bit-stable.
Complex hafnian_fast(const CMatrix& m);

/// Hafnian of the matrix obtained by repeating row/column i of `m`
/// `repetitions[i]` times, without materialising the expanded matrix.
/// Dynamic programme over multiplicity vectors: cost is the number of
/// reachable count states times the number of distinct indices.
Complex hafnian_repeated(const CMatrix& m, std::span<const int> repetitions);

/// Pattern reduction on a 2m x 2m kernel matrix: keeps n_i copies of row and
/// column i followed by n_i copies of row and column i+m. Output is 2N x 2N.
CMatrix reduce_kernel_pattern(const CMatrix& a, std::span<const int> pattern);

/// Pattern reduction on an m x m block: n_i copies of row and column i.
/// Output is N x N.
CMatrix reduce_block_pattern(const CMatrix& b, std::span<const int> pattern);

namespace detail {
// Unchecked DP entry point for hot loops: `indices` lists distinct row
// indices of `m` and `counts` their multiplicities.
Complex hafnian_multiset(const CMatrix& m, std::span<const int> indices,
                         std::span<const int> counts);
}  // namespace detail

}  // namespace gbs

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
#include "gbs/hafnian.hpp"

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gbs/errors.hpp"

namespace gbs {
namespace {

void require_symmetric(const CMatrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(who) + ": matrix is not square");
  const double scale = std::max(1.0, max_abs(m));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
}

Complex pmp_recursive(const CMatrix& m, std::vector<int>& free_rows) {
  if (free_rows.empty()) return 1.0;
  const int first = free_rows.back();
  free_rows.pop_back();
  Complex total = 0.0;
  for (std::size_t k = 0; k < free_rows.size(); ++k) {
    const int partner = free_rows[k];
    // Remove partner by swapping with the back, recurse, then restore.
    std::swap(free_rows[k], free_rows.back());
    free_rows.pop_back();
    total += m(first, partner) * pmp_recursive(m, free_rows);
    free_rows.push_back(partner);
    std::swap(free_rows[k], free_rows.back());
  }
  free_rows.push_back(first);
  return total;
}

// Power sums p_1..p_max of the eigenvalues of `mat` (index 0 unused).
// Characteristic polynomial from the Hessenberg form via the
// leading-principal-minor recurrence, then Newton's identities.
std::vector<Complex> power_sums(const CMatrix& mat, int max_power) {
  std::vector<Complex> p(static_cast<std::size_t>(max_power) + 1, 0.0);
  const int d = static_cast<int>(mat.rows());
  if (d == 0) return p;

  CMatrix h;
  if (d <= 2) {
    h = mat;
  } else {
    Eigen::HessenbergDecomposition<CMatrix> hess(mat);
    h = hess.matrixH();
  }

  // polys[i][k]: coefficient of x^k in det(x I - H[0:i, 0:i]).
  std::vector<std::vector<Complex>> polys(static_cast<std::size_t>(d) + 1);
  polys[0] = {1.0};
  for (int i = 1; i <= d; ++i) {
    auto& cur = polys[i];
    cur.assign(static_cast<std::size_t>(i) + 1, 0.0);
    const auto& prev = polys[i - 1];
    const Complex hii = h(i - 1, i - 1);
    for (int k = 0; k < i; ++k) {
      cur[k + 1] += prev[k];
      cur[k] -= hii * prev[k];
    }
    Complex sub = 1.0;
    for (int j = i - 1; j >= 1; --j) {
      sub *= h(j, j - 1);
      const Complex w = h(j - 1, i - 1) * sub;
      const auto& pj = polys[j - 1];
      for (int k = 0; k < j; ++k) cur[k] -= w * pj[k];
    }
  }

  // Monic charpoly x^d + c_1 x^{d-1} + ... + c_d.
  const auto& poly = polys[d];
  std::vector<Complex> c(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) c[k] = poly[d - k];
  for (int k = 1; k <= max_power; ++k) {
    Complex acc = 0.0;
    const int upto = std::min(k - 1, d);
    for (int j = 1; j <= upto; ++j) acc += c[j] * p[k - j];
    if (k <= d) acc += static_cast<double>(k) * c[k];
    p[k] = -acc;
  }
  return p;
}

struct MultisetWorkspace {
  std::vector<Complex> memo;
  std::vector<std::uint32_t> stamp;
  std::uint32_t generation = 0;
};

class MultisetHafnian {
 public:
  MultisetHafnian(const CMatrix& m, std::span<const int> indices, std::span<const int> counts,
                  MultisetWorkspace& ws)
      : m_(m), idx_(indices.begin(), indices.end()), counts_(counts.begin(), counts.end()),
        stride_(indices.size()), ws_(ws) {
    std::size_t states = 1;
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      stride_[k] = states;
      states *= static_cast<std::size_t>(counts_[k]) + 1;
      if (states > (std::size_t{1} << 24))
        throw GuardError("hafnian_repeated: state space too large");
    }
    if (ws_.memo.size() < states) {
      ws_.memo.resize(states);
      ws_.stamp.assign(states, 0);
      ws_.generation = 0;
    }
    if (++ws_.generation == 0) {
      std::fill(ws_.stamp.begin(), ws_.stamp.end(), 0);
      ws_.generation = 1;
    }
    for (std::size_t k = 0; k < counts_.size(); ++k) state_ += stride_[k] * counts_[k];
  }

  Complex run() {
    const int total = std::accumulate(counts_.begin(), counts_.end(), 0);
    if (total % 2 != 0) return 0.0;
    return solve(total);
  }

 private:
  Complex solve(int remaining) {
    if (remaining == 0) return 1.0;
    if (ws_.stamp[state_] == ws_.generation) return ws_.memo[state_];
    std::size_t first = 0;
    while (counts_[first] == 0) ++first;
    const int ci = counts_[first];
    const int ri = idx_[first];
    Complex total = 0.0;
    if (ci >= 2) {
      counts_[first] = ci - 2;
      state_ -= 2 * stride_[first];
      total += static_cast<double>(ci - 1) * m_(ri, ri) * solve(remaining - 2);
      state_ += 2 * stride_[first];
    }
    counts_[first] = ci - 1;
    state_ -= stride_[first];
    for (std::size_t j = first + 1; j < counts_.size(); ++j) {
      const int cj = counts_[j];
      if (cj == 0) continue;
      const Complex w = m_(ri, idx_[j]);
      if (w == Complex(0.0)) continue;
      counts_[j] = cj - 1;
      state_ -= stride_[j];
      total += static_cast<double>(cj) * w * solve(remaining - 2);
      state_ += stride_[j];
      counts_[j] = cj;
    }
    state_ += stride_[first];
    counts_[first] = ci;
    ws_.stamp[state_] = ws_.generation;
    ws_.memo[state_] = total;
    return total;
  }

  const CMatrix& m_;
  std::vector<int> idx_;
  std::vector<int> counts_;
  std::vector<std::size_t> stride_;
  std::size_t state_ = 0;
  MultisetWorkspace& ws_;
};

}  // namespace

Complex hafnian_pmp(const CMatrix& m) {
  require_symmetric(m, "hafnian_pmp");
  if (m.rows() > kPmpMaxDimension)
    throw GuardError("hafnian_pmp: dimension exceeds oracle guard");
  const int n = static_cast<int>(m.rows());
  if (n % 2 != 0) return 0.0;
  std::vector<int> rows(static_cast<std::size_t>(n));
  std::iota(rows.rbegin(), rows.rend(), 0);
  return pmp_recursive(m, rows);
}

Complex hafnian_fast(const CMatrix& m) {
  require_symmetric(m, "hafnian_fast");
  if (m.rows() > kFastMaxDimension)
    throw GuardError("hafnian_fast: dimension exceeds guard");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  if (n % 2 != 0) return 0.0;
  const int half = n / 2;
  // The diagonal never enters a matching but does enter the power traces,
  // where large entries cancel badly. Drop it up front.
  CMatrix z = m;
  z.diagonal().setZero();

  Complex total = 0.0;
  std::vector<int> rows;
  rows.reserve(static_cast<std::size_t>(n));
  std::vector<Complex> series(static_cast<std::size_t>(half) + 1);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << half); ++mask) {
    rows.clear();
    for (int k = 0; k < half; ++k)
      if (mask & (std::uint64_t{1} << k)) {
        rows.push_back(2 * k);
        rows.push_back(2 * k + 1);
      }
    const int d = static_cast<int>(rows.size());
    // X_S * M_S: row r takes the entries of its pair partner r ^ 1.
    CMatrix paired(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) paired(r, c) = z(rows[r ^ 1], rows[c]);
    const auto p = power_sums(paired, half);

    // [x^half] exp(sum_k p_k x^k / (2k)).
    series[0] = 1.0;
    for (int j = 1; j <= half; ++j) {
      Complex acc = 0.0;
      for (int k = 1; k <= j; ++k) acc += 0.5 * p[k] * series[j - k];
      series[j] = acc / static_cast<double>(j);
    }
    const int sign = ((half - d / 2) % 2 == 0) ? 1 : -1;
    total += static_cast<double>(sign) * series[half];
  }
  return total;
}

namespace detail {
Complex hafnian_multiset(const CMatrix& m, std::span<const int> indices,
                         std::span<const int> counts) {
  thread_local MultisetWorkspace ws;
  MultisetHafnian solver(m, indices, counts, ws);
  return solver.run();
}
}  // namespace detail

Complex hafnian_repeated(const CMatrix& m, std::span<const int> repetitions) {
  require_symmetric(m, "hafnian_repeated");
  if (static_cast<Eigen::Index>(repetitions.size()) != m.rows())
    throw std::invalid_argument("hafnian_repeated: repetition vector length mismatch");
  std::vector<int> indices;
  std::vector<int> counts;
  for (std::size_t i = 0; i < repetitions.size(); ++i) {
    if (repetitions[i] < 0) throw std::invalid_argument("hafnian_repeated: negative repetition");
    if (repetitions[i] > 0) {
      indices.push_back(static_cast<int>(i));
      counts.push_back(repetitions[i]);
    }
  }
  return detail::hafnian_multiset(m, indices, counts);
}

CMatrix reduce_kernel_pattern(const CMatrix& a, std::span<const int> pattern) {
  const auto modes = static_cast<Eigen::Index>(pattern.size());
  if (a.rows() != 2 * modes || a.cols() != 2 * modes)
    throw std::invalid_argument("reduce_kernel_pattern: pattern length does not match kernel");
  std::vector<Eigen::Index> rows;
  for (int half = 0; half < 2; ++half)
    for (Eigen::Index i = 0; i < modes; ++i) {
      if (pattern[i] < 0) throw std::invalid_argument("reduce_kernel_pattern: negative count");
      for (int c = 0; c < pattern[i]; ++c) rows.push_back(i + half * modes);
    }
  return a(rows, rows);
}

CMatrix reduce_block_pattern(const CMatrix& b, std::span<const int> pattern) {
  const auto modes = static_cast<Eigen::Index>(pattern.size());
  if (b.rows() != modes || b.cols() != modes)
    throw std::invalid_argument("reduce_block_pattern: pattern length does not match block");
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < modes; ++i) {
    if (pattern[i] < 0) throw std::invalid_argument("reduce_block_pattern: negative count");
    for (int c = 0; c < pattern[i]; ++c) rows.push_back(i);
  }
  return b(rows, rows);
}

}  // namespace gbs

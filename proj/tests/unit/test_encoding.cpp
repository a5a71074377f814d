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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gbs/encoding.hpp"
#include "gbs/hafnian.hpp"
#include "gbs/json_io.hpp"
#include "oracles.hpp"

namespace {

using gbs::CMatrix;
using gbs::Complex;
using gbs::RMatrix;

double reconstruction_error(const CMatrix& b, const gbs::TakagiFactorization& f) {
  CMatrix d = CMatrix::Zero(b.rows(), b.rows());
  for (Eigen::Index i = 0; i < b.rows(); ++i) d(i, i) = f.values[i];
  return gbs::max_abs(CMatrix(f.u * d * f.u.transpose() - b));
}

TEST(Takagi, RandomComplexSymmetric) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 9;
    const CMatrix b = oracle::random_symmetric(n, rng);
    const auto f = gbs::takagi(b);
    EXPECT_LT(reconstruction_error(b, f), 1e-12 * std::max(1.0, f.values[0]));
    EXPECT_LT(gbs::max_abs(CMatrix(f.u.adjoint() * f.u - CMatrix::Identity(n, n))), 1e-12);
    for (int i = 0; i + 1 < n; ++i) EXPECT_GE(f.values[i], f.values[i + 1]);
    EXPECT_GE(f.values.back(), 0.0);
  }
}

TEST(Takagi, ValuesAreSingularValues) {
  std::mt19937_64 rng(89);
  const CMatrix b = oracle::random_symmetric(6, rng);
  const auto f = gbs::takagi(b);
  Eigen::JacobiSVD<CMatrix> svd(b);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(f.values[i], svd.singularValues()(i), 1e-12);
}

TEST(Takagi, DiagonalPositiveGivesIdentity) {
  CMatrix b = CMatrix::Zero(3, 3);
  b(0, 0) = 0.9;
  b(1, 1) = 0.5;
  b(2, 2) = 0.2;
  const auto f = gbs::takagi(b);
  EXPECT_LT(gbs::max_abs(CMatrix(f.u - CMatrix::Identity(3, 3))), 1e-14);
}

TEST(Takagi, NegativeEigenvalueGetsImaginaryColumn) {
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 0) = 0.7;
  b(1, 1) = -0.4;
  const auto f = gbs::takagi(b);
  EXPECT_NEAR(f.values[1], 0.4, 1e-14);
  EXPECT_NEAR(std::abs(f.u(1, 1).real()), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(f.u(1, 1)), 1.0, 1e-14);
  EXPECT_LT(reconstruction_error(b, f), 1e-14);
}

TEST(Takagi, RankDeficientAndDegenerate) {
  // Rank one real matrix: the kernel columns still complete a unitary.
  CMatrix v(4, 1);
  v << 1.0, 2.0, Complex(0.0, 1.0), -1.0;
  const CMatrix b = v * v.transpose();
  const auto f = gbs::takagi(b);
  EXPECT_LT(reconstruction_error(b, f), 1e-12);
  EXPECT_LT(gbs::max_abs(CMatrix(f.u.adjoint() * f.u - CMatrix::Identity(4, 4))), 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(f.values[i], 0.0);
  // Degenerate spectrum: deterministic output.
  const CMatrix id = CMatrix::Identity(4, 4);
  EXPECT_EQ(gbs::takagi(id).u, gbs::takagi(id).u);
  EXPECT_LT(reconstruction_error(id, gbs::takagi(id)), 1e-14);
  const auto z = gbs::takagi(CMatrix::Zero(3, 3));
  EXPECT_LT(gbs::max_abs(CMatrix(z.u.adjoint() * z.u - CMatrix::Identity(3, 3))), 1e-14);
}

TEST(Takagi, RejectsNonSymmetric) {
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 1) = 1.0;
  EXPECT_THROW(gbs::takagi(b), std::invalid_argument);
  EXPECT_THROW(gbs::takagi(CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST(Rescale, SingleModeClosedForm) {
  // One value lambda = 1, target n: c = sqrt(n / (1 + n)).
  for (double n : {0.05, 0.5, 2.0}) {
    const auto p = gbs::rescale_for_mean_photons({1.0}, n);
    EXPECT_NEAR(p.c, std::sqrt(n / (1.0 + n)), 1e-15);
    EXPECT_NEAR(p.mean_photons, n, 1e-13);
  }
  // Recovers a known c.
  const std::vector<double> lam{0.9, 0.4, 0.1};
  const double n = gbs::total_mean_photons(lam, 0.31);
  EXPECT_NEAR(gbs::rescale_for_mean_photons(lam, n).c, 0.31, 1e-14);
}

TEST(Rescale, MonotoneAndBounded) {
  const std::vector<double> lam{0.9, 0.4, 0.1};
  double prev = 0.0;
  for (double n : {1e-6, 0.01, 0.1, 1.0, 10.0}) {
    const auto p = gbs::rescale_for_mean_photons(lam, n);
    EXPECT_GT(p.c, prev);
    EXPECT_LT(p.c * 0.9, 1.0);
    prev = p.c;
  }
  // Doubling a small target roughly scales c by sqrt(2).
  const double c1 = gbs::rescale_for_mean_photons(lam, 1e-6).c;
  const double c2 = gbs::rescale_for_mean_photons(lam, 2e-6).c;
  EXPECT_NEAR(c2 / c1, std::sqrt(2.0), 1e-5);
  EXPECT_THROW(gbs::rescale_for_mean_photons(lam, 0.0), std::invalid_argument);
  EXPECT_THROW(gbs::rescale_for_mean_photons({0.0, 0.0}, 1.0), std::invalid_argument);
  EXPECT_THROW(gbs::rescale_for_mean_photons({-0.1}, 1.0), std::invalid_argument);
}

TEST(Encode, KernelRecoversScaledMatrix) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix b = oracle::random_symmetric(6, rng);
    const auto dev = gbs::encode_graph(b, 1.5);
    const auto state = gbs::encoded_state(dev);
    const auto k = gbs::kernel_matrix(state);
    EXPECT_LT(gbs::max_abs(CMatrix(k.b_block - dev.params.c * b)), 1e-10);
    EXPECT_LT(gbs::max_abs(k.c_block), 1e-12);
    double total = 0.0;
    for (double x : gbs::mean_photon_numbers(state)) total += x;
    EXPECT_NEAR(total, 1.5, 1e-9);
  }
}

TEST(Encode, RelativeProbabilitiesIndependentOfScale) {
  std::mt19937_64 rng(101);
  const CMatrix b = oracle::random_symmetric(5, rng);
  const gbs::OutcomeModel lo(gbs::encoded_state(gbs::encode_graph(b, 0.2)));
  const gbs::OutcomeModel hi(gbs::encoded_state(gbs::encode_graph(b, 2.0)));
  const std::vector<int> p1{1, 1, 0, 0, 0}, p3{0, 0, 1, 0, 1};
  EXPECT_NEAR(lo.probability(p1) / lo.probability(p3), hi.probability(p1) / hi.probability(p3),
              1e-9 * hi.probability(p1) / hi.probability(p3));
  // And the ratio is the hafnian ratio.
  const double h1 = std::norm(gbs::hafnian_fast(gbs::reduce_block_pattern(b, p1)));
  const double h3 = std::norm(gbs::hafnian_fast(gbs::reduce_block_pattern(b, p3)));
  EXPECT_NEAR(lo.probability(p1) / lo.probability(p3), h1 / h3, 1e-9 * h1 / h3);
  EXPECT_EQ(lo.probability(std::vector<int>{1, 0, 0, 0, 0}), 0.0);
}

TEST(Encode, RejectsUnphysicalParams) {
  CMatrix b = CMatrix::Identity(2, 2);
  gbs::EncodingParams p;
  p.c = 1.0;
  p.lambdas = {1.0, 1.0};
  EXPECT_THROW(gbs::encode_graph(b, p), std::invalid_argument);
  p.c = 0.5;
  p.lambdas = {1.0};
  EXPECT_THROW(gbs::encode_graph(b, p), std::invalid_argument);
}

TEST(Encode, JsonCarriesParameters) {
  std::mt19937_64 rng(103);
  const auto dev = gbs::encode_graph(oracle::random_symmetric(3, rng), 0.7);
  const auto j = gbs::encoding_to_json(dev);
  EXPECT_NEAR(j.at("c").get<double>(), dev.params.c, 0.0);
  EXPECT_EQ(j.at("squeezing_r").size(), 3u);
}

TEST(Scan, NFoldMassHasAnInteriorMaximum) {
  RMatrix adj = RMatrix::Ones(4, 4);
  adj.diagonal().setZero();
  const auto pts = gbs::scan_nfold_probability(adj.cast<Complex>(), 2, {0.01, 0.3, 1.0, 4.0, 30.0});
  ASSERT_EQ(pts.size(), 5u);
  EXPECT_LT(pts[0].probability, pts[1].probability);
  EXPECT_GT(pts[2].probability, pts[4].probability);
  for (const auto& p : pts) {
    EXPECT_GE(p.probability, 0.0);
    EXPECT_LE(p.probability, 1.0);
  }
  EXPECT_NEAR(pts[3].mean_photons, 4.0, 1e-9);
}

}  // namespace

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
#include "gbs/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "gbs/combinatorics.hpp"
#include "gbs/errors.hpp"

namespace gbs {
namespace {

void fix_gauge(CMatrix& u, Eigen::Index col, bool free_phase) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const Complex z = u(i, col);
    if (std::abs(z) <= 1e-9) continue;
    if (free_phase) {
      u.col(col) *= std::conj(z) / std::abs(z);
    } else if (z.real() < 0.0 || (std::abs(z.real()) <= 1e-12 && z.imag() < 0.0)) {
      u.col(col) *= -1.0;
    }
    return;
  }
}

}  // namespace

TakagiFactorization takagi(const CMatrix& b) {
  if (b.rows() != b.cols()) throw std::invalid_argument("takagi: matrix is not square");
  const Eigen::Index m = b.rows();
  if (m == 0) return {};
  if (max_abs(CMatrix(b - b.transpose())) > 1e-10)
    throw std::invalid_argument("takagi: matrix is not symmetric");
  const CMatrix bs = 0.5 * (b + b.transpose());

  RMatrix h(2 * m, 2 * m);
  h << bs.real(), bs.imag(), bs.imag(), -bs.real();
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw NumericalError("takagi: eigensolver failed");

  TakagiFactorization out;
  out.u.resize(m, m);
  out.values.resize(static_cast<std::size_t>(m));
  const double scale = std::max(1.0, std::abs(eig.eigenvalues()(2 * m - 1)));
  Eigen::Index positive = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index src = 2 * m - 1 - j;  // descending
    const double val = eig.eigenvalues()(src);
    out.values[j] = val > 0.0 ? val : 0.0;
    if (val > 1e-12 * scale) ++positive;
    const auto v = eig.eigenvectors().col(src);
    for (Eigen::Index i = 0; i < m; ++i) out.u(i, j) = Complex(v(i), v(i + m));
  }
  for (Eigen::Index j = positive; j < m; ++j) out.values[j] = 0.0;

  if (positive < m) {
    // Zero-value columns from the complex orthogonal complement of the rest.
    Eigen::HouseholderQR<CMatrix> qr(out.u.leftCols(positive));
    const CMatrix q = qr.householderQ();
    out.u.rightCols(m - positive) = q.rightCols(m - positive);
  }
  for (Eigen::Index j = 0; j < m; ++j) fix_gauge(out.u, j, j >= positive);
  return out;
}

double total_mean_photons(const std::vector<double>& lambdas, double c) {
  double n = 0.0;
  for (double l : lambdas) {
    const double x = c * l;
    n += x * x / (1.0 - x * x);
  }
  return n;
}

EncodingParams rescale_for_mean_photons(const std::vector<double>& lambdas, double n_target) {
  if (!(n_target > 0.0) || !std::isfinite(n_target))
    throw std::invalid_argument("rescale: target mean photon number must be > 0");
  double lmax = 0.0;
  for (double l : lambdas) {
    if (l < 0.0) throw std::invalid_argument("rescale: values must be non-negative");
    lmax = std::max(lmax, l);
  }
  if (lmax == 0.0) throw std::invalid_argument("rescale: all values are zero");
  double lo = 0.0;
  double hi = (1.0 - 1e-12) / lmax;
  if (total_mean_photons(lambdas, hi) < n_target)
    throw std::invalid_argument("rescale: target exceeds the physical squeezing bound");
  // Run to the last representable midpoint; n(c) is monotone, so this pins
  // c down to rounding and not just n.
  double c = 0.5 * (lo + hi);
  for (int it = 0; it < 2000; ++it) {
    c = 0.5 * (lo + hi);
    if (c <= lo || c >= hi) break;
    (total_mean_photons(lambdas, c) < n_target ? lo : hi) = c;
  }
  EncodingParams p;
  p.c = c;
  p.lambdas = lambdas;
  for (double l : lambdas) p.r.push_back(std::atanh(c * l));
  p.mean_photons = total_mean_photons(lambdas, c);
  return p;
}

EncodedDevice encode_graph(const CMatrix& b, const EncodingParams& params) {
  EncodedDevice dev;
  dev.takagi = takagi(b);
  if (params.lambdas.size() != dev.takagi.values.size())
    throw std::invalid_argument("encode_graph: parameter count does not match matrix size");
  dev.params = params;
  for (std::size_t i = 0; i < dev.takagi.values.size(); ++i) {
    const double x = params.c * dev.takagi.values[i];
    if (!(x < 1.0)) throw std::invalid_argument("encode_graph: c * lambda_max >= 1");
    dev.squeezers.push_back(SqueezerSpec::from_tanh(x));
  }
  dev.interferometer = TransferMatrix(dev.takagi.u, true);
  return dev;
}

EncodedDevice encode_graph(const CMatrix& b, double n_target) {
  const auto f = takagi(b);
  return encode_graph(b, rescale_for_mean_photons(f.values, n_target));
}

GaussianState encoded_state(const EncodedDevice& device) {
  return apply_channel(smsv_state(device.squeezers), device.interferometer);
}

std::vector<NFoldScanPoint> scan_nfold_probability(const CMatrix& b, int n_photons,
                                                   const std::vector<double>& grid) {
  const int m = static_cast<int>(b.rows());
  if (n_photons < 1 || n_photons > m)
    throw std::invalid_argument("scan: photon number must lie in [1, m]");
  const auto f = takagi(b);
  std::vector<NFoldScanPoint> out;
  for (double target : grid) {
    const auto dev = encode_graph(b, rescale_for_mean_photons(f.values, target));
    const OutcomeModel model(encoded_state(dev));
    std::vector<int> combo(static_cast<std::size_t>(n_photons));
    for (int i = 0; i < n_photons; ++i) combo[i] = i;
    std::vector<int> pattern(static_cast<std::size_t>(m));
    double mass = 0.0;
    do {
      std::fill(pattern.begin(), pattern.end(), 0);
      for (int i : combo) pattern[i] = 1;
      mass += model.probability(pattern);
    } while (next_combination(combo, m));
    out.push_back({dev.params.mean_photons, mass});
  }
  return out;
}

}  // namespace gbs

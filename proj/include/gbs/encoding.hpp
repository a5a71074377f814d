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

#include <vector>

#include "gbs/gaussian.hpp"
#include "gbs/types.hpp"

namespace gbs {

/// B = U diag(values) U^T with U unitary and values descending, >= 0.
struct TakagiFactorization {
  CMatrix u;
  std::vector<double> values;
};

/// Squeezing rescale c and the per-mode r_i = atanh(c lambda_i).
/// mean_photons is the total sum_i (c lambda_i)^2 / (1 - (c lambda_i)^2).
struct EncodingParams {
  double c = 0.0;
  std::vector<double> lambdas;
  std::vector<double> r;
  double mean_photons = 0.0;
};

struct EncodedDevice {
  std::vector<SqueezerSpec> squeezers;
  TransferMatrix interferometer;
  TakagiFactorization takagi;
  EncodingParams params;
};

/// Takagi-Autonne factorisation via the real symmetric embedding
/// [[Re B, Im B], [Im B, -Re B]], whose +lambda eigenvectors (x, y) give the
/// columns u = x + i y. Columns for vanishing values are completed to a
/// unitary from the orthogonal complement. Gauge: the first entry above
/// 1e-9 in each column has positive real part (real positive when the value
/// is zero, where the phase is free).
TakagiFactorization takagi(const CMatrix& b);

/// Total mean photon number of squeezers tanh r_i = c lambda_i.
double total_mean_photons(const std::vector<double>& lambdas, double c);

/// Bisection for c with |<n>(c) - n_target| < 1e-10 and c lambda_max < 1 - 1e-12.
EncodingParams rescale_for_mean_photons(const std::vector<double>& lambdas, double n_target);

/// Squeezers and interferometer that realise c * B losslessly.
EncodedDevice encode_graph(const CMatrix& b, const EncodingParams& params);
/// Factorises, rescales to the total `n_target`, and encodes.
EncodedDevice encode_graph(const CMatrix& b, double n_target);

/// Lossless output state of an encoded device.
GaussianState encoded_state(const EncodedDevice& device);

struct NFoldScanPoint {
  double mean_photons = 0.0;  // total
  double probability = 0.0;   // collision-free N-fold mass
};

/// Collision-free N-fold probability of the lossless encoding of B at each
/// total mean photon number in `grid`. Used to pick <n> for N-fold output.
std::vector<NFoldScanPoint> scan_nfold_probability(const CMatrix& b, int n_photons,
                                                   const std::vector<double>& grid);

}  // namespace gbs

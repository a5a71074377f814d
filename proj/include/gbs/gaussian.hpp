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

#include <optional>
#include <span>
#include <vector>

#include "gbs/types.hpp"

namespace gbs {

/// Single-mode squeezer: magnitude r >= 0 and phase theta. The kernel entry
/// of a lossless squeezed mode is e^{i theta} tanh r.
struct SqueezerSpec {
  double r = 0.0;
  double theta = 0.0;

  /// Builds a spec from lambda = tanh r, 0 <= lambda < 1.
  static SqueezerSpec from_tanh(double lambda, double theta = 0.0);
  double tanh_r() const;
  void validate() const;
};

/// Transmissions of the loss stages of a time-bin device.
struct LossBudget {
  double eta_c = 1.0;  // source-to-fibre coupling
  double eta_f = 1.0;  // fibre components (variable beam splitter)
  double eta_o = 1.0;  // delay line
  double eta_d = 1.0;  // detection
  std::optional<double> uniform;  // replaces the product when set

  /// Budget of the reference single-loop device: 0.40, 0.90, 0.80, 0.80.
  static LossBudget reference();
  /// Overall power transmission.
  double transmission() const;
  void validate() const;
};

/// Linear optical map, outputs x inputs. No-gain is enforced on
/// construction; `lossless` additionally requires unitarity.
class TransferMatrix {
 public:
  TransferMatrix() = default;
  explicit TransferMatrix(CMatrix m, bool lossless = false);

  const CMatrix& matrix() const { return m_; }
  Eigen::Index outputs() const { return m_.rows(); }
  Eigen::Index inputs() const { return m_.cols(); }
  bool lossless() const { return lossless_; }
  bool is_unitary(double tol = 1e-10) const;

 private:
  CMatrix m_;
  bool lossless_ = false;
};

/// Zero-mean Gaussian state. Ladder vector is ordered creation-first,
/// xi = (a^dag_1..a^dag_m, a_1..a_m), and Sigma_ij = <{xi_i, xi_j^dag}>/2,
/// so vacuum is I/2 and the Q matrix is Sigma + I/2.
class GaussianState {
 public:
  /// Validates Hermiticity (1e-10) and positive definiteness of Q.
  GaussianState(int modes, CMatrix sigma);

  int mode_count() const { return m_; }
  const CMatrix& covariance() const { return sigma_; }
  CMatrix q_matrix() const;

 private:
  int m_;
  CMatrix sigma_;
};

/// A = X(I - Q^{-1}) = [[B, C], [C^T, B^*]].
struct KernelMatrix {
  int mode_count = 0;
  CMatrix a;
  CMatrix b_block;
  CMatrix c_block;
};

GaussianState vacuum_state(int modes);
GaussianState smsv_state(std::span<const SqueezerSpec> specs);
GaussianState tmsv_state(double r, double theta = 0.0);

/// Sigma' = L Sigma L^dag + (I - L L^dag)/2 with L = conj(Lambda) (+) Lambda
/// on the (creation, annihilation) blocks.
GaussianState apply_channel(const GaussianState& state, const TransferMatrix& lambda);
GaussianState uniform_loss(const GaussianState& state, double eta);

KernelMatrix kernel_matrix(const GaussianState& state);

double vacuum_probability(const GaussianState& state);
/// P(n) = P(0) / prod n_i! * Haf(A_n).
double pattern_probability(const GaussianState& state, std::span<const int> pattern);
/// P(0) / prod n_i! * |Haf(B_n)|^2, valid for pure states only (C = 0).
double pure_pattern_probability(const GaussianState& state, std::span<const int> pattern);
double purity(const GaussianState& state);

/// Per-mode photon expectations, Sigma_ii - 1/2.
std::vector<double> mean_photon_numbers(const GaussianState& state);

/// Precomputed kernel and P(0) for repeated pattern queries. Uses the
/// |Haf(B_n)|^2 form when the C block vanishes (below 1e-12).
class OutcomeModel {
 public:
  explicit OutcomeModel(const GaussianState& state);
  explicit OutcomeModel(KernelMatrix kernel, double p0);

  double vacuum_probability() const { return p0_; }
  const KernelMatrix& kernel() const { return kernel_; }
  bool pure() const { return pure_; }
  int mode_count() const { return kernel_.mode_count; }

  double probability(std::span<const int> pattern) const;
  /// Always evaluates Haf(A_n), regardless of purity.
  double mixed_probability(std::span<const int> pattern) const;
  /// Always evaluates |Haf(B_n)|^2; caller asserts purity.
  double pure_probability(std::span<const int> pattern) const;

 private:
  KernelMatrix kernel_;
  double p0_ = 1.0;
  bool pure_ = false;
};

}  // namespace gbs

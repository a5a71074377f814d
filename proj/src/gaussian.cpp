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
#include "gbs/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "gbs/errors.hpp"
#include "gbs/hafnian.hpp"

namespace gbs {
namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kDriftTol = 1e-9;
constexpr double kImagTol = 1e-10;

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

double factorial_product(std::span<const int> pattern) {
  double f = 1.0;
  for (int n : pattern)
    for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void check_pattern(std::span<const int> pattern, int modes) {
  if (static_cast<int>(pattern.size()) != modes)
    throw std::invalid_argument("pattern length " + std::to_string(pattern.size()) +
                                " does not match mode count " + std::to_string(modes));
  for (int n : pattern)
    if (n < 0) throw std::invalid_argument("pattern has a negative photon count");
}

double finish_probability(Complex raw) {
  const double scale = std::max(1.0, std::abs(raw.real()));
  if (std::abs(raw.imag()) > kImagTol * scale)
    throw NumericalError("probability has imaginary residue " + std::to_string(raw.imag()));
  double p = raw.real();
  if (p < 0.0) {
    if (p < -kImagTol) throw NumericalError("negative probability " + std::to_string(p));
    p = 0.0;
  }
  return p;
}

// Distinct indices and counts of the A-reduction for a pattern.
void kernel_multiset(std::span<const int> pattern, std::vector<int>& idx, std::vector<int>& cnt) {
  const int m = static_cast<int>(pattern.size());
  idx.clear();
  cnt.clear();
  for (int half = 0; half < 2; ++half)
    for (int i = 0; i < m; ++i)
      if (pattern[i] > 0) {
        idx.push_back(i + half * m);
        cnt.push_back(pattern[i]);
      }
}

void block_multiset(std::span<const int> pattern, std::vector<int>& idx, std::vector<int>& cnt) {
  idx.clear();
  cnt.clear();
  for (int i = 0; i < static_cast<int>(pattern.size()); ++i)
    if (pattern[i] > 0) {
      idx.push_back(i);
      cnt.push_back(pattern[i]);
    }
}

}  // namespace

SqueezerSpec SqueezerSpec::from_tanh(double lambda, double theta) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument("squeezer tanh parameter must lie in [0, 1)");
  return SqueezerSpec{std::atanh(lambda), theta};
}

double SqueezerSpec::tanh_r() const { return std::tanh(r); }

void SqueezerSpec::validate() const {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("squeezing r must be >= 0");
  if (!(std::tanh(r) < 1.0)) throw std::invalid_argument("squeezing too large: tanh r rounds to 1");
  if (!std::isfinite(theta)) throw std::invalid_argument("squeezing phase must be finite");
}

LossBudget LossBudget::reference() { return LossBudget{0.40, 0.90, 0.80, 0.80, std::nullopt}; }

double LossBudget::transmission() const {
  validate();
  return uniform ? *uniform : eta_c * eta_f * eta_o * eta_d;
}

void LossBudget::validate() const {
  auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!ok(eta_c) || !ok(eta_f) || !ok(eta_o) || !ok(eta_d) || (uniform && !ok(*uniform)))
    throw std::invalid_argument("loss budget transmissions must lie in [0, 1]");
}

TransferMatrix::TransferMatrix(CMatrix m, bool lossless) : m_(std::move(m)), lossless_(lossless) {
  if (m_.size() > 0) {
    Eigen::JacobiSVD<CMatrix> svd(m_);
    const double smax = svd.singularValues()(0);
    if (smax > 1.0 + 1e-10)
      throw std::invalid_argument("transfer matrix has gain: largest singular value " +
                                  std::to_string(smax));
  }
  if (lossless_ && !is_unitary())
    throw std::invalid_argument("transfer matrix declared lossless but is not unitary");
}

bool TransferMatrix::is_unitary(double tol) const {
  if (m_.rows() != m_.cols()) return false;
  const CMatrix id = CMatrix::Identity(m_.rows(), m_.cols());
  return max_abs(CMatrix(m_.adjoint() * m_ - id)) <= tol;
}

GaussianState::GaussianState(int modes, CMatrix sigma) : m_(modes), sigma_(std::move(sigma)) {
  if (modes < 1) throw std::invalid_argument("Gaussian state needs at least one mode");
  if (sigma_.rows() != 2 * modes || sigma_.cols() != 2 * modes)
    throw std::invalid_argument("covariance must be 2m x 2m");
  if (max_abs(CMatrix(sigma_ - sigma_.adjoint())) > kHermitianTol)
    throw std::invalid_argument("covariance is not Hermitian");
  Eigen::LLT<CMatrix> llt(q_matrix());
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("Q = Sigma + I/2 is not positive definite");
}

CMatrix GaussianState::q_matrix() const {
  return sigma_ + 0.5 * CMatrix::Identity(2 * m_, 2 * m_);
}

GaussianState vacuum_state(int modes) {
  if (modes < 1) throw std::invalid_argument("vacuum_state: mode count must be >= 1");
  return GaussianState(modes, 0.5 * CMatrix::Identity(2 * modes, 2 * modes));
}

GaussianState smsv_state(std::span<const SqueezerSpec> specs) {
  const int m = static_cast<int>(specs.size());
  if (m < 1) throw std::invalid_argument("smsv_state: need at least one mode");
  CMatrix s = 0.5 * CMatrix::Identity(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    specs[i].validate();
    const double r = specs[i].r;
    const double n = std::sinh(r) * std::sinh(r);
    const Complex pair = std::polar(std::sinh(r) * std::cosh(r), specs[i].theta);
    s(i, i) += n;
    s(i + m, i + m) += n;
    s(i + m, i) = pair;             // <a a>
    s(i, i + m) = std::conj(pair);  // <a^dag a^dag>
  }
  return GaussianState(m, s);
}

GaussianState tmsv_state(double r, double theta) {
  SqueezerSpec{r, theta}.validate();
  const double n = std::sinh(r) * std::sinh(r);
  const Complex pair = std::polar(std::sinh(r) * std::cosh(r), theta);
  CMatrix s = 0.5 * CMatrix::Identity(4, 4);
  for (int i = 0; i < 4; ++i) s(i, i) += n;
  s(2, 1) = s(3, 0) = pair;
  s(1, 2) = s(0, 3) = std::conj(pair);
  return GaussianState(2, s);
}

GaussianState apply_channel(const GaussianState& state, const TransferMatrix& lambda) {
  const int m = state.mode_count();
  if (lambda.inputs() != m)
    throw std::invalid_argument("apply_channel: transfer matrix inputs " +
                                std::to_string(lambda.inputs()) + " != mode count " +
                                std::to_string(m));
  const int out = static_cast<int>(lambda.outputs());
  if (out < 1) throw std::invalid_argument("apply_channel: transfer matrix has no outputs");
  const CMatrix& lam = lambda.matrix();
  CMatrix l = CMatrix::Zero(2 * out, 2 * m);
  l.topLeftCorner(out, m) = lam.conjugate();
  l.bottomRightCorner(out, m) = lam;
  CMatrix raw = l * state.covariance() * l.adjoint() +
                0.5 * (CMatrix::Identity(2 * out, 2 * out) - l * l.adjoint());
  CMatrix herm = hermitize(raw);
  const double drift = max_abs(CMatrix(raw - herm));
  if (drift > kDriftTol)
    throw NumericalError("apply_channel: Hermiticity drift " + std::to_string(drift));
  return GaussianState(out, std::move(herm));
}

GaussianState uniform_loss(const GaussianState& state, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("uniform_loss: eta outside [0, 1]");
  const int m = state.mode_count();
  return apply_channel(state,
                       TransferMatrix(std::sqrt(eta) * CMatrix::Identity(m, m), eta == 1.0));
}

KernelMatrix kernel_matrix(const GaussianState& state) {
  const int m = state.mode_count();
  const CMatrix q = state.q_matrix();
  Eigen::LLT<CMatrix> llt(q);
  if (llt.info() != Eigen::Success) throw NumericalError("kernel_matrix: Q is singular");
  const CMatrix y = CMatrix::Identity(2 * m, 2 * m) - llt.solve(CMatrix::Identity(2 * m, 2 * m));
  // X swaps the block rows, so the top block row of A is the bottom of Y.
  const CMatrix b_raw = y.bottomLeftCorner(m, m);
  const CMatrix c_raw = y.bottomRightCorner(m, m);
  KernelMatrix k;
  k.mode_count = m;
  k.b_block = 0.5 * (b_raw + b_raw.transpose());
  k.c_block = hermitize(c_raw);
  k.a.resize(2 * m, 2 * m);
  k.a.topLeftCorner(m, m) = k.b_block;
  k.a.topRightCorner(m, m) = k.c_block;
  k.a.bottomLeftCorner(m, m) = k.c_block.transpose();
  k.a.bottomRightCorner(m, m) = k.b_block.conjugate();
  return k;
}

double vacuum_probability(const GaussianState& state) {
  Eigen::LLT<CMatrix> llt(state.q_matrix());
  if (llt.info() != Eigen::Success) throw NumericalError("vacuum_probability: Q not positive");
  // det Q = prod diag(L)^2, so 1/sqrt(det Q) = 1/prod diag(L).
  double p = 1.0;
  const CMatrix& lm = llt.matrixLLT();
  for (Eigen::Index i = 0; i < lm.rows(); ++i) p /= lm(i, i).real();
  return p;
}

double purity(const GaussianState& state) {
  Eigen::LLT<CMatrix> llt(2.0 * state.covariance());
  if (llt.info() != Eigen::Success) throw NumericalError("purity: covariance not positive");
  double p = 1.0;
  const CMatrix& lm = llt.matrixLLT();
  for (Eigen::Index i = 0; i < lm.rows(); ++i) p /= lm(i, i).real();
  return p;
}

std::vector<double> mean_photon_numbers(const GaussianState& state) {
  std::vector<double> n(static_cast<std::size_t>(state.mode_count()));
  for (int i = 0; i < state.mode_count(); ++i) n[i] = state.covariance()(i, i).real() - 0.5;
  return n;
}

OutcomeModel::OutcomeModel(const GaussianState& state)
    : OutcomeModel(kernel_matrix(state), gbs::vacuum_probability(state)) {}

OutcomeModel::OutcomeModel(KernelMatrix kernel, double p0)
    : kernel_(std::move(kernel)), p0_(p0), pure_(max_abs(kernel_.c_block) < 1e-12) {}

double OutcomeModel::probability(std::span<const int> pattern) const {
  return pure_ ? pure_probability(pattern) : mixed_probability(pattern);
}

double OutcomeModel::mixed_probability(std::span<const int> pattern) const {
  check_pattern(pattern, kernel_.mode_count);
  thread_local std::vector<int> idx, cnt;
  kernel_multiset(pattern, idx, cnt);
  const Complex h = detail::hafnian_multiset(kernel_.a, idx, cnt);
  return finish_probability(p0_ / factorial_product(pattern) * h);
}

double OutcomeModel::pure_probability(std::span<const int> pattern) const {
  check_pattern(pattern, kernel_.mode_count);
  thread_local std::vector<int> idx, cnt;
  block_multiset(pattern, idx, cnt);
  const Complex h = detail::hafnian_multiset(kernel_.b_block, idx, cnt);
  return finish_probability(p0_ / factorial_product(pattern) * std::norm(h));
}

double pattern_probability(const GaussianState& state, std::span<const int> pattern) {
  check_pattern(pattern, state.mode_count());
  return OutcomeModel(state).mixed_probability(pattern);
}

double pure_pattern_probability(const GaussianState& state, std::span<const int> pattern) {
  check_pattern(pattern, state.mode_count());
  OutcomeModel model(state);
  if (max_abs(model.kernel().c_block) > 1e-8)
    throw std::invalid_argument("pure_pattern_probability: state is mixed (C != 0)");
  return model.pure_probability(pattern);
}

}  // namespace gbs

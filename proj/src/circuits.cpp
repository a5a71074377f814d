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
#include "gbs/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

#include "gbs/errors.hpp"

namespace gbs {
namespace {

constexpr Complex kI{0.0, 1.0};

double wrap_phase(double phi) {
  double w = std::fmod(phi, 2.0 * std::numbers::pi);
  if (w < 0) w += 2.0 * std::numbers::pi;
  return w;
}

// Applies a 2x2 block to rows (p, q) of w.
void apply_rows(CMatrix& w, Eigen::Index p, Eigen::Index q, const CMatrix& g) {
  const Eigen::RowVectorXcd rp = w.row(p);
  const Eigen::RowVectorXcd rq = w.row(q);
  w.row(p) = g(0, 0) * rp + g(0, 1) * rq;
  w.row(q) = g(1, 0) * rp + g(1, 1) * rq;
}

// Ops of a round expanded to one per coupler position, identities filling gaps.
std::vector<BeamSplitterOp> expand_round(const RoundTrip& round, int m) {
  std::vector<BeamSplitterOp> full(static_cast<std::size_t>(std::max(m - 1, 0)));
  for (int b = 0; b < m - 1; ++b) full[b].bin = b;
  for (const auto& op : round.ops) full[op.bin] = op;
  return full;
}

}  // namespace

CMatrix BeamSplitterOp::matrix() const {
  const double t = std::sqrt(T);
  const double k = std::sqrt(1.0 - T);
  const Complex ph = std::polar(1.0, phi);
  CMatrix g(2, 2);
  g << t * ph, kI * k, kI * k * ph, t;
  return g;
}

void BeamSplitterOp::validate() const {
  if (!(T >= 0.0 && T <= 1.0)) throw std::invalid_argument("beam splitter T outside [0, 1]");
  if (!std::isfinite(phi)) throw std::invalid_argument("beam splitter phase must be finite");
}

void LoopSchedule::validate() const {
  if (m < 1) throw std::invalid_argument("schedule needs m >= 1");
  if (tau_s != 0.0 && tau_s < m * tau_p)
    throw std::invalid_argument("storage loop shorter than m pulse separations");
  if (!output_phases.empty() && static_cast<int>(output_phases.size()) != m)
    throw std::invalid_argument("output phase count does not match m");
  for (const auto& round : rounds) {
    if (static_cast<int>(round.ops.size()) > std::max(m - 1, 0))
      throw std::invalid_argument("round trip has more than m-1 ops");
    if (!round.s2_closed.empty() && round.s2_closed.size() != round.ops.size())
      throw std::invalid_argument("switch annotations do not match op count");
    int last = -1;
    for (const auto& op : round.ops) {
      op.validate();
      if (op.bin < 0 || op.bin > m - 2)
        throw std::invalid_argument("op touches undefined bin " + std::to_string(op.bin));
      if (op.bin <= last) throw std::invalid_argument("ops within a round must have rising bins");
      last = op.bin;
    }
  }
}

void SingleLoopSpec::validate() const {
  if (bins < 1) throw std::invalid_argument("single loop needs at least one bin");
  if (!(T >= 0.0 && T <= 1.0)) throw std::invalid_argument("coupler T outside [0, 1]");
  if (!(eta_loop > 0.0 && eta_loop <= 1.0))
    throw std::invalid_argument("round-trip transmission outside (0, 1]");
  if (!occupied.empty() && static_cast<int>(occupied.size()) != bins)
    throw std::invalid_argument("occupied mask length does not match bin count");
}

bool SingleLoopSpec::is_occupied(int bin) const {
  return occupied.empty() || occupied.at(static_cast<std::size_t>(bin));
}

TransferMatrix single_loop_transfer(const SingleLoopSpec& spec) {
  spec.validate();
  const int m = spec.bins;
  const double t = std::sqrt(spec.T);
  const double k2 = 1.0 - spec.T;
  const Complex hop = std::sqrt(spec.eta_loop) * std::polar(1.0, spec.phi);
  CMatrix lam = CMatrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    lam(i, i) = t;
    Complex amp = -k2 * hop;  // (i kappa)^2 * hop for k = 1
    for (int k = 1; i + k < m; ++k) {
      lam(i + k, i) = amp;
      amp *= t * hop;
    }
  }
  return TransferMatrix(std::move(lam), spec.T == 1.0);
}

TransferMatrix loop_circuit_transfer(const LoopSchedule& schedule) {
  schedule.validate();
  const int m = schedule.m;
  // Row 0 is the processing mode A, rows 1..m+1 the storage slots.
  CMatrix w = CMatrix::Zero(m + 2, m);
  for (int i = 0; i < m; ++i) w(i + 1, i) = 1.0;
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;

  for (const auto& round : schedule.rounds) {
    const auto ops = expand_round(round, m);
    apply_rows(w, 0, 1, swap);
    for (int slot = 2; slot <= m; ++slot) {
      // A holds the lower mode, the slot the upper; the stored output is
      // the lower mode (it leaves the loop one slot early).
      apply_rows(w, 0, slot, swap * ops[slot - 2].matrix());
    }
    apply_rows(w, 0, m + 1, swap);
    if (w.row(0).cwiseAbs().maxCoeff() > 1e-12)
      throw NumericalError("processing loop not drained after round trip");
    // Slot 1 is now empty; shift the train back by one slot.
    for (int s = 1; s <= m; ++s) w.row(s) = w.row(s + 1);
    w.row(m + 1).setZero();
  }
  CMatrix out = w.block(1, 0, m, m);
  return TransferMatrix(std::move(out), true);
}

CMatrix schedule_unitary(const LoopSchedule& schedule) {
  schedule.validate();
  const int m = schedule.m;
  CMatrix u = CMatrix::Identity(m, m);
  for (const auto& round : schedule.rounds)
    for (const auto& op : expand_round(round, m)) apply_rows(u, op.bin, op.bin + 1, op.matrix());
  return u;
}

CMatrix realised_unitary(const LoopSchedule& schedule) {
  CMatrix u = loop_circuit_transfer(schedule).matrix();
  if (!schedule.output_phases.empty())
    for (int i = 0; i < schedule.m; ++i) u.row(i) *= std::polar(1.0, schedule.output_phases[i]);
  return u;
}

LoopSchedule compile_reck(const CMatrix& u) {
  if (u.rows() != u.cols() || u.rows() < 1)
    throw std::invalid_argument("compile_reck: matrix must be square and non-empty");
  const int m = static_cast<int>(u.rows());
  if (max_abs(CMatrix(u.adjoint() * u - CMatrix::Identity(m, m))) > 1e-10)
    throw std::invalid_argument("compile_reck: matrix is not unitary");

  LoopSchedule sched;
  sched.m = m;
  sched.tau_s = m * sched.tau_p;
  CMatrix w = u;
  for (int k = 0; k < m - 1; ++k) {
    const int row = m - 1 - k;
    RoundTrip round;
    for (int j = 0; j < m - 1; ++j) {
      BeamSplitterOp op;
      op.bin = j;
      if (j < row) {
        const Complex u1 = w(row, j);
        const Complex u2 = w(row, j + 1);
        const double a1 = std::norm(u1);
        const double a2 = std::norm(u2);
        if (a1 > 0.0) {
          op.T = a2 / (a1 + a2);
          op.phi = wrap_phase(std::arg(u1) - std::arg(u2) - std::numbers::pi / 2);
        }
        // Right-multiply by the inverse op on columns (j, j+1).
        const CMatrix ginv = op.matrix().adjoint();
        const Eigen::VectorXcd c1 = w.col(j);
        const Eigen::VectorXcd c2 = w.col(j + 1);
        w.col(j) = c1 * ginv(0, 0) + c2 * ginv(1, 0);
        w.col(j + 1) = c1 * ginv(0, 1) + c2 * ginv(1, 1);
      }
      round.ops.push_back(op);
      round.s2_closed.push_back(true);
    }
    sched.rounds.push_back(std::move(round));
  }
  // w = u * R_0^{-1} ... R_{m-2}^{-1} is now diagonal, so u = w * R_{m-2} ... R_0
  // with round 0 first in time.
  sched.output_phases.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) sched.output_phases[i] = wrap_phase(std::arg(w(i, i)));
  return sched;
}

TransferMatrix lossy_device(const TransferMatrix& core, const LossBudget& budget) {
  const double eta = budget.transmission();
  return TransferMatrix(std::sqrt(eta) * core.matrix(), core.lossless() && eta == 1.0);
}

TransferMatrix single_loop_device(const SingleLoopSpec& spec, const LossBudget& budget,
                                  LossPlacement placement) {
  budget.validate();
  if (budget.uniform || placement == LossPlacement::uniform)
    return lossy_device(single_loop_transfer(spec), budget);
  SingleLoopSpec inner = spec;
  inner.eta_loop = spec.eta_loop * budget.eta_f * budget.eta_o;
  const double outer = budget.eta_f * budget.eta_c * budget.eta_d;
  return TransferMatrix(std::sqrt(outer) * single_loop_transfer(inner).matrix());
}

double max_deviation_up_to_phases(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_deviation_up_to_phases: shape mismatch");
  const Eigen::Index r = a.rows();
  const Eigen::Index c = a.cols();
  if (r == 0 || c == 0) return 0.0;
  // Bipartite nodes: rows 0..r-1, columns r..r+c-1. Prim's algorithm on |b|.
  std::vector<double> alpha(static_cast<std::size_t>(r + c), 0.0);
  std::vector<bool> seen(static_cast<std::size_t>(r + c), false);
  using Edge = std::tuple<double, Eigen::Index, Eigen::Index>;  // weight, from, to
  std::priority_queue<Edge> heap;
  auto visit = [&](Eigen::Index node) {
    seen[node] = true;
    if (node < r) {
      for (Eigen::Index j = 0; j < c; ++j)
        if (!seen[r + j]) heap.emplace(std::abs(b(node, j)), node, r + j);
    } else {
      for (Eigen::Index i = 0; i < r; ++i)
        if (!seen[i]) heap.emplace(std::abs(b(i, node - r)), node, i);
    }
  };
  for (Eigen::Index start = 0; start < r + c; ++start) {
    if (seen[start]) continue;
    visit(start);
    while (!heap.empty()) {
      const auto [wgt, from, to] = heap.top();
      heap.pop();
      if (seen[to]) continue;
      const Eigen::Index i = from < r ? from : to;
      const Eigen::Index j = (from < r ? to : from) - r;
      // Phases satisfy alpha_i + beta_j = arg a_ij - arg b_ij on tree edges.
      const double target = (wgt > 0.0 && std::abs(a(i, j)) > 0.0)
                                ? std::arg(a(i, j)) - std::arg(b(i, j))
                                : 0.0;
      alpha[to] = target - alpha[from];
      visit(to);
    }
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) {
      const Complex fitted = b(i, j) * std::polar(1.0, alpha[i] + alpha[r + j]);
      worst = std::max(worst, std::abs(a(i, j) - fitted));
    }
  return worst;
}

}  // namespace gbs

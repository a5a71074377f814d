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

/// Phase shifter on the first mode followed by a symmetric beam splitter:
///   M(T, phi) = [[t e^{i phi}, i kappa], [i kappa e^{i phi}, t]],
/// t = sqrt(T), kappa = sqrt(1 - T). T = 1, phi = 0 is the identity.
/// `bin` is the lower of the two consecutive time-bin modes it couples.
struct BeamSplitterOp {
  double T = 1.0;
  double phi = 0.0;
  int bin = 0;

  CMatrix matrix() const;
  void validate() const;
};

/// One pass of the pulse train through the processing loop. `s2_closed`
/// is the per-op state of the storage switch (true keeps the light cycling).
struct RoundTrip {
  std::vector<BeamSplitterOp> ops;
  std::vector<bool> s2_closed;
};

/// Double-loop program: ordered round trips plus timing annotations.
/// The realised unitary is diag(e^{i output_phases}) * loop_circuit_transfer.
struct LoopSchedule {
  int m = 0;
  std::vector<RoundTrip> rounds;
  double tau_p = 1.0;  // pulse separation
  double tau_s = 0.0;  // storage loop delay, >= m * tau_p
  std::vector<double> output_phases;

  void validate() const;
};

/// Single-loop interferometer over a window of `bins` time bins.
struct SingleLoopSpec {
  int bins = 20;
  double T = 0.5;
  double phi = 0.0;
  double eta_loop = 1.0;       // round-trip power transmission
  std::vector<bool> occupied;  // bins fed by the source; empty means all

  void validate() const;
  bool is_occupied(int bin) const;
};

/// Where the budget's component and delay losses act in the single-loop device.
enum class LossPlacement {
  uniform,  // all four stages as one scalar on the whole transfer matrix
  in_loop,  // eta_f on every coupler pass, eta_o on every round trip
};

/// Lambda[i][i] = t, Lambda[i+k][i] = (i kappa)^2 t^{k-1} (sqrt(eta_loop) e^{i phi})^k.
/// Light still circulating after the last bin is dropped.
TransferMatrix single_loop_transfer(const SingleLoopSpec& spec);

/// Simulates the double-loop circuit on the processing mode plus m+1
/// storage slots and returns the m x m map between bin modes. Throws
/// NumericalError when the processing mode is not drained at the end.
TransferMatrix loop_circuit_transfer(const LoopSchedule& schedule);

/// Same map as loop_circuit_transfer but composed directly as products of
/// nearest-neighbour 2x2 blocks. Used for cross-checks and by the compiler.
CMatrix schedule_unitary(const LoopSchedule& schedule);

/// Unitary including the stored output phases.
CMatrix realised_unitary(const LoopSchedule& schedule);

/// Reck-style nulling into m-1 round trips of m-1 ops each (trailing ops of
/// later rounds are identities). realised_unitary reproduces U.
LoopSchedule compile_reck(const CMatrix& u);

/// sqrt(eta) * Lambda_core with eta the budget's overall transmission.
TransferMatrix lossy_device(const TransferMatrix& core, const LossBudget& budget);

/// Single-loop device with the budget applied according to `placement`.
/// A uniform override in the budget always acts as one scalar.
TransferMatrix single_loop_device(const SingleLoopSpec& spec, const LossBudget& budget,
                                  LossPlacement placement);

/// min over diagonal phase matrices D1, D2 of max |a - D1 b D2|, with the
/// phases fitted along a maximum-weight spanning tree of |b|.
double max_deviation_up_to_phases(const CMatrix& a, const CMatrix& b);

}  // namespace gbs

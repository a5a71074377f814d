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

#include "gbs/circuits.hpp"
#include "gbs/encoding.hpp"
#include "gbs/gaussian.hpp"
#include "gbs/graph.hpp"
#include "gbs/search.hpp"
#include "json.hpp"

namespace gbs {

using Json = nlohmann::ordered_json;

/// Row-major nested arrays.
Json real_rows(const RMatrix& m);
RMatrix real_matrix_from_rows(const Json& j, const char* what);

/// {"m", "sigma_re", "sigma_im"}.
Json state_to_json(const GaussianState& s);
GaussianState state_from_json(const Json& j);

/// {"m", "a_re", "a_im"}; blocks are recovered from A.
Json kernel_to_json(const KernelMatrix& k);
KernelMatrix kernel_from_json(const Json& j);

/// {"m", "rounds": [{"ops": [{"T", "phi", "bin", "s2"}]}], "tau_p", "tau_s", "output_phases"}.
Json schedule_to_json(const LoopSchedule& s);
LoopSchedule schedule_from_json(const Json& j);

/// {"labels", "adj"}.
Json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const Json& j);

/// Square matrix from [[..]] (real), {"re": [[..]], "im": [[..]]}, a kernel
/// ({"a_re", "a_im"}) or a graph ({"adj"}).
CMatrix matrix_from_json(const Json& j);

Json encoding_to_json(const EncodedDevice& dev);

/// Curve values plus the full search configuration echo.
Json curve_to_json(const SearchCurve& curve);

}  // namespace gbs

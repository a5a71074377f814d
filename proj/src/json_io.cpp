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
#include "gbs/json_io.hpp"

#include <stdexcept>
#include <string>

#include "gbs/table.hpp"

namespace gbs {
namespace {

std::invalid_argument bad(const std::string& what) {
  return std::invalid_argument("json: " + what);
}

}  // namespace

Json real_rows(const RMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RMatrix real_matrix_from_rows(const Json& j, const char* what) {
  if (!j.is_array()) throw bad(std::string(what) + " must be an array of rows");
  const auto r = static_cast<Eigen::Index>(j.size());
  const Eigen::Index c = r ? static_cast<Eigen::Index>(j[0].size()) : 0;
  RMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
      throw bad(std::string(what) + " rows have unequal length");
    for (Eigen::Index k = 0; k < c; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw bad(std::string(what) + " entries must be numbers");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

namespace {

CMatrix complex_from(const Json& j, const char* re, const char* im) {
  if (!j.contains(re)) throw bad(std::string("missing '") + re + "'");
  RMatrix r = real_matrix_from_rows(j.at(re), re);
  RMatrix i = j.contains(im) ? real_matrix_from_rows(j.at(im), im) : RMatrix::Zero(r.rows(), r.cols());
  if (i.rows() != r.rows() || i.cols() != r.cols()) throw bad("real and imaginary shapes differ");
  CMatrix m(r.rows(), r.cols());
  m.real() = r;
  m.imag() = i;
  return m;
}

}  // namespace

Json state_to_json(const GaussianState& s) {
  Json j;
  j["m"] = s.mode_count();
  j["sigma_re"] = real_rows(s.covariance().real());
  j["sigma_im"] = real_rows(s.covariance().imag());
  return j;
}

GaussianState state_from_json(const Json& j) {
  return GaussianState(j.at("m").get<int>(), complex_from(j, "sigma_re", "sigma_im"));
}

Json kernel_to_json(const KernelMatrix& k) {
  Json j;
  j["m"] = k.mode_count;
  j["a_re"] = real_rows(k.a.real());
  j["a_im"] = real_rows(k.a.imag());
  return j;
}

KernelMatrix kernel_from_json(const Json& j) {
  KernelMatrix k;
  k.mode_count = j.at("m").get<int>();
  k.a = complex_from(j, "a_re", "a_im");
  const int m = k.mode_count;
  if (k.a.rows() != 2 * m || k.a.cols() != 2 * m) throw bad("kernel must be 2m x 2m");
  k.b_block = k.a.topLeftCorner(m, m);
  k.c_block = k.a.topRightCorner(m, m);
  return k;
}

Json schedule_to_json(const LoopSchedule& s) {
  Json j;
  j["m"] = s.m;
  j["tau_p"] = s.tau_p;
  j["tau_s"] = s.tau_s;
  j["rounds"] = Json::array();
  for (const auto& round : s.rounds) {
    Json ops = Json::array();
    for (std::size_t i = 0; i < round.ops.size(); ++i) {
      const auto& op = round.ops[i];
      Json o;
      o["T"] = op.T;
      o["phi"] = op.phi;
      o["bin"] = op.bin;
      if (!round.s2_closed.empty()) o["s2"] = static_cast<bool>(round.s2_closed[i]);
      ops.push_back(std::move(o));
    }
    j["rounds"].push_back(Json{{"ops", std::move(ops)}});
  }
  j["output_phases"] = s.output_phases;
  return j;
}

LoopSchedule schedule_from_json(const Json& j) {
  LoopSchedule s;
  s.m = j.at("m").get<int>();
  s.tau_p = j.value("tau_p", 1.0);
  s.tau_s = j.value("tau_s", 0.0);
  for (const auto& r : j.at("rounds")) {
    RoundTrip round;
    bool any_s2 = false;
    for (const auto& o : r.at("ops")) {
      round.ops.push_back({o.at("T").get<double>(), o.value("phi", 0.0), o.at("bin").get<int>()});
      any_s2 |= o.contains("s2");
      round.s2_closed.push_back(o.value("s2", true));
    }
    if (!any_s2) round.s2_closed.clear();
    s.rounds.push_back(std::move(round));
  }
  if (j.contains("output_phases")) s.output_phases = j.at("output_phases").get<std::vector<double>>();
  s.validate();
  return s;
}

Json graph_to_json(const WeightedGraph& g) {
  Json j;
  j["labels"] = g.labels();
  j["adj"] = real_rows(g.adjacency());
  return j;
}

WeightedGraph graph_from_json(const Json& j) {
  RMatrix adj = real_matrix_from_rows(j.at("adj"), "adj");
  std::vector<std::string> labels;
  if (j.contains("labels"))
    for (const auto& l : j.at("labels")) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
  return WeightedGraph(std::move(adj), std::move(labels));
}

CMatrix matrix_from_json(const Json& j) {
  CMatrix m;
  if (j.is_array()) {
    m = real_matrix_from_rows(j, "matrix").cast<Complex>();
  } else if (j.contains("re")) {
    m = complex_from(j, "re", "im");
  } else if (j.contains("a_re")) {
    m = complex_from(j, "a_re", "a_im");
  } else if (j.contains("adj")) {
    m = real_matrix_from_rows(j.at("adj"), "adj").cast<Complex>();
  } else if (j.contains("matrix")) {
    return matrix_from_json(j.at("matrix"));
  } else {
    throw bad("unrecognised matrix document");
  }
  if (m.rows() != m.cols()) throw bad("matrix must be square");
  return m;
}

Json encoding_to_json(const EncodedDevice& dev) {
  Json j;
  j["m"] = dev.takagi.values.size();
  j["c"] = dev.params.c;
  j["mean_photons_total"] = dev.params.mean_photons;
  j["takagi_values"] = dev.takagi.values;
  j["squeezing_r"] = dev.params.r;
  Json tanh = Json::array();
  for (const auto& s : dev.squeezers) tanh.push_back(s.tanh_r());
  j["squeezing_tanh"] = tanh;
  j["u_re"] = real_rows(dev.takagi.u.real());
  j["u_im"] = real_rows(dev.takagi.u.imag());
  return j;
}

Json curve_to_json(const SearchCurve& curve) {
  Json j;
  j["config"] = {{"k", curve.k},
                 {"repeats", curve.repeats},
                 {"rng_seed", curve.rng_seed},
                 {"budgets", curve.budgets},
                 {"source", curve.source},
                 {"graph_hash", hex64(curve.graph_hash)}};
  j["budget"] = curve.budgets;
  j["mean"] = curve.mean;
  j["stderr"] = curve.stderr_;
  return j;
}

}  // namespace gbs

// Copyright 2026 The iaside Authors.
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

#ifndef IASIDE_TESTS_FIXTURE_MODEL_HPP
#define IASIDE_TESTS_FIXTURE_MODEL_HPP

// Server side of the predictor wire protocol for tests: a tiny model whose
// class scores grow with the mean pixel value, plus switchable faults.

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "iaside/error.hpp"
#include "iaside/wire.hpp"

namespace fixture {

struct Behavior {
  std::size_t classes = 3;
  std::size_t channels = 1;
  std::size_t size = 8;
  std::size_t max_batch = 0;
  /// normal | badrow | wrongid | error | silent
  std::string mode = "normal";
};

inline std::vector<double> scores(const float* x, std::size_t n, std::size_t classes) {
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i];
  mean /= static_cast<double>(n);
  std::vector<double> row(classes);
  double z = 0.0;
  for (std::size_t k = 0; k < classes; ++k) {
    row[k] = std::exp(static_cast<double>(k + 1) * mean);
    z += row[k];
  }
  for (double& p : row) p /= z;
  return row;
}

/// Reply to one request line; empty when nothing should be sent. Sets
/// `quit` on bye.
inline std::string respond(const std::string& line, const Behavior& b, bool& quit) {
  using nlohmann::json;
  const json req = json::parse(line, nullptr, false);
  const std::string op = req.is_object() ? req.value("op", "") : "";
  if (op == "hello") {
    json r{{"op", "hello"},
           {"classes", b.classes},
           {"input", {{"c", b.channels}, {"h", b.size}, {"w", b.size}}},
           {"max_batch", b.max_batch}};
    return r.dump();
  }
  if (op == "bye") {
    quit = true;
    return {};
  }
  if (op != "predict") return json{{"op", "error"}, {"message", "unknown op"}}.dump();
  if (b.mode == "silent") return {};
  iaside::wire::PredictRequest pr;
  try {
    pr = iaside::wire::parse_predict_request(line);
  } catch (const iaside::Error& e) {
    return json{{"op", "error"}, {"id", req.value("id", 0)}, {"message", e.what()}}.dump();
  }
  if (b.mode == "error") {
    return json{{"op", "error"}, {"id", pr.id}, {"message", "model exploded"}}.dump();
  }
  if (pr.shape.channels != b.channels || pr.shape.height != b.size || pr.shape.width != b.size) {
    return json{{"op", "error"}, {"id", pr.id}, {"message", "wrong input shape"}}.dump();
  }
  json probs = json::array();
  const std::size_t per = pr.shape.size();
  for (std::size_t i = 0; i < pr.n; ++i) {
    auto row = scores(pr.data.data() + i * per, per, b.classes);
    if (b.mode == "badrow") row[0] -= 0.1;
    probs.push_back(row);
  }
  const std::uint64_t id = b.mode == "wrongid" ? pr.id + 1 : pr.id;
  return json{{"op", "predict"}, {"id", id}, {"probs", probs}}.dump();
}

}  // namespace fixture

#endif  // IASIDE_TESTS_FIXTURE_MODEL_HPP

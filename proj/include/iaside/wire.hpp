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

#ifndef IASIDE_WIRE_HPP
#define IASIDE_WIRE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iaside/image.hpp"
#include "iaside/predictor.hpp"

// Newline-delimited JSON protocol spoken with external predictors:
//
//   -> {"op":"hello"}
//   <- {"op":"hello","classes":C,"input":{"c":C,"h":H,"w":W},"max_batch":B}
//   -> {"op":"predict","id":n,"shape":[N,C,H,W],"dtype":"f32","data":"<b64>"}
//   <- {"op":"predict","id":n,"probs":[[...],...]}
//   <- {"op":"error","id":n,"message":"..."}
//   -> {"op":"bye"}
//
// `data` is base64 of little-endian float32 values in N,C,H,W row-major
// order. Unknown fields are ignored.

namespace iaside::wire {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ProtocolError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

struct Hello {
  std::size_t classes = 0;
  Shape input;
  std::size_t max_batch = 0;
};

std::string hello_request();
/// Throws ProtocolError when the line is not a well-formed hello.
Hello parse_hello(std::string_view line);

/// Images must share one shape.
std::string predict_request(std::uint64_t id, std::span<const ImageTensor> xs);

struct PredictRequest {
  std::uint64_t id = 0;
  std::size_t n = 0;
  Shape shape;
  std::vector<float> data;
};
/// Server-side decoding of a predict request (used by fixtures and tests).
PredictRequest parse_predict_request(std::string_view line);

/// Parses a predict reply for request `id`, expecting `n` rows of `classes`
/// values. An "error" reply raises ProtocolError carrying its message.
ProbRows parse_predict_response(std::string_view line, std::uint64_t id,
                                std::size_t n, std::size_t classes);

std::string bye_request();

}  // namespace iaside::wire

#endif  // IASIDE_WIRE_HPP

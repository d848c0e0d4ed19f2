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

#include "iaside/wire.hpp"

#include <bit>
#include <cstring>

#include "json.hpp"

#include "iaside/error.hpp"

namespace iaside::wire {

static_assert(std::endian::native == std::endian::little,
              "the wire format assumes a little-endian host");

using nlohmann::json;

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

json parse_object(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolError("malformed message: " + std::string(line.substr(0, 200)));
  }
  return j;
}

std::size_t positive_field(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0) {
    throw ProtocolError(std::string(where) + " lacks a positive integer '" + key + "'");
  }
  return j[key].get<std::size_t>();
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(n >> 18) & 63];
    out += kAlphabet[(n >> 12) & 63];
    out += kAlphabet[(n >> 6) & 63];
    out += kAlphabet[n & 63];
  }
  if (i + 1 == bytes.size()) {
    const std::uint32_t n = bytes[i] << 16;
    out += kAlphabet[(n >> 18) & 63];
    out += kAlphabet[(n >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(n >> 18) & 63];
    out += kAlphabet[(n >> 12) & 63];
    out += kAlphabet[(n >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw ProtocolError("base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        v[k] = 0;
        ++pad;
      } else {
        if (pad > 0) throw ProtocolError("base64 padding in the middle of a quantum");
        v[k] = decode_char(c);
        if (v[k] < 0) throw ProtocolError("invalid base64 character");
      }
    }
    const std::uint32_t n = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out.push_back(static_cast<std::uint8_t>(n >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((n >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(n & 0xff));
  }
  return out;
}

std::string hello_request() { return json{{"op", "hello"}}.dump(); }

std::string bye_request() { return json{{"op", "bye"}}.dump(); }

Hello parse_hello(std::string_view line) {
  const json j = parse_object(line);
  if (j.value("op", "") == "error") {
    throw ProtocolError("predictor refused hello: " + j.value("message", std::string()));
  }
  if (j.value("op", "") != "hello") throw ProtocolError("expected a hello reply");
  Hello h;
  h.classes = positive_field(j, "classes", "hello");
  if (!j.contains("input") || !j["input"].is_object()) {
    throw ProtocolError("hello lacks an 'input' object");
  }
  const json& in = j["input"];
  h.input.channels = positive_field(in, "c", "hello input");
  h.input.height = positive_field(in, "h", "hello input");
  h.input.width = positive_field(in, "w", "hello input");
  if (j.contains("max_batch")) {
    if (!j["max_batch"].is_number_integer() || j["max_batch"].get<long long>() < 0) {
      throw ProtocolError("hello 'max_batch' must be a non-negative integer");
    }
    h.max_batch = j["max_batch"].get<std::size_t>();
  }
  return h;
}

std::string predict_request(std::uint64_t id, std::span<const ImageTensor> xs) {
  if (xs.empty()) throw InvalidInputError("predict request needs at least one image");
  const Shape shape = xs.front().shape();
  std::vector<std::uint8_t> bytes;
  bytes.reserve(xs.size() * shape.size() * sizeof(float));
  for (const auto& x : xs) {
    if (x.shape() != shape) throw InvalidInputError("images in one batch must share a shape");
    for (double v : x.data()) {
      const float f = static_cast<float>(v);
      std::uint8_t b[sizeof(float)];
      std::memcpy(b, &f, sizeof(float));
      bytes.insert(bytes.end(), b, b + sizeof(float));
    }
  }
  json j;
  j["op"] = "predict";
  j["id"] = id;
  j["shape"] = {xs.size(), shape.channels, shape.height, shape.width};
  j["dtype"] = "f32";
  j["data"] = base64_encode(bytes);
  return j.dump();
}

PredictRequest parse_predict_request(std::string_view line) {
  const json j = parse_object(line);
  if (j.value("op", "") != "predict") throw ProtocolError("expected a predict request");
  PredictRequest req;
  if (!j.contains("id") || !j["id"].is_number_unsigned()) {
    throw ProtocolError("predict request lacks an id");
  }
  req.id = j["id"].get<std::uint64_t>();
  if (j.value("dtype", "") != "f32") throw ProtocolError("unsupported dtype");
  const json& shape = j.at("shape");
  if (!shape.is_array() || shape.size() != 4) throw ProtocolError("shape must be [N,C,H,W]");
  req.n = shape[0].get<std::size_t>();
  req.shape = {shape[1].get<std::size_t>(), shape[2].get<std::size_t>(),
               shape[3].get<std::size_t>()};
  const auto bytes = base64_decode(j.at("data").get<std::string>());
  if (bytes.size() != req.n * req.shape.size() * sizeof(float)) {
    throw ProtocolError("payload size does not match the declared shape");
  }
  req.data.resize(bytes.size() / sizeof(float));
  std::memcpy(req.data.data(), bytes.data(), bytes.size());
  return req;
}

ProbRows parse_predict_response(std::string_view line, std::uint64_t id, std::size_t n,
                                std::size_t classes) {
  const json j = parse_object(line);
  const std::string op = j.value("op", "");
  if (op == "error") {
    throw ProtocolError("predictor error for request " + std::to_string(id) + ": " +
                        j.value("message", std::string("(no message)")));
  }
  if (op != "predict") throw ProtocolError("unexpected reply op '" + op + "'");
  if (!j.contains("id") || !j["id"].is_number_integer() || j["id"].get<std::uint64_t>() != id) {
    throw ProtocolError("reply id does not echo request " + std::to_string(id));
  }
  if (!j.contains("probs") || !j["probs"].is_array() || j["probs"].size() != n) {
    throw ProtocolError("reply must carry " + std::to_string(n) + " probability rows");
  }
  ProbRows rows;
  rows.reserve(n);
  for (const auto& r : j["probs"]) {
    if (!r.is_array() || r.size() != classes) {
      throw ProtocolError("reply row must hold " + std::to_string(classes) + " numbers");
    }
    ProbRow row;
    row.reserve(classes);
    for (const auto& p : r) {
      if (!p.is_number()) throw ProtocolError("reply row holds a non-number");
      row.push_back(p.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace iaside::wire

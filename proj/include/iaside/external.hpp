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

#ifndef IASIDE_EXTERNAL_HPP
#define IASIDE_EXTERNAL_HPP

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "iaside/predictor.hpp"
#include "iaside/wire.hpp"

namespace iaside {

struct TransportSpec {
  enum class Kind { Subprocess, Tcp };
  Kind kind = Kind::Subprocess;
  std::string command;  // Subprocess: run through /bin/sh -c
  std::string host;     // Tcp
  std::uint16_t port = 0;
  std::chrono::milliseconds timeout{30000};
  int retries = 2;
  std::chrono::milliseconds backoff{100};
};

/// Parses `cmd:<shell command>` or `tcp:<host>:<port>`.
TransportSpec parse_transport_spec(const std::string& text);

/// Ordered, line-oriented byte channel.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send_line(const std::string& line) = 0;
  /// Blocks until a full line arrives; throws TransportError on timeout or
  /// a closed channel.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
};

std::unique_ptr<Transport> open_transport(const TransportSpec& spec);

/// Predictor served by an external process. Wire access is serialized; a
/// transport failure reconnects and retries up to `spec.retries` times with
/// exponential backoff before surfacing TransportError.
class ExternalPredictor final : public Predictor {
 public:
  explicit ExternalPredictor(TransportSpec spec);
  ~ExternalPredictor() override;

  std::string id() const override;
  std::size_t num_classes() const override { return hello_.classes; }
  Shape input_shape() const override { return hello_.input; }
  std::size_t max_batch() const override { return hello_.max_batch; }
  ProbRows predict(std::span<const ImageTensor> xs) const override;

 private:
  void connect() const;

  TransportSpec spec_;
  mutable wire::Hello hello_;
  mutable std::mutex mutex_;
  mutable std::unique_ptr<Transport> transport_;
  mutable std::uint64_t next_id_ = 1;
};

/// Connects, completes the hello handshake and wraps the predictor.
PredictorHandle connect_external(const TransportSpec& spec);

}  // namespace iaside

#endif  // IASIDE_EXTERNAL_HPP

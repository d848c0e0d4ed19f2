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

#include "iaside/external.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "iaside/error.hpp"

namespace iaside {
namespace {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  ~Fd() { reset(); }
  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

void write_all(int fd, const std::string& data, bool socket) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = socket ? ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL)
                             : ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("write to predictor failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

// Buffered line reader over a file descriptor with a deadline.
class LineReader {
 public:
  std::string read_line(int fd, std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw TransportError("timed out waiting for the predictor");
      pollfd p{fd, POLLIN, 0};
      const int r = ::poll(&p, 1, static_cast<int>(left.count()));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("poll failed: ") + std::strerror(errno));
      }
      if (r == 0) continue;
      char chunk[65536];
      const ssize_t n = ::read(fd, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("read from predictor failed: ") + std::strerror(errno));
      }
      if (n == 0) throw TransportError("predictor closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  std::string buffer_;
};

class SubprocessTransport final : public Transport {
 public:
  explicit SubprocessTransport(const std::string& command) {
    int to_child[2];
    int from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0 || ::pipe2(from_child, O_CLOEXEC) != 0) {
      throw TransportError(std::string("pipe failed: ") + std::strerror(errno));
    }
    pid_ = ::fork();
    if (pid_ < 0) throw TransportError(std::string("fork failed: ") + std::strerror(errno));
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    in_ = Fd(to_child[1]);
    out_ = Fd(from_child[0]);
  }

  ~SubprocessTransport() override {
    in_.reset();
    out_.reset();
    if (pid_ > 0) {
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(pid_, nullptr, WNOHANG) == pid_) return;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
  }

  void send_line(const std::string& line) override { write_all(in_.get(), line + "\n", false); }

  std::string read_line(std::chrono::milliseconds timeout) override {
    return reader_.read_line(out_.get(), timeout);
  }

 private:
  pid_t pid_ = -1;
  Fd in_;
  Fd out_;
  LineReader reader_;
};

class TcpTransport final : public Transport {
 public:
  TcpTransport(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
    if (rc != 0) throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
    std::string last_error = "no addresses";
    for (addrinfo* a = res; a != nullptr; a = a->ai_next) {
      Fd fd(::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol));
      if (fd.get() < 0) continue;
      if (::connect(fd.get(), a->ai_addr, a->ai_addrlen) == 0) {
        sock_ = std::move(fd);
        break;
      }
      last_error = std::strerror(errno);
    }
    ::freeaddrinfo(res);
    if (sock_.get() < 0) {
      throw TransportError("cannot connect to " + host + ":" + std::to_string(port) + ": " +
                           last_error);
    }
  }

  void send_line(const std::string& line) override { write_all(sock_.get(), line + "\n", true); }

  std::string read_line(std::chrono::milliseconds timeout) override {
    return reader_.read_line(sock_.get(), timeout);
  }

 private:
  Fd sock_;
  LineReader reader_;
};

}  // namespace

TransportSpec parse_transport_spec(const std::string& text) {
  TransportSpec spec;
  if (text.rfind("cmd:", 0) == 0) {
    spec.kind = TransportSpec::Kind::Subprocess;
    spec.command = text.substr(4);
    if (spec.command.empty()) throw ConfigurationError("empty predictor command");
    return spec;
  }
  if (text.rfind("tcp:", 0) == 0) {
    const std::string rest = text.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      throw ConfigurationError("tcp predictor must be tcp:host:port");
    }
    spec.kind = TransportSpec::Kind::Tcp;
    spec.host = rest.substr(0, colon);
    try {
      const int port = std::stoi(rest.substr(colon + 1));
      if (port <= 0 || port > 65535) throw std::out_of_range("port");
      spec.port = static_cast<std::uint16_t>(port);
    } catch (const std::exception&) {
      throw ConfigurationError("invalid port in '" + text + "'");
    }
    return spec;
  }
  throw ConfigurationError("predictor transport must start with cmd: or tcp:");
}

std::unique_ptr<Transport> open_transport(const TransportSpec& spec) {
  ::signal(SIGPIPE, SIG_IGN);
  if (spec.kind == TransportSpec::Kind::Subprocess) {
    return std::make_unique<SubprocessTransport>(spec.command);
  }
  return std::make_unique<TcpTransport>(spec.host, spec.port);
}

ExternalPredictor::ExternalPredictor(TransportSpec spec) : spec_(std::move(spec)) {
  std::chrono::milliseconds delay = spec_.backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      connect();
      return;
    } catch (const TransportError&) {
      if (attempt >= spec_.retries) throw;
    }
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

ExternalPredictor::~ExternalPredictor() {
  std::lock_guard lock(mutex_);
  if (transport_) {
    try {
      transport_->send_line(wire::bye_request());
    } catch (const Error&) {
    }
  }
}

void ExternalPredictor::connect() const {
  transport_.reset();
  auto t = open_transport(spec_);
  t->send_line(wire::hello_request());
  const wire::Hello hello = wire::parse_hello(t->read_line(spec_.timeout));
  if (hello_.classes != 0 &&
      (hello.classes != hello_.classes || hello.input != hello_.input)) {
    throw ProtocolError("predictor changed its hello across reconnects");
  }
  hello_ = hello;
  transport_ = std::move(t);
}

std::string ExternalPredictor::id() const {
  return spec_.kind == TransportSpec::Kind::Subprocess
             ? "cmd:" + spec_.command
             : "tcp:" + spec_.host + ":" + std::to_string(spec_.port);
}

ProbRows ExternalPredictor::predict(std::span<const ImageTensor> xs) const {
  if (xs.empty()) return {};
  std::lock_guard lock(mutex_);
  std::chrono::milliseconds delay = spec_.backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      if (!transport_) connect();
      const std::uint64_t id = next_id_++;
      transport_->send_line(wire::predict_request(id, xs));
      return wire::parse_predict_response(transport_->read_line(spec_.timeout), id, xs.size(),
                                          hello_.classes);
    } catch (const TransportError& e) {
      transport_.reset();
      if (attempt >= spec_.retries) {
        throw TransportError(std::string(e.what()) + " (after " +
                             std::to_string(spec_.retries) + " retries)");
      }
    }
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

PredictorHandle connect_external(const TransportSpec& spec) {
  return PredictorHandle(std::make_shared<ExternalPredictor>(spec));
}

}  // namespace iaside

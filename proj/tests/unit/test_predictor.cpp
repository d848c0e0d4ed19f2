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

#include <unistd.h>

#include <chrono>
#include <cstring>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "json.hpp"

#include "iaside/atomic_file.hpp"
#include "iaside/error.hpp"
#include "iaside/external.hpp"
#include "iaside/filtering.hpp"
#include "iaside/prediction_cache.hpp"
#include "iaside/random.hpp"
#include "iaside/synthetic.hpp"
#include "iaside/toys.hpp"
#include "iaside/wire.hpp"

#include "fixture_model.hpp"
#include "tcp_server.hpp"
#include "test_models.hpp"

using namespace iaside;
namespace fs = std::filesystem;

namespace {

std::string fixture_cmd(const std::string& args = "") {
  return std::string("cmd:") + FIXTURE_PREDICTOR + (args.empty() ? "" : " " + args);
}

TransportSpec quick(TransportSpec s, int retries = 2, int timeout_ms = 2000) {
  s.retries = retries;
  s.timeout = std::chrono::milliseconds(timeout_ms);
  s.backoff = std::chrono::milliseconds(10);
  return s;
}

std::vector<ImageTensor> images(std::size_t n, Shape s, std::uint64_t seed) {
  std::vector<ImageTensor> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> px(s.size());
    for (double& p : px) p = u(rng);
    out.emplace_back(s, std::move(px));
  }
  return out;
}

ProbRow expected_row(const ImageTensor& x, std::size_t classes) {
  std::vector<float> f(x.data().begin(), x.data().end());
  return fixture::scores(f.data(), f.size(), classes);
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() /
                     ("iaside_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

class FixedPredictor final : public Predictor {
 public:
  explicit FixedPredictor(ProbRow row, std::size_t max_batch = 0) : row_(std::move(row)), max_batch_(max_batch) {}
  std::string id() const override { return "test:fixed"; }
  std::size_t num_classes() const override { return row_.size(); }
  Shape input_shape() const override { return {1, 4, 4}; }
  std::size_t max_batch() const override { return max_batch_; }
  ProbRows predict(std::span<const ImageTensor> xs) const override {
    if (max_batch_) CHECK(xs.size() <= max_batch_);
    return ProbRows(xs.size(), row_);
  }

 private:
  ProbRow row_;
  std::size_t max_batch_;
};

}  // namespace

TEST_CASE("row validation") {
  CHECK_NOTHROW(validate_row({0.25, 0.75}, 2));
  CHECK_NOTHROW(validate_row({0.25, 0.75 + 5e-5}, 2));
  CHECK_THROWS_AS(validate_row({0.25, 0.65}, 2), ProtocolError);
  CHECK_THROWS_AS(validate_row({0.5, 0.5}, 3), ProtocolError);
  CHECK_THROWS_AS(validate_row({-0.5, 1.5}, 2), ProtocolError);
  CHECK_THROWS_AS(validate_row({NAN, 1.0}, 2), ProtocolError);
}

TEST_CASE("predictor handle batching and shape checks") {
  const PredictorHandle h(std::make_shared<FixedPredictor>(ProbRow{0.1, 0.9}, 3));
  CHECK(h.batch_size() == 3);
  const auto xs = images(7, {1, 4, 4}, 1);
  const auto rows = h.predict_batch(xs);
  CHECK(rows.size() == 7);
  CHECK(h.predict_batch({}).empty());
  CHECK_THROWS_AS(h.predict_batch(images(1, {1, 4, 6}, 2)), InvalidInputError);
  CHECK_THROWS_AS(h.predict_batch(images(1, {3, 4, 4}, 2)), InvalidInputError);
  CHECK(PredictorHandle(std::make_shared<FixedPredictor>(ProbRow{1.0})).batch_size() == 32);
  CHECK_THROWS_AS(PredictorHandle(nullptr), ConfigurationError);
}

TEST_CASE("dataset validation names the item") {
  auto ds = testing_models::random_dataset(3, 2, {1, 4, 4}, 3);
  CHECK_NOTHROW(ds.validate());
  ds.items[1].label = {0.6, 0.3};
  try {
    ds.validate();
    FAIL("expected an error");
  } catch (const InvalidInputError& e) {
    CHECK(std::string(e.what()).find("item 1") != std::string::npos);
  }
  ds.items[1].label = {0.5, 0.5};
  ds.items[2].image = ImageTensor(Shape{1, 4, 6});
  CHECK_THROWS_AS(ds.validate(), InvalidInputError);
  CHECK(one_hot(1, 3) == std::vector<double>{0.0, 1.0, 0.0});
  CHECK_THROWS_AS(one_hot(3, 3), InvalidInputError);
  const std::vector<std::size_t> pick{2, 0};
  auto sub = testing_models::random_dataset(3, 2, {1, 4, 4}, 3).subset(pick);
  CHECK(sub.size() == 2);
}

TEST_CASE("uniform and Bayes toys") {
  const auto ds = testing_models::random_dataset(4, 5, {1, 8, 8}, 4, true);
  const auto u = make_toy("uniform", ds);
  for (const auto& row : u.predict_batch(ds.images())) {
    for (double p : row) CHECK(p == 0.2);
  }
  const auto b = make_toy("bayes", ds);
  const auto rows = b.predict_batch(ds.images());
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(rows[i] == ds.items[i].label);
  const auto other = b.predict_batch(images(1, {1, 8, 8}, 99));
  for (double p : other[0]) CHECK(p == doctest::Approx(0.2));
  CHECK_THROWS_AS(make_toy("oracle", ds), ConfigurationError);
  CHECK_THROWS_AS(make_toy("band:9", ds), ConfigurationError);
  CHECK_THROWS_AS(make_toy("band:0:temp=0", ds), ConfigurationError);
  CHECK_THROWS_AS(make_toy("band:0:speed=3", ds), ConfigurationError);
}

TEST_CASE("band classifier is blind outside its bands and knows its templates") {
  SyntheticSpec s;
  s.items = 40;
  s.classes = 4;
  s.shape = {1, 32, 32};
  const auto ds = synthetic_dataset(s);
  const auto q = make_toy("band:0,1", ds);
  const auto part = band_partition(8, PartitionScheme::LInf, 32, 32);
  const auto active = Coalition::of(8, {0, 1});
  const auto xs = ds.images();
  const auto direct = q.predict_batch(xs);
  const auto filtered = q.predict_batch(coalition_filter_set(xs, active, part, ZerosBaseline{}));
  const auto noisy = q.predict_batch(
      coalition_filter_set(xs, active, part, ComplexGaussianBaseline{0.0, 5.0, 1}));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(direct[i] == filtered[i]);
    CHECK(direct[i] == noisy[i]);
  }
  const auto templates = class_mean_templates(ds);
  const auto trows = q.predict_batch(templates);
  for (std::size_t k = 0; k < templates.size(); ++k) {
    CHECK(std::max_element(trows[k].begin(), trows[k].end()) - trows[k].begin() ==
          static_cast<long>(k));
  }
  const auto l2 = make_toy("band:0:bands=4:partition=l2:temp=0.5", ds);
  CHECK(l2.id().find("l2") != std::string::npos);
}

TEST_CASE("base64") {
  const std::vector<std::uint8_t> bytes{0, 1, 2, 250, 251, 252, 253};
  for (std::size_t n = 0; n <= bytes.size(); ++n) {
    const std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<long>(n));
    CHECK(wire::base64_decode(wire::base64_encode(part)) == part);
  }
  const std::string hello = "hello";
  CHECK(wire::base64_encode({reinterpret_cast<const std::uint8_t*>(hello.data()), hello.size()}) ==
        "aGVsbG8=");
  CHECK_THROWS_AS(wire::base64_decode("a$=="), ProtocolError);
  CHECK_THROWS_AS(wire::base64_decode("abc"), ProtocolError);
}

TEST_CASE("wire messages") {
  using nlohmann::json;
  const auto xs = images(2, {3, 4, 5}, 5);
  const std::string line = wire::predict_request(17, xs);
  CHECK(line.find('\n') == std::string::npos);
  const json j = json::parse(line);
  CHECK(j["op"] == "predict");
  CHECK(j["id"] == 17);
  CHECK(j["shape"] == json::array({2, 3, 4, 5}));
  CHECK(j["dtype"] == "f32");
  const auto req = wire::parse_predict_request(line);
  CHECK(req.id == 17);
  CHECK(req.n == 2);
  REQUIRE(req.data.size() == 120);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 60; ++k) {
      CHECK(req.data[i * 60 + k] == static_cast<float>(xs[i].data()[k]));
    }
  }
  // Little-endian layout of the first value.
  const auto raw = wire::base64_decode(j["data"].get<std::string>());
  const float first = static_cast<float>(xs[0].data()[0]);
  std::uint32_t bits;
  std::memcpy(&bits, &first, 4);
  CHECK(raw[0] == (bits & 0xff));
  CHECK(raw[3] == (bits >> 24));

  const auto h = wire::parse_hello(R"({"op":"hello","classes":4,"input":{"c":3,"h":32,"w":32},"max_batch":8,"extra":1})");
  CHECK(h.classes == 4);
  CHECK(h.input == Shape{3, 32, 32});
  CHECK(h.max_batch == 8);
  CHECK_THROWS_AS(wire::parse_hello(R"({"op":"hello","input":{"c":3,"h":32,"w":32}})"), ProtocolError);
  CHECK_THROWS_AS(wire::parse_hello("not json"), ProtocolError);
  CHECK(json::parse(wire::hello_request())["op"] == "hello");
  CHECK(json::parse(wire::bye_request())["op"] == "bye");

  const auto rows = wire::parse_predict_response(
      R"({"op":"predict","id":3,"probs":[[0.25,0.75],[1,0]]})", 3, 2, 2);
  CHECK(rows[0] == ProbRow{0.25, 0.75});
  CHECK_THROWS_AS(wire::parse_predict_response(R"({"op":"predict","id":4,"probs":[[0.25,0.75]]})", 3, 1, 2),
                  ProtocolError);
  CHECK_THROWS_AS(wire::parse_predict_response(R"({"op":"predict","id":3,"probs":[[0.25,0.75]]})", 3, 2, 2),
                  ProtocolError);
  try {
    wire::parse_predict_response(R"({"op":"error","id":3,"message":"bad input"})", 3, 1, 2);
    FAIL("expected an error");
  } catch (const ProtocolError& e) {
    CHECK(std::string(e.what()).find("bad input") != std::string::npos);
  }
}

TEST_CASE("transport specs") {
  const auto c = parse_transport_spec("cmd:python3 serve.py --stdio");
  CHECK(c.kind == TransportSpec::Kind::Subprocess);
  CHECK(c.command == "python3 serve.py --stdio");
  CHECK(c.timeout == std::chrono::seconds(30));
  CHECK(c.retries == 2);
  const auto t = parse_transport_spec("tcp:localhost:9000");
  CHECK(t.kind == TransportSpec::Kind::Tcp);
  CHECK(t.host == "localhost");
  CHECK(t.port == 9000);
  CHECK_THROWS_AS(parse_transport_spec("tcp:localhost"), ConfigurationError);
  CHECK_THROWS_AS(parse_transport_spec("tcp:localhost:99999"), ConfigurationError);
  CHECK_THROWS_AS(parse_transport_spec("udp:x:1"), ConfigurationError);
  CHECK_THROWS_AS(parse_transport_spec("cmd:"), ConfigurationError);
}

TEST_CASE("subprocess predictor") {
  const auto q = connect_external(quick(parse_transport_spec(fixture_cmd("--classes 4 --size 8"))));
  CHECK(q.num_classes() == 4);
  CHECK(q.input_shape() == Shape{1, 8, 8});
  const auto xs = images(5, {1, 8, 8}, 6);
  const auto rows = q.predict_batch(xs);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(rows[i] == expected_row(xs[i], 4));
  CHECK(q.predict_batch(xs) == rows);
  CHECK_THROWS_AS(q.predict_batch(images(1, {1, 8, 9}, 1)), InvalidInputError);
}

TEST_CASE("advertised max batch is honoured") {
  const auto q = connect_external(quick(parse_transport_spec(fixture_cmd("--max-batch 2"))));
  CHECK(q.batch_size() == 2);
  const auto xs = images(5, {1, 8, 8}, 7);
  CHECK(q.predict_batch(xs).size() == 5);
}

TEST_CASE("protocol faults surface as protocol errors") {
  for (const char* mode : {"badrow", "wrongid", "error"}) {
    const auto q = connect_external(quick(parse_transport_spec(fixture_cmd(std::string("--mode ") + mode))));
    CHECK_THROWS_AS(q.predict_batch(images(2, {1, 8, 8}, 8)), ProtocolError);
  }
  CHECK_THROWS_AS(connect_external(quick(parse_transport_spec("cmd:echo '{\"op\":\"hello\"}'"), 0)),
                  ProtocolError);
}

TEST_CASE("transport failures and retries") {
  CHECK_THROWS_AS(connect_external(quick(parse_transport_spec("cmd:/nonexistent/predictor"), 1)),
                  TransportError);

  const auto silent = connect_external(quick(parse_transport_spec(fixture_cmd("--mode silent")), 1, 200));
  const auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(silent.predict_batch(images(1, {1, 8, 8}, 9)), TransportError);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));

  const auto dying = connect_external(quick(parse_transport_spec(fixture_cmd("--exit-after-hello")), 2));
  try {
    dying.predict_batch(images(1, {1, 8, 8}, 9));
    FAIL("expected a transport error");
  } catch (const TransportError& e) {
    CHECK(std::string(e.what()).find("2 retries") != std::string::npos);
  }

  const fs::path dir = temp_dir("crash");
  const fs::path marker = dir / "crashed";
  const auto flaky = connect_external(
      quick(parse_transport_spec(fixture_cmd("--crash-once " + marker.string())), 2));
  const auto xs = images(2, {1, 8, 8}, 10);
  const auto rows = flaky.predict_batch(xs);
  CHECK(fs::exists(marker));
  CHECK(rows[1] == expected_row(xs[1], 3));
  fs::remove_all(dir);
}

TEST_CASE("tcp predictor") {
  fixture::TcpServer server(fixture::Behavior{2, 3, 6, 0, "normal"});
  const auto q = connect_external(
      quick(parse_transport_spec("tcp:127.0.0.1:" + std::to_string(server.port()))));
  CHECK(q.num_classes() == 2);
  CHECK(q.input_shape() == Shape{3, 6, 6});
  const auto xs = images(3, {3, 6, 6}, 11);
  const auto rows = q.predict_batch(xs);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rows[i] == expected_row(xs[i], 2));
}

TEST_CASE("tcp predictor reconnects after a dropped connection") {
  fixture::TcpServer server(fixture::Behavior{}, true);
  const auto q = connect_external(
      quick(parse_transport_spec("tcp:127.0.0.1:" + std::to_string(server.port()))));
  const auto xs = images(1, {1, 8, 8}, 12);
  CHECK(q.predict_batch(xs)[0] == expected_row(xs[0], 3));
  CHECK(server.connections() == 2);
}

TEST_CASE("tcp connection refused") {
  int port;
  {
    fixture::TcpServer probe(fixture::Behavior{});
    port = probe.port();
  }
  CHECK_THROWS_AS(connect_external(quick(parse_transport_spec("tcp:127.0.0.1:" + std::to_string(port)), 1)),
                  TransportError);
}

TEST_CASE("prediction cache persistence") {
  const fs::path dir = temp_dir("cache");
  PredictionCache cache;
  const auto c = Coalition::of(4, {1});
  const auto k1 = prediction_key(1, c, "zeros", "linf:4:8x8");
  const auto k2 = prediction_key(1, c, "zeros", "l2:4:8x8");
  const auto k3 = prediction_key(2, c, "zeros", "linf:4:8x8");
  const auto k4 = prediction_key(1, Coalition::of(4, {2}), "zeros", "linf:4:8x8");
  const auto k5 = prediction_key(1, c, "cgauss", "linf:4:8x8");
  CHECK(!(k1 == k2));
  CHECK(!(k1 == k3));
  CHECK(!(k1 == k4));
  CHECK(!(k1 == k5));
  cache.insert(k1, {0.125, 0.875});
  cache.insert(k3, {1.0 / 3.0, 2.0 / 3.0});
  const fs::path file = PredictionCache::file_for(dir, "toy:band:11000000");
  CHECK(file.parent_path() == dir);
  cache.save(file);
  PredictionCache loaded;
  loaded.load(file);
  CHECK(loaded.size() == 2);
  CHECK(*loaded.lookup(k3) == ProbRow{1.0 / 3.0, 2.0 / 3.0});
  CHECK(!loaded.lookup(k2));
  PredictionCache missing;
  CHECK_NOTHROW(missing.load(dir / "nope.bin"));
  std::ofstream(dir / "junk.bin") << "garbage";
  CHECK_THROWS_AS(missing.load(dir / "junk.bin"), IoError);
  CHECK(PredictionCache::file_for(dir, "a") != PredictionCache::file_for(dir, "b"));
  fs::remove_all(dir);
}

TEST_CASE("atomic writes leave no temporary files") {
  const fs::path dir = temp_dir("atomic");
  write_file_atomic(dir / "sub" / "x.txt", "first");
  write_file_atomic(dir / "sub" / "x.txt", "second");
  std::ifstream in(dir / "sub" / "x.txt");
  std::string s;
  in >> s;
  CHECK(s == "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++files;
  CHECK(files == 1);
  fs::remove_all(dir);
}

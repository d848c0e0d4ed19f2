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

#ifndef IASIDE_RANDOM_HPP
#define IASIDE_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

#include "iaside/image.hpp"

namespace iaside {

/// Every stochastic choice in the toolkit draws from a 64-bit Mersenne
/// Twister seeded through splitmix64, with Boost.Random distributions. Both
/// are specified bit-for-bit, so results do not depend on the standard
/// library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform();                       // [0, 1)
  double normal(double mean, double stddev);
  std::uint64_t poisson(double mean);
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  bool bernoulli(double p);

  boost::random::mt19937_64& engine() { return engine_; }

 private:
  boost::random::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for the `index`-th unit of work derived from a run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// FNV-1a over raw bytes, chainable through `basis`.
std::uint64_t fnv1a(std::span<const std::byte> bytes,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(std::string_view text,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Content hash of an image: shape plus the exact bit patterns of its values.
std::uint64_t content_hash(const ImageTensor& x);

/// Fisher-Yates permutation of [0, n) driven by Rng.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

}  // namespace iaside

#endif  // IASIDE_RANDOM_HPP

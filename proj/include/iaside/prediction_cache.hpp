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

#ifndef IASIDE_PREDICTION_CACHE_HPP
#define IASIDE_PREDICTION_CACHE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "iaside/partition.hpp"
#include "iaside/predictor.hpp"

namespace iaside {

struct CacheKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept {
    return static_cast<std::size_t>(k.hi ^ (k.lo * 0x9e3779b97f4a7c15ULL));
  }
};

/// Key of the prediction on one coalition-filtered image.
CacheKey prediction_key(std::uint64_t image_hash, const Coalition& coalition,
                        const std::string& baseline_descriptor,
                        const std::string& partition_descriptor);

/// Thread-safe map from CacheKey to a predicted row. Reads run
/// concurrently; writes are serialized.
class PredictionCache {
 public:
  std::optional<ProbRow> lookup(const CacheKey& key) const;
  void insert(const CacheKey& key, ProbRow row);
  std::size_t size() const;

  /// Merges entries from a file written by save(); a missing file is not an
  /// error.
  void load(const std::filesystem::path& path);
  /// Writes all entries atomically.
  void save(const std::filesystem::path& path) const;

  /// Per-model cache file inside `dir`.
  static std::filesystem::path file_for(const std::filesystem::path& dir,
                                        const std::string& model_id);

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<CacheKey, ProbRow, CacheKeyHash> rows_;
};

}  // namespace iaside

#endif  // IASIDE_PREDICTION_CACHE_HPP

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

#include "iaside/prediction_cache.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <mutex>
#include <sstream>

#include "iaside/atomic_file.hpp"
#include "iaside/error.hpp"
#include "iaside/random.hpp"

namespace iaside {
namespace {

constexpr char kMagic[4] = {'I', 'A', 'S', 'C'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw IoError("prediction cache file is truncated");
  T value;
  std::memcpy(&value, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

}  // namespace

CacheKey prediction_key(std::uint64_t image_hash, const Coalition& coalition,
                        const std::string& baseline_descriptor,
                        const std::string& partition_descriptor) {
  std::string text = std::to_string(image_hash) + "|" + coalition.code() + "|" +
                     baseline_descriptor + "|" + partition_descriptor;
  const std::uint64_t a = fnv1a(text);
  const std::uint64_t b = fnv1a(text, splitmix64(0x5ca1ab1eULL));
  return {a, b};
}

std::optional<ProbRow> PredictionCache::lookup(const CacheKey& key) const {
  std::shared_lock lock(mutex_);
  auto it = rows_.find(key);
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

void PredictionCache::insert(const CacheKey& key, ProbRow row) {
  std::unique_lock lock(mutex_);
  rows_.insert_or_assign(key, std::move(row));
}

std::size_t PredictionCache::size() const {
  std::shared_lock lock(mutex_);
  return rows_.size();
}

void PredictionCache::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw IoError(path.string() + " is not a prediction cache file");
  }
  std::size_t pos = 4;
  if (take<std::uint32_t>(bytes, pos) != kVersion) {
    throw IoError(path.string() + " has an unsupported cache version");
  }
  const auto count = take<std::uint64_t>(bytes, pos);
  std::unique_lock lock(mutex_);
  for (std::uint64_t i = 0; i < count; ++i) {
    CacheKey key;
    key.hi = take<std::uint64_t>(bytes, pos);
    key.lo = take<std::uint64_t>(bytes, pos);
    const auto n = take<std::uint32_t>(bytes, pos);
    ProbRow row(n);
    for (auto& p : row) p = take<double>(bytes, pos);
    rows_.insert_or_assign(key, std::move(row));
  }
}

void PredictionCache::save(const std::filesystem::path& path) const {
  std::string out(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  std::shared_lock lock(mutex_);
  put<std::uint64_t>(out, rows_.size());
  for (const auto& [key, row] : rows_) {
    put(out, key.hi);
    put(out, key.lo);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(row.size()));
    for (double p : row) put(out, p);
  }
  lock.unlock();
  write_file_atomic(path, out);
}

std::filesystem::path PredictionCache::file_for(const std::filesystem::path& dir,
                                                const std::string& model_id) {
  std::ostringstream name;
  name << std::hex << fnv1a(model_id) << ".predcache";
  return dir / name.str();
}

}  // namespace iaside

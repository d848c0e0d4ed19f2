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

#include "iaside/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iaside/error.hpp"

namespace iaside {
namespace {

void check_columns(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInputError("correlation inputs differ in length");
  if (a.size() < 3) {
    throw InvalidInputError("correlation needs at least 3 points, got " +
                            std::to_string(a.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw InvalidInputError("correlation input " + std::to_string(i) + " is not finite");
    }
  }
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double pearson(std::span<const double> a, std::span<const double> b) {
  check_columns(a, b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw UndefinedCorrelationError("correlation undefined: a column has zero variance");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double spearman(std::span<const double> a, std::span<const double> b) {
  check_columns(a, b);
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

Correlation correlate(std::span<const RobustnessRecord> records,
                      const std::string& perturbation_id) {
  std::vector<double> s;
  std::vector<double> e;
  for (const auto& r : records) {
    auto it = r.mpe.find(perturbation_id);
    if (it == r.mpe.end()) {
      throw InvalidInputError("record " + r.model_id + " has no mPE for " + perturbation_id);
    }
    s.push_back(r.srs);
    e.push_back(it->second);
  }
  return {pearson(s, e), spearman(s, e), records.size()};
}

}  // namespace iaside

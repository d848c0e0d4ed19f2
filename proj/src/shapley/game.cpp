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

#include "iaside/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "iaside/error.hpp"

namespace iaside {

void GameTable::check_complete() const {
  if (m_bands < 1 || m_bands > 63) {
    throw InvalidInputError("game table band count out of range");
  }
  const std::size_t expected = std::size_t{1} << m_bands;
  if (values.size() != expected) {
    throw InvalidInputError("game table has " + std::to_string(values.size()) +
                            " entries; a complete table over " + std::to_string(m_bands) +
                            " players has " + std::to_string(expected));
  }
}

std::vector<double> shapley_values(const GameTable& g) {
  g.check_complete();
  const std::size_t m = g.m_bands;
  // weight[s] = 1 / (M * C(M-1, s))
  std::vector<double> weight(m);
  double binom = 1.0;
  for (std::size_t s = 0; s < m; ++s) {
    weight[s] = 1.0 / (static_cast<double>(m) * binom);
    binom = binom * static_cast<double>(m - 1 - s) / static_cast<double>(s + 1);
  }

  std::vector<double> psi(m, 0.0);
  const std::size_t n = g.values.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double acc = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (s & bit) continue;
      acc += weight[std::popcount(s)] * (g.values[s | bit] - g.values[s]);
    }
    psi[i] = acc;
  }
  return psi;
}

std::vector<double> shapley_permutation_oracle(const GameTable& g) {
  g.check_complete();
  const std::size_t m = g.m_bands;
  if (m > kMaxOracleBands) {
    throw ConfigurationError("permutation oracle supports at most " +
                             std::to_string(kMaxOracleBands) + " players");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> total(m, 0.0);
  std::size_t count = 0;
  do {
    std::size_t s = 0;
    for (std::size_t player : order) {
      const std::size_t with = s | (std::size_t{1} << player);
      total[player] += g.values[with] - g.values[s];
      s = with;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& t : total) t /= static_cast<double>(count);
  return total;
}

std::vector<double> normalize_sid(std::span<const double> psi) {
  if (psi.empty()) throw InvalidInputError("cannot normalize an empty importance vector");
  const double lo = *std::min_element(psi.begin(), psi.end());
  std::vector<double> out(psi.size());
  double l1 = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    out[i] = psi[i] - lo;
    l1 += out[i];
  }
  if (l1 == 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(psi.size()));
    return out;
  }
  for (double& v : out) v /= l1;
  return out;
}

SpectralImportance spectral_importance(const GameTable& g) {
  SpectralImportance s;
  s.raw = shapley_values(g);
  s.normalized = normalize_sid(s.raw);
  return s;
}

std::vector<double> SrsConfig::weights() const {
  std::vector<double> w(m_bands);
  double p = 1.0;
  for (auto& x : w) {
    x = p;
    p *= beta;
  }
  return w;
}

double SrsConfig::eta() const {
  const auto w = weights();
  double l1 = 0.0;
  double l2 = 0.0;
  for (double x : w) {
    l1 += x;
    l2 += x * x;
  }
  return l1 / std::sqrt(l2) / static_cast<double>(m_bands);
}

double srs(std::span<const double> sid, const SrsConfig& cfg) {
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) {
    throw InvalidInputError("beta must lie in (0, 1)");
  }
  if (cfg.m_bands < 1 || sid.size() != cfg.m_bands) {
    throw InvalidInputError("SID length " + std::to_string(sid.size()) +
                            " does not match the configured band count " +
                            std::to_string(cfg.m_bands));
  }
  double sum = 0.0;
  for (double v : sid) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInputError("SID has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidInputError("SID is not normalized (sums to " + std::to_string(sum) + ")");
  }
  if (cfg.m_bands == 1) return 0.0;  // eta == 1: every SID is the uniform one
  const auto w = cfg.weights();
  double l2 = 0.0;
  for (double x : w) l2 += x * x;
  l2 = std::sqrt(l2);
  // w^T sid / ||w||_2 - eta == w^T (sid - 1/M) / ||w||_2
  const double uniform = 1.0 / static_cast<double>(cfg.m_bands);
  double excess = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) excess += w[i] * (sid[i] - uniform);
  return std::abs(excess / l2 / (1.0 - cfg.eta()));
}

}  // namespace iaside

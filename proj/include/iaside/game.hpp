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

#ifndef IASIDE_GAME_HPP
#define IASIDE_GAME_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace iaside {

/// Largest band count for which the full 2^M table is built.
inline constexpr std::size_t kMaxTableBands = 16;
/// Largest band count accepted by the M! permutation oracle.
inline constexpr std::size_t kMaxOracleBands = 6;

/// Characteristic function of an M-player game, stored densely: values[s]
/// is v of the coalition whose member bits are s (bit i = band i).
struct GameTable {
  std::size_t m_bands = 0;
  std::vector<double> values;
  /// Expected log-likelihood on the empty coalition, subtracted from every
  /// entry so that values[0] == 0.
  double dummy_constant = 0.0;

  double grand_value() const { return values.back(); }
  /// Throws InvalidInputError unless values holds exactly 2^M entries.
  void check_complete() const;
};

/// Shapley values by the subset formula
///   psi_i = sum_{S not containing i} |S|! (M - |S| - 1)! / M! * (v(S + i) - v(S)).
std::vector<double> shapley_values(const GameTable& g);

/// Shapley values as the mean marginal contribution over all M! player
/// orderings. Independent reference for shapley_values; M <= 6.
std::vector<double> shapley_permutation_oracle(const GameTable& g);

/// (psi - min psi) / ||psi - min psi||_1. A constant vector maps to the
/// uniform distribution.
std::vector<double> normalize_sid(std::span<const double> psi);

struct SpectralImportance {
  std::vector<double> raw;
  std::vector<double> normalized;
};

SpectralImportance spectral_importance(const GameTable& g);

struct SrsConfig {
  double beta = 0.75;
  std::size_t m_bands = 8;

  /// (beta^0, ..., beta^{M-1}).
  std::vector<double> weights() const;
  /// (1 / M) ||w||_1 / ||w||_2.
  double eta() const;
};

/// Spectral robustness score |(w^T sid / ||w||_2 - eta) / (1 - eta)| of a
/// normalized SID. Throws InvalidInputError if `sid` is not non-negative
/// with unit L1 norm (within 1e-9) or its length differs from cfg.m_bands.
double srs(std::span<const double> sid, const SrsConfig& cfg);

}  // namespace iaside

#endif  // IASIDE_GAME_HPP

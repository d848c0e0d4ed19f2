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

#ifndef IASIDE_CHARACTERISTIC_HPP
#define IASIDE_CHARACTERISTIC_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "iaside/filtering.hpp"
#include "iaside/game.hpp"
#include "iaside/partition.hpp"
#include "iaside/prediction_cache.hpp"
#include "iaside/predictor.hpp"

namespace iaside {

/// Probabilities are clamped to [kProbabilityFloor, 1] before the log.
inline constexpr double kProbabilityFloor = 1e-12;

double floored_log(double p);

struct EvaluationOptions {
  /// Worker threads for coalition evaluation; 0 uses the hardware count.
  std::size_t threads = 0;
  /// Optional shared prediction cache.
  std::shared_ptr<PredictionCache> cache;
};

/// Expected label-weighted log-likelihood E_x sum_y P(y|x) log Q(y | x ⋈ c),
/// without the dummy constant.
double expected_log_likelihood(const PredictorHandle& q, const LabeledDataset& ds,
                               const Coalition& c, const BandPartition& p,
                               const AbsenceBaseline& b, const EvaluationOptions& opts = {});

/// v(c) = expected_log_likelihood(c) - expected_log_likelihood(empty).
/// v(empty) is exactly 0.
double evaluate_characteristic(const PredictorHandle& q, const LabeledDataset& ds,
                               const Coalition& c, const BandPartition& p,
                               const AbsenceBaseline& b, const EvaluationOptions& opts = {});

/// All 2^M coalition values. Each image is transformed once, then filtered
/// and predicted once per coalition. Aggregation runs in canonical order,
/// so the table does not depend on the thread count. M > 16 raises
/// ConfigurationError.
GameTable build_game_table(const PredictorHandle& q, const LabeledDataset& ds,
                           const BandPartition& p, const AbsenceBaseline& b,
                           const EvaluationOptions& opts = {});

/// Both sides of I(X ⋈ c; Y) = E KL[P || Q] + H(Y) + v(c) + C computed on
/// the empirical distribution (every item an atom of mass 1/N), in nats.
struct InfoIdentityAudit {
  double mutual_information = 0.0;
  double mean_pointwise_kl = 0.0;
  double label_entropy = 0.0;
  double v_plus_c = 0.0;
  double lhs_minus_rhs = 0.0;
};

InfoIdentityAudit info_identity_audit(const PredictorHandle& q, const LabeledDataset& ds,
                                      const Coalition& c, const BandPartition& p,
                                      const AbsenceBaseline& b,
                                      const EvaluationOptions& opts = {});

struct ConvergenceReport {
  std::vector<std::size_t> sample_counts;
  std::vector<std::vector<double>> raw_per_k;
  std::vector<std::vector<double>> sid_per_k;
  /// errors[i] = (1/M) || sid_per_k[i+1] - sid_per_k[i] ||_1
  std::vector<double> errors;
};

/// SIDs on nested prefixes of one seeded shuffle of the dataset, one per
/// entry of `sample_counts` (non-decreasing, each <= dataset size).
ConvergenceReport convergence_scan(const PredictorHandle& q, const LabeledDataset& ds,
                                   const BandPartition& p, const AbsenceBaseline& b,
                                   std::span<const std::size_t> sample_counts,
                                   std::uint64_t seed, const EvaluationOptions& opts = {});

}  // namespace iaside

#endif  // IASIDE_CHARACTERISTIC_HPP

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

#ifndef IASIDE_CORRELATE_HPP
#define IASIDE_CORRELATE_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "iaside/game.hpp"

namespace iaside {

/// Robustness measurements of one model.
struct RobustnessRecord {
  std::string model_id;
  double srs = 0.0;
  /// Mean prediction error keyed by perturbation id.
  std::map<std::string, double> mpe;
  SpectralImportance sid;
};

struct Correlation {
  double pearson = 0.0;
  double spearman = 0.0;
  std::size_t n = 0;
};

double pearson(std::span<const double> a, std::span<const double> b);
/// Pearson correlation of average ranks (ties share their mean rank).
double spearman(std::span<const double> a, std::span<const double> b);

/// Correlation between SRS and mPE under `perturbation_id` across records.
/// Fewer than 3 records raises InvalidInputError; a constant SRS or mPE
/// column raises UndefinedCorrelationError.
Correlation correlate(std::span<const RobustnessRecord> records,
                      const std::string& perturbation_id);

}  // namespace iaside

#endif  // IASIDE_CORRELATE_HPP

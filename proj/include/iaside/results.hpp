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

#ifndef IASIDE_RESULTS_HPP
#define IASIDE_RESULTS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iaside/characteristic.hpp"
#include "iaside/correlate.hpp"
#include "iaside/game.hpp"
#include "iaside/partition.hpp"
#include "iaside/perturb.hpp"

namespace iaside {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command;
  std::string model;
  std::string dataset;
  std::size_t bands = 8;
  std::size_t samples = 200;
  /// zeros | cgauss[:mu=..,sigma=..] | replace
  std::string baseline = "zeros";
  PartitionScheme partition = PartitionScheme::LInf;
  double beta = 0.75;
  std::uint64_t seed = 0;
  /// 0 uses the hardware count.
  std::size_t threads = 0;
  std::vector<std::string> perturbations;
  std::size_t radii = 16;
  std::vector<std::size_t> sample_counts{25, 50, 100, 200};
  std::vector<std::string> inputs;

  /// Throws ConfigurationError unless 1 <= bands <= 16, samples >= 1 and
  /// 0 < beta < 1.
  void validate() const;
};

struct SnrCurve {
  std::string perturbation;
  std::vector<SnrProfilePoint> points;
};

/// A record whose srs is NaN carries mPE only.
struct ResultsDocument {
  RunConfig config;
  std::optional<SpectralImportance> sid;
  std::optional<double> srs;
  std::optional<GameTable> v_table;
  std::optional<ConvergenceReport> convergence;
  std::optional<std::vector<RobustnessRecord>> records;
  std::map<std::string, Correlation> correlations;
  std::vector<SnrCurve> snr;
  std::string tool_version = kToolVersion;
  std::string timestamp;
};

/// Fixed key order; numbers in shortest round-trip form; infinities as the
/// strings "inf" / "-inf".
std::string to_json(const ResultsDocument& doc);
/// The document without tool version and timestamp: everything that must
/// be reproduced by an identical run.
std::string numeric_payload(const ResultsDocument& doc);
ResultsDocument parse_results(const std::string& text);

ResultsDocument read_results(const std::filesystem::path& path);
/// Atomic: the target is either untouched or the complete new document.
void write_results(const std::filesystem::path& path, const ResultsDocument& doc);

/// UTC, ISO 8601 with seconds.
std::string utc_timestamp();

}  // namespace iaside

#endif  // IASIDE_RESULTS_HPP

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

#ifndef IASIDE_RUN_HPP
#define IASIDE_RUN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "iaside/filtering.hpp"
#include "iaside/predictor.hpp"
#include "iaside/results.hpp"

namespace iaside {

/// `toy:<spec>` (see make_toy), `cmd:<shell command>` or `tcp:<host>:<port>`.
/// Toy models derive their templates from `ds`.
PredictorHandle open_model(const std::string& spec, const LabeledDataset& ds);

/// `zeros`, `cgauss[:mu=M][:sigma=S]` or `replace` (donors drawn from `ds`).
AbsenceBaseline parse_baseline(const std::string& spec, std::uint64_t seed,
                               const LabeledDataset& ds);

/// The first `k` items of a seeded shuffle, kept in manifest order. All
/// items when k >= ds.size().
LabeledDataset select_samples(const LabeledDataset& ds, std::size_t k, std::uint64_t seed);

/// Each run validates `cfg`, loads what it needs and returns the document
/// with the effective configuration echoed. With IASIDE_CACHE_DIR set,
/// predictions on filtered images are cached per model across runs.
ResultsDocument run_sid(RunConfig cfg);
ResultsDocument run_srs(RunConfig cfg, const ResultsDocument& sid_doc);
ResultsDocument run_snr(RunConfig cfg);
ResultsDocument run_mpe(RunConfig cfg);
ResultsDocument run_converge(RunConfig cfg);
/// Merges records (by model) from SID and mPE documents and correlates SRS
/// with mPE for every perturbation all models share, or for
/// cfg.perturbations when given.
ResultsDocument run_report(RunConfig cfg, std::span<const ResultsDocument> inputs);

}  // namespace iaside

#endif  // IASIDE_RUN_HPP

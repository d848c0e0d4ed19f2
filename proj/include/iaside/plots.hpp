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

#ifndef IASIDE_PLOTS_HPP
#define IASIDE_PLOTS_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "iaside/correlate.hpp"
#include "iaside/results.hpp"

namespace iaside {

/// SVG bar chart with one bar per band, heights = normalized SID.
std::string sid_bar_chart(const SpectralImportance& sid, const std::string& title);

/// SVG scatter of SRS against mPE, one point per record, with the
/// correlation coefficients in the caption.
std::string srs_mpe_scatter(std::span<const RobustnessRecord> records,
                            const std::string& perturbation, const Correlation& corr);

/// Writes `sid.svg` when the document has a SID (otherwise one
/// `sid_<model>.svg` per record carrying a SID), and one
/// `scatter_<perturbation>.svg` per correlation. Output is a pure function of the
/// document. A document with nothing to plot, or with an empty record list,
/// raises ConfigurationError.
std::vector<std::filesystem::path> emit_plots(const ResultsDocument& doc,
                                              const std::filesystem::path& dir);

}  // namespace iaside

#endif  // IASIDE_PLOTS_HPP

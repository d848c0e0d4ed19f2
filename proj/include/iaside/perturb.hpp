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

#ifndef IASIDE_PERTURB_HPP
#define IASIDE_PERTURB_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iaside/image.hpp"
#include "iaside/predictor.hpp"

namespace iaside {

struct WhiteNoise {
  double sigma = 0.1;
};

/// k x k separable Gaussian kernel, replicated borders.
struct GaussianBlur {
  std::size_t kernel = 3;
  double sigma = 0.8;
};

/// Each value independently becomes 0 or 1 with probability p / 2 each.
struct SaltPepper {
  double p = 0.05;
};

/// x* = Poisson(x * scale) / scale per value.
struct PoissonNoise {
  double scale = 255.0;
};

struct PerturbationSpec {
  std::variant<WhiteNoise, GaussianBlur, SaltPepper, PoissonNoise> variant;
  /// When set, the perturbation is rescaled so ||dx||^2 = rho ||x||^2.
  std::optional<double> energy_ratio;

  /// Canonical text form, parseable by parse_perturbation.
  std::string id() const;
};

/// Parses `white:sigma=0.1`, `blur:k=3,sigma=1.0`, `saltpepper:p=0.05`,
/// `poisson:scale=255`, each optionally followed by `,rho=0.1`. Omitted
/// parameters take the defaults above; a blur without sigma uses
/// 0.3 ((k - 1) / 2 - 1) + 0.8.
PerturbationSpec parse_perturbation(const std::string& text);

struct Perturbed {
  ImageTensor image;  // x* = x + dx
  ImageTensor delta;  // dx
};

/// Deterministic given `seed`. Blur with an even kernel, or an energy ratio
/// requested for a perturbation with no energy, raises InvalidInputError.
Perturbed apply_perturbation(const ImageTensor& x, const PerturbationSpec& spec,
                             std::uint64_t seed);

/// Seed used for a dataset item; depends only on the run seed and the image
/// content, never on the item's position.
std::uint64_t item_seed(std::uint64_t seed, const ImageTensor& x);

/// Mean prediction error E_x sum_y P(y|x) |Q(y|x) - Q(y|x*)|.
double mpe(const PredictorHandle& q, const LabeledDataset& ds, const PerturbationSpec& spec,
           std::uint64_t seed);

/// Mean prediction error on the perturbed counterparts shipped with the
/// dataset. Every item must carry one.
double mpe_pairs(const PredictorHandle& q, const LabeledDataset& ds);

struct SnrProfilePoint {
  double radius = 0.0;
  double snr = 0.0;
  double snr_db = 0.0;
};

/// Dataset-level spectral SNR: per-bin ESDs of the clean images and of the
/// perturbations are averaged over the dataset first, then divided.
std::vector<SnrProfilePoint> snr_profile(const LabeledDataset& ds, const PerturbationSpec& spec,
                                         std::size_t n_radii, std::uint64_t seed);

}  // namespace iaside

#endif  // IASIDE_PERTURB_HPP

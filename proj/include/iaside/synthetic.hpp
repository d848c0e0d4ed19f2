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

#ifndef IASIDE_SYNTHETIC_HPP
#define IASIDE_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>

#include "iaside/image.hpp"
#include "iaside/predictor.hpp"
#include "iaside/random.hpp"

namespace iaside {

/// Random image whose power spectrum falls off as 1 / f^exponent, affinely
/// mapped onto [0, 1].
ImageTensor power_law_image(const Shape& shape, Rng& rng, double exponent = 2.0);

struct SyntheticSpec {
  std::size_t items = 100;
  std::size_t classes = 4;
  Shape shape{1, 64, 64};
  /// Weight of the class prototype in every item; the rest is a fresh
  /// power-law image.
  double mix = 0.5;
  double exponent = 2.0;
  std::uint64_t seed = 0;
};

/// Hard-labeled dataset: item i has class i mod classes and image
/// mix * prototype[class] + (1 - mix) * power_law_image.
LabeledDataset synthetic_dataset(const SyntheticSpec& spec);

}  // namespace iaside

#endif  // IASIDE_SYNTHETIC_HPP

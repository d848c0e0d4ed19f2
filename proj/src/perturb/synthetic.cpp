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

#include "iaside/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "iaside/error.hpp"
#include "iaside/fourier.hpp"

namespace iaside {

ImageTensor power_law_image(const Shape& shape, Rng& rng, double exponent) {
  validate_shape(shape);
  ImageTensor noise(shape);
  for (double& v : noise.data()) v = rng.normal(0.0, 1.0);
  Spectrum s = dft2(noise);
  const double ch = static_cast<double>(shape.height / 2);
  const double cw = static_cast<double>(shape.width / 2);
  for (std::size_t c = 0; c < shape.channels; ++c) {
    for (std::size_t u = 0; u < shape.height; ++u) {
      for (std::size_t v = 0; v < shape.width; ++v) {
        const double du = static_cast<double>(u) - ch;
        const double dv = static_cast<double>(v) - cw;
        const double f = std::sqrt(du * du + dv * dv);
        s.at(c, u, v) *= f == 0.0 ? 0.0 : std::pow(f, -0.5 * exponent);
      }
    }
  }
  ImageTensor z = idft2(s);
  const auto [lo, hi] = std::minmax_element(z.data().begin(), z.data().end());
  const double a = *lo;
  const double span = *hi - *lo;
  for (double& v : z.data()) v = span > 0.0 ? (v - a) / span : 0.5;
  return z;
}

LabeledDataset synthetic_dataset(const SyntheticSpec& spec) {
  if (spec.classes < 2) throw InvalidInputError("synthetic dataset needs at least 2 classes");
  if (!(spec.mix >= 0.0 && spec.mix <= 1.0)) {
    throw InvalidInputError("synthetic mix must lie in [0, 1]");
  }
  Rng rng(spec.seed);
  std::vector<ImageTensor> prototypes;
  for (std::size_t k = 0; k < spec.classes; ++k) {
    prototypes.push_back(power_law_image(spec.shape, rng, spec.exponent));
  }
  LabeledDataset ds;
  for (std::size_t k = 0; k < spec.classes; ++k) ds.class_names.push_back("class" + std::to_string(k));
  for (std::size_t i = 0; i < spec.items; ++i) {
    const std::size_t k = i % spec.classes;
    ImageTensor x = power_law_image(spec.shape, rng, spec.exponent);
    const auto p = prototypes[k].data();
    for (std::size_t j = 0; j < x.data().size(); ++j) {
      x.data()[j] = spec.mix * p[j] + (1.0 - spec.mix) * x.data()[j];
    }
    LabeledItem item;
    item.image = std::move(x);
    item.label = one_hot(k, spec.classes);
    item.source = "synthetic:" + std::to_string(i);
    ds.items.push_back(std::move(item));
  }
  return ds;
}

}  // namespace iaside

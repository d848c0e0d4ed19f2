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

#ifndef IASIDE_TESTS_TEST_MODELS_HPP
#define IASIDE_TESTS_TEST_MODELS_HPP

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "iaside/predictor.hpp"
#include "iaside/random.hpp"

namespace testing_models {

/// Arbitrary but deterministic classifier: the row for an image is a
/// softmax of Gaussian logits seeded by the image content.
class HashedRandomPredictor final : public iaside::Predictor {
 public:
  HashedRandomPredictor(std::size_t classes, std::uint64_t seed, double scale = 2.0)
      : classes_(classes), seed_(seed), scale_(scale) {}
  std::string id() const override { return "test:hashed:" + std::to_string(seed_); }
  std::size_t num_classes() const override { return classes_; }
  iaside::Shape input_shape() const override { return {}; }
  iaside::ProbRows predict(std::span<const iaside::ImageTensor> xs) const override {
    iaside::ProbRows rows;
    for (const auto& x : xs) {
      std::mt19937_64 rng(iaside::content_hash(x) ^ seed_);
      std::normal_distribution<double> n(0.0, scale_);
      std::vector<double> row(classes_);
      double z = 0.0;
      for (double& r : row) {
        r = std::exp(n(rng));
        z += r;
      }
      for (double& r : row) r /= z;
      rows.push_back(std::move(row));
    }
    return rows;
  }

 private:
  std::size_t classes_;
  std::uint64_t seed_;
  double scale_;
};

/// Small dataset of uniform-noise images with random soft (or hard) labels.
inline iaside::LabeledDataset random_dataset(std::size_t items, std::size_t classes,
                                             iaside::Shape shape, std::uint64_t seed,
                                             bool hard = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  iaside::LabeledDataset ds;
  for (std::size_t k = 0; k < classes; ++k) ds.class_names.push_back("c" + std::to_string(k));
  for (std::size_t i = 0; i < items; ++i) {
    std::vector<double> px(shape.size());
    for (double& p : px) p = u(rng);
    iaside::LabeledItem item;
    item.image = iaside::ImageTensor(shape, std::move(px));
    if (hard) {
      item.label = iaside::one_hot(static_cast<std::size_t>(u(rng) * classes) % classes, classes);
    } else {
      std::vector<double> l(classes);
      double z = 0.0;
      for (double& p : l) {
        p = -std::log(1.0 - u(rng));
        z += p;
      }
      for (double& p : l) p /= z;
      item.label = std::move(l);
    }
    ds.items.push_back(std::move(item));
  }
  return ds;
}

}  // namespace testing_models

#endif  // IASIDE_TESTS_TEST_MODELS_HPP

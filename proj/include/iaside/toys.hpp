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

#ifndef IASIDE_TOYS_HPP
#define IASIDE_TOYS_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "iaside/filtering.hpp"
#include "iaside/partition.hpp"
#include "iaside/predictor.hpp"

namespace iaside {

/// Emits 1 / |Y| for every class on every input: a decision that ignores
/// the image entirely.
class UniformPredictor final : public Predictor {
 public:
  UniformPredictor(std::size_t num_classes, Shape input_shape = {});

  std::string id() const override;
  std::size_t num_classes() const override { return classes_; }
  Shape input_shape() const override { return shape_; }
  ProbRows predict(std::span<const ImageTensor> xs) const override;

 private:
  std::size_t classes_;
  Shape shape_;
};

/// Predicts the dataset's own label distribution P(y | x) for images that
/// are (bit-identical) members of the dataset, and the uniform row for
/// anything else.
class BayesExactPredictor final : public Predictor {
 public:
  explicit BayesExactPredictor(const LabeledDataset& ds);

  std::string id() const override { return id_; }
  std::size_t num_classes() const override { return classes_; }
  Shape input_shape() const override { return shape_; }
  ProbRows predict(std::span<const ImageTensor> xs) const override;

 private:
  std::size_t classes_;
  Shape shape_;
  std::string id_;
  std::unordered_map<std::uint64_t, ProbRow> rows_;
};

/// Nearest-template classifier that only sees the `active` bands:
///   Q(y | x) = softmax_y( -|| x ⋈ A - t_y ⋈ A ||_2 / temperature ).
/// The distance is measured in the frequency domain over the active points
/// only, so the output is a function of the active-band content of x.
class ToyBandClassifier final : public Predictor {
 public:
  ToyBandClassifier(Coalition active, BandPartition partition,
                    std::vector<ImageTensor> templates, double temperature = 1.0);

  std::string id() const override { return id_; }
  std::size_t num_classes() const override { return templates_.size(); }
  Shape input_shape() const override { return shape_; }
  ProbRows predict(std::span<const ImageTensor> xs) const override;

  const Coalition& active_bands() const { return active_; }
  const BandPartition& partition() const { return partition_; }
  double temperature() const { return temperature_; }

 private:
  ProbRow predict_one(const ImageTensor& x) const;

  Coalition active_;
  BandPartition partition_;
  std::vector<ImageTensor> templates_;
  double temperature_;
  Shape shape_;
  std::vector<std::size_t> active_points_;
  std::vector<std::vector<Complex>> template_coeffs_;  // per class, active points x channels
  std::string id_;
};

/// Per-class mean image of a dataset, weighting each item by P(y | x).
std::vector<ImageTensor> class_mean_templates(const LabeledDataset& ds);

/// Builds a toy predictor from a text spec:
///   "uniform"                          UniformPredictor over ds classes
///   "bayes"                            BayesExactPredictor over ds
///   "band:0,1[:temp=T][:bands=M][:partition=linf|l2]"
///                                      ToyBandClassifier with class-mean
///                                      templates of ds
/// Unknown specs raise ConfigurationError.
PredictorHandle make_toy(const std::string& spec, const LabeledDataset& ds);

}  // namespace iaside

#endif  // IASIDE_TOYS_HPP

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

#ifndef IASIDE_PREDICTOR_HPP
#define IASIDE_PREDICTOR_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iaside/image.hpp"

namespace iaside {

using ProbRow = std::vector<double>;
using ProbRows = std::vector<ProbRow>;

/// Tolerance on the sum of a predicted probability row.
inline constexpr double kRowSumTolerance = 1e-4;
/// Tolerance on the sum of a label distribution.
inline constexpr double kLabelSumTolerance = 1e-9;

/// A frozen classifier Q(y | x). Implementations must be safe to call from
/// several threads at once.
class Predictor {
 public:
  virtual ~Predictor() = default;

  /// Stable identifier; part of on-disk cache keys.
  virtual std::string id() const = 0;
  virtual std::size_t num_classes() const = 0;
  /// Expected input shape. Zero fields accept any size.
  virtual Shape input_shape() const = 0;
  /// Largest batch the predictor accepts in one call; 0 means unlimited.
  virtual std::size_t max_batch() const { return 0; }
  virtual ProbRows predict(std::span<const ImageTensor> xs) const = 0;
};

/// Shared, batched facade over a Predictor. Inputs are checked against the
/// advertised shape and every returned row is validated.
class PredictorHandle {
 public:
  static constexpr std::size_t kDefaultBatchSize = 32;

  explicit PredictorHandle(std::shared_ptr<const Predictor> impl,
                           std::size_t batch_size = kDefaultBatchSize);

  const Predictor& predictor() const { return *impl_; }
  std::string id() const { return impl_->id(); }
  std::size_t num_classes() const { return impl_->num_classes(); }
  Shape input_shape() const { return impl_->input_shape(); }
  std::size_t batch_size() const { return batch_size_; }

  ProbRows predict_batch(std::span<const ImageTensor> xs) const;

 private:
  std::shared_ptr<const Predictor> impl_;
  std::size_t batch_size_;
};

/// Throws ProtocolError unless `row` is a distribution over `classes`
/// entries within kRowSumTolerance.
void validate_row(const ProbRow& row, std::size_t classes);

/// Throws InvalidInputError unless `x` fits `expected` (zero fields match
/// anything).
void check_input_shape(const ImageTensor& x, const Shape& expected);

struct LabeledItem {
  ImageTensor image;
  /// P(y | x); hard labels are one-hot.
  std::vector<double> label;
  /// Pre-computed perturbed counterpart, when the dataset ships pairs.
  std::optional<ImageTensor> perturbed;
  /// Where the item came from (file name), for diagnostics.
  std::string source;
};

struct LabeledDataset {
  std::vector<LabeledItem> items;
  std::vector<std::string> class_names;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  std::size_t num_classes() const { return class_names.size(); }

  std::vector<ImageTensor> images() const;
  /// Items at the given positions, in that order.
  LabeledDataset subset(std::span<const std::size_t> indices) const;
  /// Throws InvalidInputError naming the first malformed item.
  void validate() const;
};

std::vector<double> one_hot(std::size_t label, std::size_t classes);

}  // namespace iaside

#endif  // IASIDE_PREDICTOR_HPP

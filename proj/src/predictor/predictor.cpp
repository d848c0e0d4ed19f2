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

#include "iaside/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "iaside/error.hpp"

namespace iaside {

void validate_row(const ProbRow& row, std::size_t classes) {
  if (row.size() != classes) {
    throw ProtocolError("prediction row has " + std::to_string(row.size()) +
                        " entries, expected " + std::to_string(classes));
  }
  double sum = 0.0;
  for (double p : row) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kRowSumTolerance) {
      throw ProtocolError("prediction row holds a value outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    throw ProtocolError("prediction row sums to " + std::to_string(sum) + ", not 1");
  }
}

void check_input_shape(const ImageTensor& x, const Shape& expected) {
  const Shape& s = x.shape();
  const bool ok = (expected.channels == 0 || expected.channels == s.channels) &&
                  (expected.height == 0 || expected.height == s.height) &&
                  (expected.width == 0 || expected.width == s.width);
  if (!ok) {
    throw InvalidInputError(
        "image shape " + std::to_string(s.channels) + "x" + std::to_string(s.height) +
        "x" + std::to_string(s.width) + " does not match predictor input " +
        std::to_string(expected.channels) + "x" + std::to_string(expected.height) + "x" +
        std::to_string(expected.width));
  }
}

PredictorHandle::PredictorHandle(std::shared_ptr<const Predictor> impl,
                                 std::size_t batch_size)
    : impl_(std::move(impl)), batch_size_(batch_size) {
  if (!impl_) throw ConfigurationError("predictor handle needs a predictor");
  if (batch_size_ == 0) throw ConfigurationError("batch size must be positive");
  if (impl_->max_batch() != 0) batch_size_ = std::min(batch_size_, impl_->max_batch());
}

ProbRows PredictorHandle::predict_batch(std::span<const ImageTensor> xs) const {
  const Shape expected = impl_->input_shape();
  for (const auto& x : xs) check_input_shape(x, expected);

  const std::size_t classes = impl_->num_classes();
  ProbRows out;
  out.reserve(xs.size());
  for (std::size_t start = 0; start < xs.size(); start += batch_size_) {
    const std::size_t n = std::min(batch_size_, xs.size() - start);
    ProbRows rows = impl_->predict(xs.subspan(start, n));
    if (rows.size() != n) {
      throw ProtocolError("predictor returned " + std::to_string(rows.size()) +
                          " rows for " + std::to_string(n) + " images");
    }
    for (auto& row : rows) {
      validate_row(row, classes);
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<ImageTensor> LabeledDataset::images() const {
  std::vector<ImageTensor> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(item.image);
  return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.class_names = class_names;
  out.items.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= items.size()) throw InvalidInputError("dataset subset index out of range");
    out.items.push_back(items[i]);
  }
  return out;
}

void LabeledDataset::validate() const {
  const std::size_t classes = num_classes();
  if (classes == 0) throw InvalidInputError("dataset declares no classes");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    const std::string name =
        "item " + std::to_string(i) + (item.source.empty() ? "" : " (" + item.source + ")");
    if (item.label.size() != classes) {
      throw InvalidInputError(name + ": label has " + std::to_string(item.label.size()) +
                              " entries for " + std::to_string(classes) + " classes");
    }
    double sum = 0.0;
    for (double p : item.label) {
      if (!std::isfinite(p) || p < 0.0) {
        throw InvalidInputError(name + ": label distribution has a negative or non-finite entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kLabelSumTolerance) {
      throw InvalidInputError(name + ": label distribution sums to " + std::to_string(sum));
    }
    if (i > 0 && item.image.shape() != items[0].image.shape()) {
      throw InvalidInputError(name + ": image shape differs from item 0");
    }
    if (item.perturbed && item.perturbed->shape() != item.image.shape()) {
      throw InvalidInputError(name + ": perturbed image shape differs from the clean image");
    }
  }
}

std::vector<double> one_hot(std::size_t label, std::size_t classes) {
  if (label >= classes) {
    throw InvalidInputError("class index " + std::to_string(label) + " out of range");
  }
  std::vector<double> row(classes, 0.0);
  row[label] = 1.0;
  return row;
}

}  // namespace iaside

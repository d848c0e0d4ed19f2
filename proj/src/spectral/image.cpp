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

#include "iaside/image.hpp"

#include <cmath>
#include <string>

#include "iaside/error.hpp"

namespace iaside {

void validate_shape(const Shape& shape) {
  if (shape.channels != 1 && shape.channels != 3) {
    throw InvalidInputError("image must have 1 or 3 channels, got " +
                            std::to_string(shape.channels));
  }
  if (shape.height < 2 || shape.width < 2) {
    throw InvalidInputError("image must be at least 2x2, got " +
                            std::to_string(shape.height) + "x" +
                            std::to_string(shape.width));
  }
}

ImageTensor::ImageTensor(Shape shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  validate_shape(shape_);
  if (data_.size() != shape_.size()) {
    throw InvalidInputError("image data has " + std::to_string(data_.size()) +
                            " values, shape needs " +
                            std::to_string(shape_.size()));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw InvalidInputError("image contains a non-finite value");
  }
}

ImageTensor::ImageTensor(Shape shape) : shape_(shape) {
  validate_shape(shape_);
  data_.assign(shape_.size(), 0.0);
}

std::span<const double> ImageTensor::channel(std::size_t c) const {
  return std::span<const double>(data_).subspan(c * shape_.plane(), shape_.plane());
}

std::span<double> ImageTensor::channel(std::size_t c) {
  return std::span<double>(data_).subspan(c * shape_.plane(), shape_.plane());
}

double ImageTensor::energy() const {
  double sum = 0.0;
  for (double v : data_) sum += v * v;
  return sum;
}

Spectrum::Spectrum(Shape shape) : shape_(shape), coeffs_(shape.size()) {
  validate_shape(shape_);
}

Spectrum::Spectrum(Shape shape, std::vector<Complex> coeffs)
    : shape_(shape), coeffs_(std::move(coeffs)) {
  validate_shape(shape_);
  if (coeffs_.size() != shape_.size()) {
    throw InvalidInputError("spectrum coefficient count does not match shape");
  }
}

std::span<const Complex> Spectrum::channel(std::size_t c) const {
  return std::span<const Complex>(coeffs_).subspan(c * shape_.plane(), shape_.plane());
}

std::span<Complex> Spectrum::channel(std::size_t c) {
  return std::span<Complex>(coeffs_).subspan(c * shape_.plane(), shape_.plane());
}

}  // namespace iaside

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

#ifndef IASIDE_IMAGE_HPP
#define IASIDE_IMAGE_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace iaside {

/// Image dimensions. Storage order everywhere is channel-planar, row-major:
/// index = (c * height + y) * width + x.
struct Shape {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t plane() const { return height * width; }
  std::size_t size() const { return channels * height * width; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Real-valued image, nominally in [0, 1]. Construction validates the shape
/// (1 or 3 channels, at least 2x2) and that every value is finite.
class ImageTensor {
 public:
  ImageTensor() = default;
  ImageTensor(Shape shape, std::vector<double> data);
  /// Zero-filled image.
  explicit ImageTensor(Shape shape);

  const Shape& shape() const { return shape_; }
  std::size_t channels() const { return shape_.channels; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::span<const double> channel(std::size_t c) const;
  std::span<double> channel(std::size_t c);

  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * shape_.height + y) * shape_.width + x];
  }
  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * shape_.height + y) * shape_.width + x];
  }

  /// Sum of squared values over all channels.
  double energy() const;

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Throws InvalidInputError unless the shape is a valid image shape.
void validate_shape(const Shape& shape);

using Complex = std::complex<double>;

/// Centered 2D spectrum, one plane per channel. The zero frequency of each
/// plane sits at (height / 2, width / 2) (integer division).
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(Shape shape);
  Spectrum(Shape shape, std::vector<Complex> coeffs);

  const Shape& shape() const { return shape_; }
  std::size_t channels() const { return shape_.channels; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }

  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> channel(std::size_t c) const;
  std::span<Complex> channel(std::size_t c);

  Complex at(std::size_t c, std::size_t u, std::size_t v) const {
    return coeffs_[(c * shape_.height + u) * shape_.width + v];
  }
  Complex& at(std::size_t c, std::size_t u, std::size_t v) {
    return coeffs_[(c * shape_.height + u) * shape_.width + v];
  }

 private:
  Shape shape_;
  std::vector<Complex> coeffs_;
};

}  // namespace iaside

#endif  // IASIDE_IMAGE_HPP

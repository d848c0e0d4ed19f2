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

#include "iaside/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "iaside/error.hpp"

namespace iaside {
namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer allocate(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

// The FFTW planner is not thread-safe; plans are created once per
// (height, width, direction) under a lock and then executed concurrently via
// the new-array interface, which is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t h, std::size_t w, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(h, w, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    FftwBuffer in = allocate(h * w);
    FftwBuffer out = allocate(h * w);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w),
                                      in.get(), out.get(), sign, FFTW_ESTIMATE);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

// Centered index k holds the frequency stored at natural index
// (k - h/2) mod h.
inline std::size_t natural_index(std::size_t centered, std::size_t n) {
  return (centered + n - n / 2) % n;
}

}  // namespace

Spectrum dft2(const ImageTensor& x) {
  const Shape& shape = x.shape();
  validate_shape(shape);
  const std::size_t h = shape.height;
  const std::size_t w = shape.width;
  fftw_plan plan = PlanCache::instance().get(h, w, FFTW_FORWARD);
  FftwBuffer in = allocate(h * w);
  FftwBuffer out = allocate(h * w);

  Spectrum s(shape);
  for (std::size_t c = 0; c < shape.channels; ++c) {
    auto plane = x.channel(c);
    for (std::size_t i = 0; i < h * w; ++i) {
      in[i][0] = plane[i];
      in[i][1] = 0.0;
    }
    fftw_execute_dft(plan, in.get(), out.get());
    auto dst = s.channel(c);
    for (std::size_t u = 0; u < h; ++u) {
      const std::size_t nu = natural_index(u, h);
      for (std::size_t v = 0; v < w; ++v) {
        const std::size_t nv = natural_index(v, w);
        const auto& z = out[nu * w + nv];
        dst[u * w + v] = Complex(z[0], z[1]);
      }
    }
  }
  return s;
}

ImageTensor idft2(const Spectrum& s, double& imaginary_residue) {
  const Shape& shape = s.shape();
  validate_shape(shape);
  const std::size_t h = shape.height;
  const std::size_t w = shape.width;
  fftw_plan plan = PlanCache::instance().get(h, w, FFTW_BACKWARD);
  FftwBuffer in = allocate(h * w);
  FftwBuffer out = allocate(h * w);
  const double scale = 1.0 / static_cast<double>(h * w);

  std::vector<double> data(shape.size());
  imaginary_residue = 0.0;
  for (std::size_t c = 0; c < shape.channels; ++c) {
    auto src = s.channel(c);
    for (std::size_t u = 0; u < h; ++u) {
      const std::size_t nu = natural_index(u, h);
      for (std::size_t v = 0; v < w; ++v) {
        const std::size_t nv = natural_index(v, w);
        const Complex z = src[u * w + v];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
          throw InvalidInputError("spectrum contains a non-finite coefficient");
        }
        in[nu * w + nv][0] = z.real();
        in[nu * w + nv][1] = z.imag();
      }
    }
    fftw_execute_dft(plan, in.get(), out.get());
    double* dst = data.data() + c * h * w;
    for (std::size_t i = 0; i < h * w; ++i) {
      dst[i] = out[i][0] * scale;
      imaginary_residue = std::max(imaginary_residue, std::abs(out[i][1] * scale));
    }
  }
  return ImageTensor(shape, std::move(data));
}

ImageTensor idft2(const Spectrum& s) {
  double residue = 0.0;
  ImageTensor x = idft2(s, residue);
  if (residue >= kImaginaryResidueLimit) {
    throw SymmetryViolationError(
        "inverse DFT left an imaginary residue of " + std::to_string(residue) +
        "; the spectrum is not Hermitian");
  }
  return x;
}

}  // namespace iaside

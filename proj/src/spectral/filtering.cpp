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

#include "iaside/filtering.hpp"

#include <cmath>
#include <sstream>

#include "iaside/error.hpp"
#include "iaside/fourier.hpp"
#include "iaside/random.hpp"

namespace iaside {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Spectrum hermitian_gaussian(const Shape& shape, double mu, double sigma,
                            std::uint64_t seed) {
  Spectrum s(shape);
  Rng rng(seed);
  const double part_sd = sigma / std::sqrt(2.0);
  const std::size_t h = shape.height;
  const std::size_t w = shape.width;
  for (std::size_t c = 0; c < shape.channels; ++c) {
    auto plane = s.channel(c);
    for (std::size_t u = 0; u < h; ++u) {
      for (std::size_t v = 0; v < w; ++v) {
        const std::size_t k = u * w + v;
        const std::size_t mk = mirror_index(u, h) * w + mirror_index(v, w);
        if (mk < k) continue;  // filled as the conjugate of its mirror
        const double re = rng.normal(mu, part_sd);
        const double im = rng.normal(mu, part_sd);
        if (mk == k) {
          plane[k] = Complex(re, 0.0);  // self-conjugate point: real only
        } else {
          plane[k] = Complex(re, im);
          plane[mk] = Complex(re, -im);
        }
      }
    }
  }
  return s;
}

}  // namespace

std::string descriptor(const AbsenceBaseline& b) {
  return std::visit(
      Overloaded{
          [](const ZerosBaseline&) { return std::string("zeros"); },
          [](const ComplexGaussianBaseline& g) {
            std::ostringstream os;
            os.precision(17);
            os << "cgauss:mu=" << g.mu << ",sigma=" << g.sigma << ",seed=" << g.seed;
            return os.str();
          },
          [](const ReplacementBaseline& r) {
            std::uint64_t pool_hash = 0;
            if (r.pool) {
              for (const auto& img : *r.pool) pool_hash = splitmix64(pool_hash ^ content_hash(img));
            }
            return "replace:pool=" + std::to_string(pool_hash) + ",seed=" + std::to_string(r.seed);
          },
      },
      b);
}

Spectrum realize_baseline(const AbsenceBaseline& b, const ImageTensor& x) {
  return std::visit(
      Overloaded{
          [&](const ZerosBaseline&) { return Spectrum(x.shape()); },
          [&](const ComplexGaussianBaseline& g) {
            if (!(g.sigma >= 0.0) || !std::isfinite(g.mu)) {
              throw InvalidInputError("complex Gaussian baseline needs finite mu and sigma >= 0");
            }
            return hermitian_gaussian(x.shape(), g.mu, g.sigma,
                                      derive_seed(g.seed, content_hash(x)));
          },
          [&](const ReplacementBaseline& r) {
            if (!r.pool || r.pool->empty()) {
              throw InvalidInputError("replacement baseline has an empty donor pool");
            }
            const auto& pool = *r.pool;
            const std::uint64_t self = content_hash(x);
            Rng rng(derive_seed(r.seed, self));
            std::size_t pick = rng.index(pool.size());
            if (pool.size() > 1 && content_hash(pool[pick]) == self) {
              pick = (pick + 1 + rng.index(pool.size() - 1)) % pool.size();
            }
            if (pool[pick].shape() != x.shape()) {
              throw InvalidInputError("replacement donor shape differs from the filtered image");
            }
            return dft2(pool[pick]);
          },
      },
      b);
}

ImageTensor apply_coalition(const Spectrum& fx, const Spectrum& baseline,
                            const TransferMask& mask) {
  const Shape& shape = fx.shape();
  if (baseline.shape() != shape) {
    throw InvalidInputError("baseline spectrum shape differs from the image spectrum");
  }
  if (mask.height() != shape.height || mask.width() != shape.width) {
    throw InvalidInputError("transfer mask is " + std::to_string(mask.height()) + "x" +
                            std::to_string(mask.width()) + " but the image is " +
                            std::to_string(shape.height) + "x" + std::to_string(shape.width));
  }
  Spectrum mixed(shape);
  const auto& bits = mask.bits();
  for (std::size_t c = 0; c < shape.channels; ++c) {
    auto src = fx.channel(c);
    auto base = baseline.channel(c);
    auto dst = mixed.channel(c);
    for (std::size_t k = 0; k < bits.size(); ++k) dst[k] = bits[k] ? src[k] : base[k];
  }
  return idft2(mixed);
}

ImageTensor coalition_filter(const ImageTensor& x, const Coalition& c,
                             const BandPartition& p, const AbsenceBaseline& b) {
  const TransferMask mask = transfer_mask(p, c);
  return apply_coalition(dft2(x), realize_baseline(b, x), mask);
}

std::vector<ImageTensor> coalition_filter_set(std::span<const ImageTensor> xs,
                                              const Coalition& c,
                                              const BandPartition& p,
                                              const AbsenceBaseline& b) {
  const TransferMask mask = transfer_mask(p, c);
  std::vector<ImageTensor> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(apply_coalition(dft2(x), realize_baseline(b, x), mask));
  return out;
}

}  // namespace iaside

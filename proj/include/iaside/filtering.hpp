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

#ifndef IASIDE_FILTERING_HPP
#define IASIDE_FILTERING_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "iaside/image.hpp"
#include "iaside/partition.hpp"

namespace iaside {

/// Absent bands are set to zero.
struct ZerosBaseline {};

/// Absent bands are filled with i.i.d. complex Gaussian noise whose real and
/// imaginary parts are each Normal(mu, sigma^2 / 2). The noise plane is made
/// Hermitian (b(-k) = conj(b(k))) so filtered images stay real. The draw for
/// an image is seeded from `seed` and the image content, so every coalition
/// of the same image sees the same noise.
struct ComplexGaussianBaseline {
  double mu = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// Absent bands take the spectrum of a donor image drawn from `pool`. The
/// donor for an image is chosen from `seed` and the image content; an image
/// never donates to itself while the pool holds anything else.
struct ReplacementBaseline {
  std::shared_ptr<const std::vector<ImageTensor>> pool;
  std::uint64_t seed = 0;
};

using AbsenceBaseline =
    std::variant<ZerosBaseline, ComplexGaussianBaseline, ReplacementBaseline>;

/// Stable text form used in cache keys and result documents.
std::string descriptor(const AbsenceBaseline& b);

/// The baseline spectrum substituted for absent bands of `x`.
Spectrum realize_baseline(const AbsenceBaseline& b, const ImageTensor& x);

/// F^-1[ fx * mask + baseline * (1 - mask) ], shared mask for all channels.
/// Throws SymmetryViolationError when the result is not real.
ImageTensor apply_coalition(const Spectrum& fx, const Spectrum& baseline,
                            const TransferMask& mask);

/// x ⋈ c: keeps the pass-bands of `c`, replaces the stop-bands with the
/// baseline and returns to the spatial domain. The output is not clamped.
ImageTensor coalition_filter(const ImageTensor& x, const Coalition& c,
                             const BandPartition& p, const AbsenceBaseline& b);

/// Element-wise coalition_filter over a set of images.
std::vector<ImageTensor> coalition_filter_set(std::span<const ImageTensor> xs,
                                              const Coalition& c,
                                              const BandPartition& p,
                                              const AbsenceBaseline& b);

}  // namespace iaside

#endif  // IASIDE_FILTERING_HPP

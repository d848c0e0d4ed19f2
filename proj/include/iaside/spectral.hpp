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

#ifndef IASIDE_SPECTRAL_HPP
#define IASIDE_SPECTRAL_HPP

#include <cstddef>
#include <vector>

#include "iaside/image.hpp"

namespace iaside {

/// One annulus of the radial energy spectral density. `radius` is the mean
/// normalized l2 radius of the member frequency points, in [0, 1].
struct RadialDensity {
  double radius = 0.0;
  double density = 0.0;
  std::size_t points = 0;
};

/// Radial ESD: mean of |F(x)(u, v)|^2 / (H W) over each of `n_radii`
/// equal-width bins of the normalized l2 radius, averaged over channels.
/// Bins that contain no frequency point are omitted.
std::vector<RadialDensity> esd_radial(const ImageTensor& x,
                                      std::size_t n_radii);

/// Same as esd_radial on an already transformed spectrum.
std::vector<RadialDensity> esd_radial(const Spectrum& s, std::size_t n_radii);

struct SnrPoint {
  double radius = 0.0;
  double snr = 0.0;
  double snr_db = 0.0;
};

/// ESD_r(x) / ESD_r(delta) per radial bin. Bins where the perturbation has
/// no energy report +inf.
std::vector<SnrPoint> spectral_snr(const ImageTensor& x,
                                   const ImageTensor& delta,
                                   std::size_t n_radii);

/// 10 log10(ratio); ESD is an energy quantity.
double to_decibels(double ratio);

}  // namespace iaside

#endif  // IASIDE_SPECTRAL_HPP

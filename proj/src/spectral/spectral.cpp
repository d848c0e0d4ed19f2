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

#include "iaside/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iaside/error.hpp"
#include "iaside/fourier.hpp"
#include "iaside/partition.hpp"

namespace iaside {

std::vector<RadialDensity> esd_radial(const Spectrum& s, std::size_t n_radii) {
  if (n_radii < 1) throw InvalidInputError("n_radii must be at least 1");
  const std::size_t h = s.height();
  const std::size_t w = s.width();
  const double norm = static_cast<double>(h * w);

  std::vector<double> energy(n_radii, 0.0);
  std::vector<double> radius_sum(n_radii, 0.0);
  std::vector<std::size_t> count(n_radii, 0);
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t v = 0; v < w; ++v) {
      const double r = normalized_radius(PartitionScheme::L2, u, v, h, w);
      const std::size_t bin = std::min(
          static_cast<std::size_t>(std::floor(r * static_cast<double>(n_radii))),
          n_radii - 1);
      double e = 0.0;
      for (std::size_t c = 0; c < s.channels(); ++c) e += std::norm(s.at(c, u, v));
      energy[bin] += e / static_cast<double>(s.channels());
      radius_sum[bin] += r;
      ++count[bin];
    }
  }

  std::vector<RadialDensity> out;
  for (std::size_t b = 0; b < n_radii; ++b) {
    if (count[b] == 0) continue;
    const double n = static_cast<double>(count[b]);
    out.push_back({radius_sum[b] / n, energy[b] / n / norm, count[b]});
  }
  return out;
}

std::vector<RadialDensity> esd_radial(const ImageTensor& x, std::size_t n_radii) {
  return esd_radial(dft2(x), n_radii);
}

double to_decibels(double ratio) { return 10.0 * std::log10(ratio); }

std::vector<SnrPoint> spectral_snr(const ImageTensor& x, const ImageTensor& delta,
                                   std::size_t n_radii) {
  if (x.shape() != delta.shape()) {
    throw InvalidInputError("signal and perturbation dimensions differ");
  }
  const auto signal = esd_radial(x, n_radii);
  const auto noise = esd_radial(delta, n_radii);
  std::vector<SnrPoint> out;
  out.reserve(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double snr = noise[i].density == 0.0
                           ? std::numeric_limits<double>::infinity()
                           : signal[i].density / noise[i].density;
    out.push_back({signal[i].radius, snr, to_decibels(snr)});
  }
  return out;
}

}  // namespace iaside

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

#ifndef IASIDE_TESTS_ORACLES_HPP
#define IASIDE_TESTS_ORACLES_HPP

// Reference computations written directly from the definitions, with no
// code shared with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "iaside/image.hpp"

namespace oracle {

/// Centered 2D DFT by direct summation: F(u, v) = sum x(y, x) e^{-2 pi i
/// ((u - H/2) y / H + (v - W/2) x / W)}. One plane.
inline std::vector<std::complex<double>> direct_dft(const std::vector<double>& x, std::size_t h,
                                                    std::size_t w) {
  std::vector<std::complex<double>> out(h * w);
  const double tau = 2.0 * std::numbers::pi;
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t v = 0; v < w; ++v) {
      const double fu = static_cast<double>(u) - static_cast<double>(h / 2);
      const double fv = static_cast<double>(v) - static_cast<double>(w / 2);
      std::complex<double> acc = 0.0;
      for (std::size_t yy = 0; yy < h; ++yy) {
        for (std::size_t xx = 0; xx < w; ++xx) {
          const double phase = -tau * (fu * static_cast<double>(yy) / static_cast<double>(h) +
                                       fv * static_cast<double>(xx) / static_cast<double>(w));
          acc += x[yy * w + xx] * std::polar(1.0, phase);
        }
      }
      out[u * w + v] = acc;
    }
  }
  return out;
}

/// Inverse of direct_dft, real part, with the 1 / (H W) factor.
inline std::vector<double> direct_idft_real(const std::vector<std::complex<double>>& f,
                                            std::size_t h, std::size_t w) {
  std::vector<double> out(h * w);
  const double tau = 2.0 * std::numbers::pi;
  for (std::size_t yy = 0; yy < h; ++yy) {
    for (std::size_t xx = 0; xx < w; ++xx) {
      std::complex<double> acc = 0.0;
      for (std::size_t u = 0; u < h; ++u) {
        for (std::size_t v = 0; v < w; ++v) {
          const double fu = static_cast<double>(u) - static_cast<double>(h / 2);
          const double fv = static_cast<double>(v) - static_cast<double>(w / 2);
          const double phase = tau * (fu * static_cast<double>(yy) / static_cast<double>(h) +
                                      fv * static_cast<double>(xx) / static_cast<double>(w));
          acc += f[u * w + v] * std::polar(1.0, phase);
        }
      }
      out[yy * w + xx] = acc.real() / static_cast<double>(h * w);
    }
  }
  return out;
}

/// Shapley value of player i as the average marginal contribution over all
/// orderings, enumerated with std::next_permutation.
inline std::vector<double> shapley_by_orderings(const std::vector<double>& v, std::size_t m) {
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> psi(m, 0.0);
  double count = 0.0;
  do {
    std::uint64_t s = 0;
    for (std::size_t p : order) {
      psi[p] += v[s | (1ULL << p)] - v[s];
      s |= 1ULL << p;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : psi) p /= count;
  return psi;
}

/// Spectral robustness score straight from its definition with normalized
/// geometric weights bbar = w / ||w||_2 and eta = bbar . (1/M).
inline double srs(const std::vector<double>& sid, double beta) {
  const std::size_t m = sid.size();
  std::vector<double> w(m);
  double n2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    w[i] = std::pow(beta, static_cast<double>(i));
    n2 += w[i] * w[i];
  }
  double dot = 0.0, eta = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    dot += w[i] / std::sqrt(n2) * sid[i];
    eta += w[i] / std::sqrt(n2) / static_cast<double>(m);
  }
  return std::abs((dot - eta) / (1.0 - eta));
}

/// Random game on m players with v(empty) = 0 and other values uniform in
/// [-1, 1].
inline std::vector<double> random_game(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(std::size_t{1} << m);
  for (std::size_t s = 1; s < v.size(); ++s) v[s] = u(rng);
  return v;
}

}  // namespace oracle

#endif  // IASIDE_TESTS_ORACLES_HPP

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

#ifndef IASIDE_FOURIER_HPP
#define IASIDE_FOURIER_HPP

#include <cstddef>

#include "iaside/image.hpp"

namespace iaside {

/// Residue threshold above which idft2 refuses to drop the imaginary part.
inline constexpr double kImaginaryResidueLimit = 1e-5;

/// Centered, unnormalized forward DFT of every channel:
///   F(x)(u, v) = sum_{i,j} x(i, j) exp(-2 pi i (u i / H + v j / W)),
/// shifted so that the zero frequency lands on (H / 2, W / 2).
Spectrum dft2(const ImageTensor& x);

/// Inverse of dft2, carrying the 1 / (H W) factor. The result must be real:
/// an imaginary part with max-abs >= kImaginaryResidueLimit raises
/// SymmetryViolationError.
ImageTensor idft2(const Spectrum& s);

/// Like idft2 but also reports the max-abs imaginary residue instead of
/// throwing on it.
ImageTensor idft2(const Spectrum& s, double& imaginary_residue);

/// Index of the frequency point -k on a centered axis of length n.
inline std::size_t mirror_index(std::size_t k, std::size_t n) {
  return (2 * (n / 2) + n - k) % n;
}

}  // namespace iaside

#endif  // IASIDE_FOURIER_HPP

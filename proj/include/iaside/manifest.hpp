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

#ifndef IASIDE_MANIFEST_HPP
#define IASIDE_MANIFEST_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "iaside/image.hpp"
#include "iaside/predictor.hpp"

namespace iaside {

/// Reads an image file: 8-bit PNG (gray or RGB, alpha dropped, values / 255)
/// or a raw tensor file (magic "IAS1", u32 C, H, W, then C*H*W little-endian
/// f32 in channel-planar order). The format is chosen by the magic bytes.
ImageTensor load_image(const std::filesystem::path& path);

void save_raw_image(const std::filesystem::path& path, const ImageTensor& x);
/// 8-bit PNG; values are clamped to [0, 1] and rounded.
void save_png_image(const std::filesystem::path& path, const ImageTensor& x);

/// Loads a manifest
///   {"classes": [...],
///    "items": [{"image": "a.png", "label": 0, "perturbed": "a_adv.png"},
///              {"image": "b.ias", "dist": [0.7, 0.3]}]}
/// Relative paths resolve against the manifest's directory. Images are never
/// resized: with `expected` set, every image must have that shape (zero
/// fields match anything). Errors name the offending item.
LabeledDataset load_manifest(const std::filesystem::path& path,
                             const std::optional<Shape>& expected = std::nullopt);

/// Writes every image of `ds` as a raw tensor file next to a manifest at
/// `path`. Hard labels are written as "label", soft labels as "dist".
void write_dataset(const std::filesystem::path& path, const LabeledDataset& ds);

}  // namespace iaside

#endif  // IASIDE_MANIFEST_HPP

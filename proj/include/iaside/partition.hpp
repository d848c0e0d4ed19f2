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

#ifndef IASIDE_PARTITION_HPP
#define IASIDE_PARTITION_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace iaside {

enum class PartitionScheme { LInf, L2 };

std::string to_string(PartitionScheme scheme);
/// Accepts "linf" and "l2".
PartitionScheme parse_partition_scheme(const std::string& text);

/// Normalized distance of the centered frequency point (u, v) from the
/// spectrum center, in [0, 1]. Each axis offset is divided by the largest
/// offset on that axis; the l2 form is further divided by sqrt(2) so the
/// corner maps to 1.
double normalized_radius(PartitionScheme scheme, std::size_t u, std::size_t v,
                         std::size_t height, std::size_t width);

/// Assignment of every frequency point of an H x W centered spectrum to one
/// of M bands ("spectral players"). Band 0 holds the zero frequency.
class BandPartition {
 public:
  BandPartition(std::size_t m_bands, PartitionScheme scheme,
                std::size_t height, std::size_t width);

  std::size_t m_bands() const { return m_bands_; }
  PartitionScheme scheme() const { return scheme_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }

  /// Band of the centered frequency point (u, v).
  std::size_t band(std::size_t u, std::size_t v) const {
    return band_index_map_[u * width_ + v];
  }
  const std::vector<std::uint16_t>& band_index_map() const {
    return band_index_map_;
  }
  /// Number of frequency points in each band.
  std::vector<std::size_t> band_sizes() const;

  /// Stable text form, e.g. "linf:8:64x64"; used in cache keys.
  std::string descriptor() const;

 private:
  std::size_t m_bands_;
  PartitionScheme scheme_;
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint16_t> band_index_map_;
};

/// band(u, v) = min(floor(r * M), M - 1) with r = normalized_radius.
BandPartition band_partition(std::size_t m_bands, PartitionScheme scheme,
                             std::size_t height, std::size_t width);

/// Subset of the M bands. Bit i of `bits` is band i.
class Coalition {
 public:
  static constexpr std::size_t kMaxBands = 64;

  Coalition(std::size_t m_bands, std::uint64_t bits);
  static Coalition empty(std::size_t m_bands) { return {m_bands, 0}; }
  static Coalition grand(std::size_t m_bands);
  static Coalition of(std::size_t m_bands, std::initializer_list<std::size_t> members);

  std::size_t m_bands() const { return m_bands_; }
  std::uint64_t bits() const { return bits_; }
  bool contains(std::size_t band) const { return (bits_ >> band) & 1U; }
  std::size_t size() const;

  /// Binary code with band 0 leftmost, e.g. "1001" for {0, 3} at M = 4.
  std::string code() const;
  static Coalition from_code(const std::string& code);

  friend bool operator==(const Coalition&, const Coalition&) = default;

 private:
  std::size_t m_bands_;
  std::uint64_t bits_;
};

/// Binary frequency mask: 1 on the pass-bands of a coalition, 0 elsewhere.
class TransferMask {
 public:
  TransferMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::uint8_t at(std::size_t u, std::size_t v) const { return bits_[u * width_ + v]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const TransferMask&, const TransferMask&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> bits_;
};

TransferMask transfer_mask(const BandPartition& p, const Coalition& c);

}  // namespace iaside

#endif  // IASIDE_PARTITION_HPP

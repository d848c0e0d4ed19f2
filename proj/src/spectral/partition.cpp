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

#include "iaside/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "iaside/error.hpp"

namespace iaside {

std::string to_string(PartitionScheme scheme) {
  return scheme == PartitionScheme::LInf ? "linf" : "l2";
}

PartitionScheme parse_partition_scheme(const std::string& text) {
  if (text == "linf") return PartitionScheme::LInf;
  if (text == "l2") return PartitionScheme::L2;
  throw ConfigurationError("unknown partition scheme '" + text + "' (expected linf or l2)");
}

double normalized_radius(PartitionScheme scheme, std::size_t u, std::size_t v,
                         std::size_t height, std::size_t width) {
  const double du = std::abs(static_cast<double>(u) - static_cast<double>(height / 2)) /
                    static_cast<double>(height / 2);
  const double dv = std::abs(static_cast<double>(v) - static_cast<double>(width / 2)) /
                    static_cast<double>(width / 2);
  if (scheme == PartitionScheme::LInf) return std::max(du, dv);
  return std::sqrt((du * du + dv * dv) / 2.0);
}

BandPartition::BandPartition(std::size_t m_bands, PartitionScheme scheme,
                             std::size_t height, std::size_t width)
    : m_bands_(m_bands), scheme_(scheme), height_(height), width_(width) {
  if (m_bands < 1) throw InvalidInputError("band count must be at least 1");
  if (m_bands > 65535) throw InvalidInputError("band count too large");
  if (height < 2 || width < 2) throw InvalidInputError("spectrum must be at least 2x2");
  band_index_map_.resize(height * width);
  const double m = static_cast<double>(m_bands);
  for (std::size_t u = 0; u < height; ++u) {
    for (std::size_t v = 0; v < width; ++v) {
      const double r = normalized_radius(scheme, u, v, height, width);
      const auto band = std::min(static_cast<std::size_t>(std::floor(r * m)), m_bands - 1);
      band_index_map_[u * width + v] = static_cast<std::uint16_t>(band);
    }
  }
}

std::vector<std::size_t> BandPartition::band_sizes() const {
  std::vector<std::size_t> sizes(m_bands_, 0);
  for (auto b : band_index_map_) ++sizes[b];
  return sizes;
}

std::string BandPartition::descriptor() const {
  return to_string(scheme_) + ":" + std::to_string(m_bands_) + ":" +
         std::to_string(height_) + "x" + std::to_string(width_);
}

BandPartition band_partition(std::size_t m_bands, PartitionScheme scheme,
                             std::size_t height, std::size_t width) {
  return BandPartition(m_bands, scheme, height, width);
}

Coalition::Coalition(std::size_t m_bands, std::uint64_t bits)
    : m_bands_(m_bands), bits_(bits) {
  if (m_bands < 1 || m_bands > kMaxBands) {
    throw InvalidInputError("coalitions support 1 to 64 bands, got " +
                            std::to_string(m_bands));
  }
  if (m_bands < kMaxBands && (bits >> m_bands) != 0) {
    throw InvalidInputError("coalition names a band outside [0, M-1]");
  }
}

Coalition Coalition::grand(std::size_t m_bands) {
  const std::uint64_t bits =
      m_bands >= kMaxBands ? ~std::uint64_t{0} : (std::uint64_t{1} << m_bands) - 1;
  return {m_bands, bits};
}

Coalition Coalition::of(std::size_t m_bands, std::initializer_list<std::size_t> members) {
  std::uint64_t bits = 0;
  for (std::size_t b : members) {
    if (b >= m_bands) throw InvalidInputError("coalition names a band outside [0, M-1]");
    bits |= std::uint64_t{1} << b;
  }
  return {m_bands, bits};
}

std::size_t Coalition::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::string Coalition::code() const {
  std::string out(m_bands_, '0');
  for (std::size_t i = 0; i < m_bands_; ++i) {
    if (contains(i)) out[i] = '1';
  }
  return out;
}

Coalition Coalition::from_code(const std::string& code) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i] == '1') {
      bits |= std::uint64_t{1} << i;
    } else if (code[i] != '0') {
      throw InvalidInputError("coalition code must contain only 0 and 1: " + code);
    }
  }
  return {code.size(), bits};
}

TransferMask::TransferMask(std::size_t height, std::size_t width,
                           std::vector<std::uint8_t> bits)
    : height_(height), width_(width), bits_(std::move(bits)) {
  if (bits_.size() != height * width) {
    throw InvalidInputError("transfer mask size does not match its dimensions");
  }
}

TransferMask transfer_mask(const BandPartition& p, const Coalition& c) {
  if (c.m_bands() != p.m_bands()) {
    throw InvalidInputError("coalition has " + std::to_string(c.m_bands()) +
                            " bands but the partition has " +
                            std::to_string(p.m_bands()));
  }
  const auto& map = p.band_index_map();
  std::vector<std::uint8_t> bits(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) bits[i] = c.contains(map[i]) ? 1 : 0;
  return TransferMask(p.height(), p.width(), std::move(bits));
}

}  // namespace iaside

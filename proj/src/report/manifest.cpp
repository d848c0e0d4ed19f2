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

#include "iaside/manifest.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"

#include "iaside/atomic_file.hpp"
#include "iaside/error.hpp"

namespace iaside {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::array<char, 4> kRawMagic{'I', 'A', 'S', '1'};
constexpr std::size_t kRawHeader = 16;

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return bytes;
}

std::uint32_t get_u32(const std::string& b, std::size_t at) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + i])) << (8 * i);
  }
  return v;
}

void put_u32(std::string& b, std::uint32_t v) {
  for (std::size_t i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

ImageTensor decode_raw(const std::string& b, const fs::path& path) {
  if (b.size() < kRawHeader) throw IoError(path.string() + ": truncated raw tensor header");
  const Shape shape{get_u32(b, 4), get_u32(b, 8), get_u32(b, 12)};
  const std::size_t n = shape.size();
  if (b.size() != kRawHeader + 4 * n) {
    throw IoError(path.string() + ": expected " + std::to_string(kRawHeader + 4 * n) +
                  " bytes for shape " + std::to_string(shape.channels) + "x" +
                  std::to_string(shape.height) + "x" + std::to_string(shape.width) + ", found " +
                  std::to_string(b.size()));
  }
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = static_cast<double>(std::bit_cast<float>(get_u32(b, kRawHeader + 4 * i)));
  }
  try {
    return ImageTensor(shape, std::move(data));
  } catch (const InvalidInputError& e) {
    throw InvalidInputError(path.string() + ": " + e.what());
  }
}

ImageTensor decode_png(const fs::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw IoError(path.string() + ": " + img.message);
  }
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw IoError(path.string() + ": " + msg);
  }
  const Shape shape{color ? 3u : 1u, img.height, img.width};
  std::vector<double> data(shape.size());
  const std::size_t plane = shape.plane();
  for (std::size_t p = 0; p < plane; ++p) {
    for (std::size_t c = 0; c < shape.channels; ++c) {
      data[c * plane + p] = buf[p * shape.channels + c] / 255.0;
    }
  }
  return ImageTensor(shape, std::move(data));
}

std::string item_name(std::size_t i, const std::string& image) {
  return "item " + std::to_string(i) + " (" + image + ")";
}

}  // namespace

ImageTensor load_image(const fs::path& path) {
  const std::string bytes = read_bytes(path);
  if (bytes.size() >= 4 && std::equal(kRawMagic.begin(), kRawMagic.end(), bytes.begin())) {
    return decode_raw(bytes, path);
  }
  if (bytes.size() >= 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) == 0) {
    return decode_png(path);
  }
  throw IoError(path.string() + ": neither a PNG nor a raw IAS1 tensor");
}

void save_raw_image(const fs::path& path, const ImageTensor& x) {
  std::string b(kRawMagic.begin(), kRawMagic.end());
  put_u32(b, static_cast<std::uint32_t>(x.channels()));
  put_u32(b, static_cast<std::uint32_t>(x.height()));
  put_u32(b, static_cast<std::uint32_t>(x.width()));
  for (double v : x.data()) put_u32(b, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  write_file_atomic(path, b);
}

void save_png_image(const fs::path& path, const ImageTensor& x) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(x.width());
  img.height = static_cast<png_uint_32>(x.height());
  img.format = x.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t plane = x.shape().plane();
  std::vector<png_byte> buf(plane * x.channels());
  for (std::size_t p = 0; p < plane; ++p) {
    for (std::size_t c = 0; c < x.channels(); ++c) {
      const double v = std::clamp(x.data()[c * plane + p], 0.0, 1.0);
      buf[p * x.channels() + c] = static_cast<png_byte>(std::lround(v * 255.0));
    }
  }
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(img, size, 0, buf.data(), 0, nullptr)) {
    throw IoError(path.string() + ": " + img.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, buf.data(), 0, nullptr)) {
    throw IoError(path.string() + ": " + img.message);
  }
  out.resize(size);
  write_file_atomic(path, out);
}

LabeledDataset load_manifest(const fs::path& path, const std::optional<Shape>& expected) {
  json doc;
  try {
    doc = json::parse(read_bytes(path));
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": invalid JSON: " + e.what());
  }
  const fs::path base = path.parent_path();
  if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_array()) {
    throw InvalidInputError(path.string() + ": manifest needs a \"classes\" array");
  }
  if (!doc.contains("items") || !doc["items"].is_array()) {
    throw InvalidInputError(path.string() + ": manifest needs an \"items\" array");
  }
  LabeledDataset ds;
  for (const auto& c : doc["classes"]) {
    ds.class_names.push_back(c.is_string() ? c.get<std::string>() : c.dump());
  }
  const std::size_t classes = ds.class_names.size();
  if (classes == 0) throw InvalidInputError(path.string() + ": manifest declares no classes");

  const auto& items = doc["items"];
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (!it.is_object() || !it.contains("image") || !it["image"].is_string()) {
      throw InvalidInputError("item " + std::to_string(i) + ": missing \"image\" path");
    }
    const std::string image = it["image"].get<std::string>();
    const std::string name = item_name(i, image);
    LabeledItem item;
    item.source = image;
    const bool has_label = it.contains("label");
    const bool has_dist = it.contains("dist");
    if (has_label == has_dist) {
      throw InvalidInputError(name + ": needs exactly one of \"label\" or \"dist\"");
    }
    if (has_label) {
      const auto& l = it["label"];
      if (!l.is_number_integer() || l.get<long long>() < 0 ||
          static_cast<std::size_t>(l.get<long long>()) >= classes) {
        throw InvalidInputError(name + ": label must be a class index in [0, " +
                                std::to_string(classes) + ")");
      }
      item.label = one_hot(static_cast<std::size_t>(l.get<long long>()), classes);
    } else {
      const auto& d = it["dist"];
      if (!d.is_array() || d.size() != classes) {
        throw InvalidInputError(name + ": dist must be an array of " + std::to_string(classes) +
                                " probabilities");
      }
      for (const auto& p : d) {
        if (!p.is_number()) throw InvalidInputError(name + ": dist entries must be numbers");
        item.label.push_back(p.get<double>());
      }
      double sum = 0.0;
      for (double p : item.label) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw InvalidInputError(name + ": dist has a negative or non-finite entry");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kLabelSumTolerance) {
        throw InvalidInputError(name + ": dist sums to " + std::to_string(sum) + ", not 1");
      }
    }
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
    try {
      item.image = load_image(resolve(image));
      if (it.contains("perturbed")) {
        if (!it["perturbed"].is_string()) {
          throw InvalidInputError("\"perturbed\" must be a path");
        }
        item.perturbed = load_image(resolve(it["perturbed"].get<std::string>()));
      }
    } catch (const IoError& e) {
      throw IoError(name + ": " + e.what());
    } catch (const InvalidInputError& e) {
      throw InvalidInputError(name + ": " + e.what());
    }
    if (expected) {
      const Shape s = item.image.shape();
      const Shape& e = *expected;
      if ((e.channels && e.channels != s.channels) || (e.height && e.height != s.height) ||
          (e.width && e.width != s.width)) {
        throw InvalidInputError(name + ": image is " + std::to_string(s.channels) + "x" +
                                std::to_string(s.height) + "x" + std::to_string(s.width) +
                                " but the model expects " + std::to_string(e.channels) + "x" +
                                std::to_string(e.height) + "x" + std::to_string(e.width));
      }
    }
    ds.items.push_back(std::move(item));
  }
  ds.validate();
  return ds;
}

void write_dataset(const fs::path& path, const LabeledDataset& ds) {
  ds.validate();
  const fs::path dir = path.parent_path();
  const std::string stem = path.stem().string();
  json doc;
  doc["classes"] = ds.class_names;
  doc["items"] = json::array();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& item = ds.items[i];
    json entry;
    const std::string file = stem + "_" + std::to_string(i) + ".ias";
    save_raw_image(dir / file, item.image);
    entry["image"] = file;
    const auto hard = std::find(item.label.begin(), item.label.end(), 1.0);
    if (hard != item.label.end()) {
      entry["label"] = static_cast<std::size_t>(hard - item.label.begin());
    } else {
      entry["dist"] = item.label;
    }
    if (item.perturbed) {
      const std::string pfile = stem + "_" + std::to_string(i) + "_perturbed.ias";
      save_raw_image(dir / pfile, *item.perturbed);
      entry["perturbed"] = pfile;
    }
    doc["items"].push_back(std::move(entry));
  }
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace iaside

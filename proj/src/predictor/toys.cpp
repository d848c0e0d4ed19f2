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

#include "iaside/toys.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "iaside/error.hpp"
#include "iaside/fourier.hpp"
#include "iaside/random.hpp"

namespace iaside {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError("invalid " + what + " '" + text + "'");
  }
}

}  // namespace

UniformPredictor::UniformPredictor(std::size_t num_classes, Shape input_shape)
    : classes_(num_classes), shape_(input_shape) {
  if (classes_ == 0) throw ConfigurationError("uniform predictor needs at least one class");
}

std::string UniformPredictor::id() const { return "toy:uniform:" + std::to_string(classes_); }

ProbRows UniformPredictor::predict(std::span<const ImageTensor> xs) const {
  return ProbRows(xs.size(), ProbRow(classes_, 1.0 / static_cast<double>(classes_)));
}

BayesExactPredictor::BayesExactPredictor(const LabeledDataset& ds)
    : classes_(ds.num_classes()) {
  if (classes_ == 0) throw ConfigurationError("bayes predictor needs a labeled dataset");
  if (!ds.empty()) shape_ = ds.items.front().image.shape();
  std::uint64_t h = 0;
  for (const auto& item : ds.items) {
    const std::uint64_t key = content_hash(item.image);
    rows_.emplace(key, item.label);
    h = splitmix64(h ^ key);
  }
  std::ostringstream os;
  os << "toy:bayes:" << std::hex << h;
  id_ = os.str();
}

ProbRows BayesExactPredictor::predict(std::span<const ImageTensor> xs) const {
  ProbRows out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    auto it = rows_.find(content_hash(x));
    if (it != rows_.end()) {
      out.push_back(it->second);
    } else {
      out.emplace_back(classes_, 1.0 / static_cast<double>(classes_));
    }
  }
  return out;
}

ToyBandClassifier::ToyBandClassifier(Coalition active, BandPartition partition,
                                     std::vector<ImageTensor> templates, double temperature)
    : active_(active),
      partition_(std::move(partition)),
      templates_(std::move(templates)),
      temperature_(temperature) {
  if (templates_.empty()) throw ConfigurationError("band classifier needs class templates");
  if (!(temperature_ > 0.0) || !std::isfinite(temperature_)) {
    throw ConfigurationError("band classifier temperature must be positive");
  }
  if (active_.m_bands() != partition_.m_bands()) {
    throw ConfigurationError("active bands and partition disagree on the band count");
  }
  shape_ = templates_.front().shape();
  for (const auto& t : templates_) {
    if (t.shape() != shape_) throw ConfigurationError("class templates differ in shape");
  }
  if (partition_.height() != shape_.height || partition_.width() != shape_.width) {
    throw ConfigurationError("partition dimensions do not match the templates");
  }

  const auto& map = partition_.band_index_map();
  for (std::size_t k = 0; k < map.size(); ++k) {
    if (active_.contains(map[k])) active_points_.push_back(k);
  }
  std::uint64_t h = 0;
  for (const auto& t : templates_) {
    const Spectrum s = dft2(t);
    std::vector<Complex> coeffs;
    coeffs.reserve(active_points_.size() * shape_.channels);
    for (std::size_t c = 0; c < shape_.channels; ++c) {
      auto plane = s.channel(c);
      for (std::size_t k : active_points_) coeffs.push_back(plane[k]);
    }
    template_coeffs_.push_back(std::move(coeffs));
    h = splitmix64(h ^ content_hash(t));
  }
  std::ostringstream os;
  os.precision(17);
  os << "toy:band:" << active_.code() << ":temp=" << temperature_ << ":"
     << partition_.descriptor() << ":" << std::hex << h;
  id_ = os.str();
}

ProbRow ToyBandClassifier::predict_one(const ImageTensor& x) const {
  const Spectrum s = dft2(x);
  const double norm = static_cast<double>(shape_.plane());
  std::vector<double> logits(templates_.size());
  for (std::size_t y = 0; y < templates_.size(); ++y) {
    const auto& t = template_coeffs_[y];
    double d2 = 0.0;
    std::size_t i = 0;
    for (std::size_t c = 0; c < shape_.channels; ++c) {
      auto plane = s.channel(c);
      for (std::size_t k : active_points_) d2 += std::norm(plane[k] - t[i++]);
    }
    const double logit = -std::sqrt(d2 / norm) / temperature_;
    // Stop-band content reaches the active coefficients only through FFT
    // rounding; snapping to a 1e-9 grid removes it.
    logits[y] = std::round(logit * 1e9) / 1e9;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  ProbRow row(logits.size());
  double sum = 0.0;
  for (std::size_t y = 0; y < logits.size(); ++y) {
    row[y] = std::exp(logits[y] - top);
    sum += row[y];
  }
  for (double& p : row) p /= sum;
  return row;
}

ProbRows ToyBandClassifier::predict(std::span<const ImageTensor> xs) const {
  ProbRows out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict_one(x));
  return out;
}

std::vector<ImageTensor> class_mean_templates(const LabeledDataset& ds) {
  if (ds.empty()) throw ConfigurationError("cannot derive class templates from an empty dataset");
  const std::size_t classes = ds.num_classes();
  const Shape shape = ds.items.front().image.shape();
  std::vector<std::vector<double>> sums(classes, std::vector<double>(shape.size(), 0.0));
  std::vector<double> weights(classes, 0.0);
  for (const auto& item : ds.items) {
    for (std::size_t y = 0; y < classes; ++y) {
      const double p = item.label[y];
      if (p == 0.0) continue;
      weights[y] += p;
      auto data = item.image.data();
      for (std::size_t i = 0; i < data.size(); ++i) sums[y][i] += p * data[i];
    }
  }
  std::vector<ImageTensor> out;
  for (std::size_t y = 0; y < classes; ++y) {
    if (weights[y] == 0.0) {
      throw ConfigurationError("class " + std::to_string(y) + " has no examples to build a template");
    }
    for (double& v : sums[y]) v /= weights[y];
    out.emplace_back(shape, std::move(sums[y]));
  }
  return out;
}

PredictorHandle make_toy(const std::string& spec, const LabeledDataset& ds) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw ConfigurationError("empty toy predictor spec");
  const Shape shape = ds.empty() ? Shape{} : ds.items.front().image.shape();
  if (parts[0] == "uniform" && parts.size() == 1) {
    return PredictorHandle(std::make_shared<UniformPredictor>(ds.num_classes(), shape));
  }
  if (parts[0] == "bayes" && parts.size() == 1) {
    return PredictorHandle(std::make_shared<BayesExactPredictor>(ds));
  }
  if (parts[0] == "band" && parts.size() >= 2) {
    double temperature = 1.0;
    std::size_t m_bands = 8;
    PartitionScheme scheme = PartitionScheme::LInf;
    for (std::size_t i = 2; i < parts.size(); ++i) {
      const auto eq = parts[i].find('=');
      if (eq == std::string::npos) throw ConfigurationError("malformed toy option '" + parts[i] + "'");
      const std::string key = parts[i].substr(0, eq);
      const std::string value = parts[i].substr(eq + 1);
      if (key == "temp") {
        try {
          temperature = std::stod(value);
        } catch (const std::exception&) {
          throw ConfigurationError("invalid temperature '" + value + "'");
        }
      } else if (key == "bands") {
        m_bands = parse_count(value, "band count");
      } else if (key == "partition") {
        scheme = parse_partition_scheme(value);
      } else {
        throw ConfigurationError("unknown toy option '" + key + "'");
      }
    }
    if (ds.empty()) throw ConfigurationError("band toy needs a dataset for its templates");
    std::uint64_t bits = 0;
    for (const auto& b : split(parts[1], ',')) {
      const std::size_t band = parse_count(b, "band index");
      if (band >= m_bands) throw ConfigurationError("active band " + b + " out of range");
      bits |= std::uint64_t{1} << band;
    }
    return PredictorHandle(std::make_shared<ToyBandClassifier>(
        Coalition(m_bands, bits), band_partition(m_bands, scheme, shape.height, shape.width),
        class_mean_templates(ds), temperature));
  }
  throw ConfigurationError("unknown toy predictor '" + spec + "'");
}

}  // namespace iaside

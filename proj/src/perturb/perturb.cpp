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

#include "iaside/perturb.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "iaside/error.hpp"
#include "iaside/random.hpp"
#include "iaside/spectral.hpp"

namespace iaside {
namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw ConfigurationError("perturbation parameter '" + key + "' is not a number: '" +
                             text + "'");
  }
  return v;
}

double default_blur_sigma(std::size_t k) {
  return 0.3 * ((static_cast<double>(k) - 1.0) * 0.5 - 1.0) + 0.8;
}

std::vector<double> gaussian_kernel(std::size_t k, double sigma) {
  std::vector<double> w(k);
  const double half = static_cast<double>(k / 2);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double d = static_cast<double>(i) - half;
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

ImageTensor blur(const ImageTensor& x, const GaussianBlur& g) {
  const auto w = gaussian_kernel(g.kernel, g.sigma);
  const long half = static_cast<long>(g.kernel / 2);
  const long h = static_cast<long>(x.height());
  const long wd = static_cast<long>(x.width());
  ImageTensor tmp(x.shape());
  ImageTensor out(x.shape());
  for (std::size_t c = 0; c < x.channels(); ++c) {
    for (long y = 0; y < h; ++y) {
      for (long col = 0; col < wd; ++col) {
        double acc = 0.0;
        for (long t = -half; t <= half; ++t) {
          const long cc = std::clamp(col + t, 0L, wd - 1);
          acc += w[static_cast<std::size_t>(t + half)] * x.at(c, y, cc);
        }
        tmp.at(c, y, col) = acc;
      }
    }
    for (long y = 0; y < h; ++y) {
      for (long col = 0; col < wd; ++col) {
        double acc = 0.0;
        for (long t = -half; t <= half; ++t) {
          const long yy = std::clamp(y + t, 0L, h - 1);
          acc += w[static_cast<std::size_t>(t + half)] * tmp.at(c, yy, col);
        }
        out.at(c, y, col) = acc;
      }
    }
  }
  return out;
}


std::vector<double> raw_delta(const ImageTensor& x, const PerturbationSpec& spec, Rng& rng) {
  const auto in = x.data();
  std::vector<double> d(in.size(), 0.0);
  if (const auto* wn = std::get_if<WhiteNoise>(&spec.variant)) {
    for (double& v : d) v = rng.normal(0.0, wn->sigma);
  } else if (const auto* gb = std::get_if<GaussianBlur>(&spec.variant)) {
    const ImageTensor b = blur(x, *gb);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = b.data()[i] - in[i];
  } else if (const auto* sp = std::get_if<SaltPepper>(&spec.variant)) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double u = rng.uniform();
      if (u < sp->p * 0.5) {
        d[i] = 0.0 - in[i];
      } else if (u < sp->p) {
        d[i] = 1.0 - in[i];
      }
    }
  } else {
    const auto& pn = std::get<PoissonNoise>(spec.variant);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double lambda = std::max(in[i], 0.0) * pn.scale;
      const double k = lambda > 0.0 ? static_cast<double>(rng.poisson(lambda)) : 0.0;
      d[i] = k / pn.scale - in[i];
    }
  }
  return d;
}

void check_spec(const PerturbationSpec& spec) {
  if (const auto* wn = std::get_if<WhiteNoise>(&spec.variant)) {
    if (!(wn->sigma >= 0.0)) throw InvalidInputError("white noise sigma must be >= 0");
  } else if (const auto* gb = std::get_if<GaussianBlur>(&spec.variant)) {
    if (gb->kernel == 0 || gb->kernel % 2 == 0) {
      throw InvalidInputError("blur kernel size must be odd, got " +
                              std::to_string(gb->kernel));
    }
    if (!(gb->sigma > 0.0)) throw InvalidInputError("blur sigma must be > 0");
  } else if (const auto* sp = std::get_if<SaltPepper>(&spec.variant)) {
    if (!(sp->p >= 0.0 && sp->p <= 1.0)) {
      throw InvalidInputError("salt-and-pepper p must lie in [0, 1]");
    }
  } else {
    if (!(std::get<PoissonNoise>(spec.variant).scale > 0.0)) {
      throw InvalidInputError("poisson scale must be > 0");
    }
  }
  if (spec.energy_ratio && !(*spec.energy_ratio > 0.0 && *spec.energy_ratio <= 1.0)) {
    throw InvalidInputError("energy ratio rho must lie in (0, 1]");
  }
}

}  // namespace

std::string PerturbationSpec::id() const {
  std::string out;
  if (const auto* wn = std::get_if<WhiteNoise>(&variant)) {
    out = "white:sigma=" + format_number(wn->sigma);
  } else if (const auto* gb = std::get_if<GaussianBlur>(&variant)) {
    out = "blur:k=" + std::to_string(gb->kernel) + ",sigma=" + format_number(gb->sigma);
  } else if (const auto* sp = std::get_if<SaltPepper>(&variant)) {
    out = "saltpepper:p=" + format_number(sp->p);
  } else {
    out = "poisson:scale=" + format_number(std::get<PoissonNoise>(variant).scale);
  }
  if (energy_ratio) out += ",rho=" + format_number(*energy_ratio);
  return out;
}

PerturbationSpec parse_perturbation(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::map<std::string, std::string> params;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigurationError("malformed perturbation parameter '" + item + "' in '" +
                                 text + "'");
      }
      const std::string key = item.substr(0, eq);
      if (!params.emplace(key, item.substr(eq + 1)).second) {
        throw ConfigurationError("duplicate perturbation parameter '" + key + "'");
      }
    }
  }
  auto take = [&](const std::string& key) -> std::optional<double> {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    const double v = parse_number(key, it->second);
    params.erase(it);
    return v;
  };

  PerturbationSpec spec;
  if (kind == "white") {
    spec.variant = WhiteNoise{take("sigma").value_or(WhiteNoise{}.sigma)};
  } else if (kind == "blur") {
    const double k = take("k").value_or(3.0);
    if (k < 1.0 || k != std::floor(k)) {
      throw ConfigurationError("blur kernel size must be a positive integer");
    }
    const auto kernel = static_cast<std::size_t>(k);
    spec.variant = GaussianBlur{kernel, take("sigma").value_or(default_blur_sigma(kernel))};
  } else if (kind == "saltpepper") {
    spec.variant = SaltPepper{take("p").value_or(SaltPepper{}.p)};
  } else if (kind == "poisson") {
    spec.variant = PoissonNoise{take("scale").value_or(PoissonNoise{}.scale)};
  } else {
    throw ConfigurationError("unknown perturbation '" + kind +
                             "' (expected white, blur, saltpepper or poisson)");
  }
  spec.energy_ratio = take("rho");
  if (!params.empty()) {
    throw ConfigurationError("unknown perturbation parameter '" + params.begin()->first +
                             "' for '" + kind + "'");
  }
  try {
    check_spec(spec);
  } catch (const InvalidInputError& e) {
    throw ConfigurationError(e.what());
  }
  return spec;
}

Perturbed apply_perturbation(const ImageTensor& x, const PerturbationSpec& spec,
                             std::uint64_t seed) {
  check_spec(spec);
  Rng rng(seed);
  std::vector<double> d = raw_delta(x, spec, rng);
  if (spec.energy_ratio) {
    double de = 0.0;
    for (double v : d) de += v * v;
    const double target = *spec.energy_ratio * x.energy();
    if (de == 0.0) {
      if (target != 0.0) {
        throw InvalidInputError("perturbation " + spec.id() +
                                " produced no change; cannot rescale to the requested energy");
      }
    } else {
      const double s = std::sqrt(target / de);
      for (double& v : d) v *= s;
    }
  }
  std::vector<double> xs(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) xs[i] = x.data()[i] + d[i];
  return {ImageTensor(x.shape(), std::move(xs)), ImageTensor(x.shape(), std::move(d))};
}

std::uint64_t item_seed(std::uint64_t seed, const ImageTensor& x) {
  return derive_seed(seed, content_hash(x));
}

namespace {

double prediction_error(const PredictorHandle& q, const LabeledDataset& ds,
                        const std::vector<ImageTensor>& perturbed) {
  const std::size_t n = ds.size();
  const std::size_t chunk = q.batch_size();
  double total = 0.0;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t len = std::min(chunk, n - start);
    std::vector<ImageTensor> clean;
    clean.reserve(len);
    for (std::size_t i = 0; i < len; ++i) clean.push_back(ds.items[start + i].image);
    const ProbRows a = q.predict_batch(clean);
    const ProbRows b =
        q.predict_batch(std::span<const ImageTensor>(perturbed).subspan(start, len));
    for (std::size_t i = 0; i < len; ++i) {
      const auto& label = ds.items[start + i].label;
      double e = 0.0;
      for (std::size_t y = 0; y < label.size(); ++y) e += label[y] * std::abs(a[i][y] - b[i][y]);
      total += e;
    }
  }
  return total / static_cast<double>(n);
}

void check_dataset(const PredictorHandle& q, const LabeledDataset& ds) {
  if (ds.empty()) throw InvalidInputError("dataset is empty");
  ds.validate();
  if (ds.num_classes() != q.num_classes()) {
    throw InvalidInputError("dataset has " + std::to_string(ds.num_classes()) +
                            " classes but predictor " + q.id() + " has " +
                            std::to_string(q.num_classes()));
  }
}

}  // namespace

double mpe(const PredictorHandle& q, const LabeledDataset& ds, const PerturbationSpec& spec,
           std::uint64_t seed) {
  check_dataset(q, ds);
  std::vector<ImageTensor> perturbed;
  perturbed.reserve(ds.size());
  for (const auto& item : ds.items) {
    perturbed.push_back(apply_perturbation(item.image, spec, item_seed(seed, item.image)).image);
  }
  return prediction_error(q, ds, perturbed);
}

double mpe_pairs(const PredictorHandle& q, const LabeledDataset& ds) {
  check_dataset(q, ds);
  std::vector<ImageTensor> perturbed;
  perturbed.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& item = ds.items[i];
    if (!item.perturbed) {
      throw InvalidInputError("item " + std::to_string(i) +
                              (item.source.empty() ? "" : " (" + item.source + ")") +
                              " has no perturbed counterpart");
    }
    if (!(item.perturbed->shape() == item.image.shape())) {
      throw InvalidInputError("item " + std::to_string(i) +
                              ": perturbed image shape differs from the clean image");
    }
    perturbed.push_back(*item.perturbed);
  }
  return prediction_error(q, ds, perturbed);
}

std::vector<SnrProfilePoint> snr_profile(const LabeledDataset& ds, const PerturbationSpec& spec,
                                         std::size_t n_radii, std::uint64_t seed) {
  if (ds.empty()) throw InvalidInputError("dataset is empty");
  if (n_radii == 0) throw InvalidInputError("n_radii must be positive");
  const Shape shape = ds.items.front().image.shape();
  std::vector<double> radius;
  std::vector<double> signal;
  std::vector<double> noise;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& x = ds.items[i].image;
    if (!(x.shape() == shape)) {
      throw InvalidInputError("item " + std::to_string(i) +
                              " has a different shape from item 0; SNR profiles need one shape");
    }
    const auto p = apply_perturbation(x, spec, item_seed(seed, x));
    const auto es = esd_radial(x, n_radii);
    const auto en = esd_radial(p.delta, n_radii);
    if (i == 0) {
      radius.resize(es.size());
      signal.assign(es.size(), 0.0);
      noise.assign(es.size(), 0.0);
      for (std::size_t b = 0; b < es.size(); ++b) radius[b] = es[b].radius;
    }
    for (std::size_t b = 0; b < es.size(); ++b) {
      signal[b] += es[b].density;
      noise[b] += en[b].density;
    }
  }
  std::vector<SnrProfilePoint> out(radius.size());
  const double n = static_cast<double>(ds.size());
  for (std::size_t b = 0; b < radius.size(); ++b) {
    const double s = signal[b] / n;
    const double e = noise[b] / n;
    double ratio = std::numeric_limits<double>::infinity();
    if (e > 0.0) ratio = s / e;
    out[b] = {radius[b], ratio, to_decibels(ratio)};
  }
  return out;
}

}  // namespace iaside

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

#include "iaside/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <thread>

#include "iaside/error.hpp"
#include "iaside/external.hpp"
#include "iaside/manifest.hpp"
#include "iaside/prediction_cache.hpp"
#include "iaside/random.hpp"
#include "iaside/toys.hpp"

namespace iaside {
namespace {

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError("baseline option " + key + " is not a number: '" + text + "'");
  }
}

void require_model_and_dataset(const RunConfig& cfg) {
  if (cfg.model.empty()) throw ConfigurationError(cfg.command + " needs --model");
  if (cfg.dataset.empty()) throw ConfigurationError(cfg.command + " needs --dataset");
}

void require_dataset(const RunConfig& cfg) {
  if (cfg.dataset.empty()) throw ConfigurationError(cfg.command + " needs --dataset");
}

void check_model_input(const PredictorHandle& q, const LabeledDataset& ds) {
  const Shape e = q.input_shape();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Shape s = ds.items[i].image.shape();
    if ((e.channels && e.channels != s.channels) || (e.height && e.height != s.height) ||
        (e.width && e.width != s.width)) {
      throw InvalidInputError("item " + std::to_string(i) + " (" + ds.items[i].source +
                              "): image shape does not match the model input");
    }
  }
  if (q.num_classes() != ds.num_classes()) {
    throw InvalidInputError("model " + q.id() + " has " + std::to_string(q.num_classes()) +
                            " classes, dataset has " + std::to_string(ds.num_classes()));
  }
}

std::size_t effective_threads(std::size_t requested) {
  if (requested) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

struct CacheSession {
  std::shared_ptr<PredictionCache> cache;
  std::filesystem::path file;

  explicit CacheSession(const std::string& model_id) {
    const char* dir = std::getenv("IASIDE_CACHE_DIR");
    if (!dir || !*dir) return;
    cache = std::make_shared<PredictionCache>();
    file = PredictionCache::file_for(dir, model_id);
    cache->load(file);
  }
  void save() const {
    if (cache) cache->save(file);
  }
};

struct Loaded {
  LabeledDataset all;
  LabeledDataset sample;
  PredictorHandle model;
};

Loaded load_for_model(RunConfig& cfg) {
  LabeledDataset all = load_manifest(cfg.dataset);
  if (all.empty()) throw InvalidInputError(cfg.dataset + ": manifest has no items");
  PredictorHandle q = open_model(cfg.model, all);
  check_model_input(q, all);
  LabeledDataset sample = select_samples(all, cfg.samples, cfg.seed);
  cfg.samples = sample.size();
  return {std::move(all), std::move(sample), std::move(q)};
}

ResultsDocument start(const RunConfig& cfg) {
  ResultsDocument doc;
  doc.config = cfg;
  doc.timestamp = utc_timestamp();
  return doc;
}

std::vector<PerturbationSpec> parse_all(RunConfig& cfg) {
  std::vector<PerturbationSpec> specs;
  for (auto& p : cfg.perturbations) {
    specs.push_back(parse_perturbation(p));
    p = specs.back().id();
  }
  return specs;
}

std::map<std::string, double> measure_mpe(const PredictorHandle& q, const LabeledDataset& ds,
                                          const std::vector<PerturbationSpec>& specs,
                                          std::uint64_t seed) {
  std::map<std::string, double> out;
  for (const auto& s : specs) out[s.id()] = mpe(q, ds, s, seed);
  const bool paired = std::all_of(ds.items.begin(), ds.items.end(),
                                  [](const LabeledItem& it) { return it.perturbed.has_value(); });
  if (paired) out["paired"] = mpe_pairs(q, ds);
  return out;
}

}  // namespace

PredictorHandle open_model(const std::string& spec, const LabeledDataset& ds) {
  if (spec.rfind("toy:", 0) == 0) return make_toy(spec.substr(4), ds);
  if (spec.rfind("cmd:", 0) == 0 || spec.rfind("tcp:", 0) == 0) {
    return connect_external(parse_transport_spec(spec));
  }
  throw ConfigurationError("unknown model spec '" + spec +
                           "' (expected toy:NAME, cmd:COMMAND or tcp:HOST:PORT)");
}

AbsenceBaseline parse_baseline(const std::string& spec, std::uint64_t seed,
                               const LabeledDataset& ds) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  if (kind == "zeros" && colon == std::string::npos) return ZerosBaseline{};
  if (kind == "replace" && colon == std::string::npos) {
    auto pool = std::make_shared<const std::vector<ImageTensor>>(ds.images());
    return ReplacementBaseline{std::move(pool), seed};
  }
  if (kind == "cgauss") {
    ComplexGaussianBaseline b;
    b.seed = seed;
    std::size_t at = colon;
    while (at != std::string::npos) {
      const auto next = spec.find(':', at + 1);
      const std::string opt = spec.substr(at + 1, next == std::string::npos ? next : next - at - 1);
      const auto eq = opt.find('=');
      const std::string key = opt.substr(0, eq);
      if (eq == std::string::npos) throw ConfigurationError("malformed baseline option '" + opt + "'");
      const double v = parse_real(key, opt.substr(eq + 1));
      if (key == "mu") {
        b.mu = v;
      } else if (key == "sigma") {
        if (!(v >= 0.0)) throw ConfigurationError("cgauss sigma must be >= 0");
        b.sigma = v;
      } else {
        throw ConfigurationError("unknown baseline option '" + key + "'");
      }
      at = next;
    }
    return b;
  }
  throw ConfigurationError("unknown baseline '" + spec +
                           "' (expected zeros, cgauss[:mu=M][:sigma=S] or replace)");
}

LabeledDataset select_samples(const LabeledDataset& ds, std::size_t k, std::uint64_t seed) {
  if (k >= ds.size()) return ds;
  auto order = shuffled_indices(ds.size(), seed);
  order.resize(k);
  std::sort(order.begin(), order.end());
  return ds.subset(order);
}

ResultsDocument run_sid(RunConfig cfg) {
  cfg.validate();
  require_model_and_dataset(cfg);
  const auto specs = parse_all(cfg);
  cfg.threads = effective_threads(cfg.threads);
  Loaded l = load_for_model(cfg);
  const Shape shape = l.sample.items.front().image.shape();
  const auto part = band_partition(cfg.bands, cfg.partition, shape.height, shape.width);
  const auto baseline = parse_baseline(cfg.baseline, cfg.seed, l.all);

  CacheSession cache(l.model.id());
  EvaluationOptions opts;
  opts.threads = cfg.threads;
  opts.cache = cache.cache;
  GameTable table = build_game_table(l.model, l.sample, part, baseline, opts);
  cache.save();

  ResultsDocument doc = start(cfg);
  doc.sid = spectral_importance(table);
  doc.srs = srs(doc.sid->normalized, {cfg.beta, cfg.bands});
  doc.v_table = std::move(table);
  if (!specs.empty()) {
    RobustnessRecord r;
    r.model_id = cfg.model;
    r.srs = *doc.srs;
    r.sid = *doc.sid;
    r.mpe = measure_mpe(l.model, l.sample, specs, cfg.seed);
    doc.records = std::vector<RobustnessRecord>{std::move(r)};
  }
  return doc;
}

ResultsDocument run_srs(RunConfig cfg, const ResultsDocument& sid_doc) {
  if (!sid_doc.sid) throw ConfigurationError("input document has no SID section");
  cfg.bands = sid_doc.sid->normalized.size();
  if (cfg.model.empty()) cfg.model = sid_doc.config.model;
  if (cfg.dataset.empty()) cfg.dataset = sid_doc.config.dataset;
  cfg.validate();
  ResultsDocument doc = start(cfg);
  doc.sid = sid_doc.sid;
  doc.srs = srs(doc.sid->normalized, {cfg.beta, cfg.bands});
  return doc;
}

ResultsDocument run_snr(RunConfig cfg) {
  cfg.validate();
  require_dataset(cfg);
  if (cfg.perturbations.empty()) throw ConfigurationError("snr needs at least one --perturbation");
  const auto specs = parse_all(cfg);
  LabeledDataset ds = select_samples(load_manifest(cfg.dataset), cfg.samples, cfg.seed);
  if (ds.empty()) throw InvalidInputError(cfg.dataset + ": manifest has no items");
  cfg.samples = ds.size();
  ResultsDocument doc = start(cfg);
  for (const auto& s : specs) doc.snr.push_back({s.id(), snr_profile(ds, s, cfg.radii, cfg.seed)});
  return doc;
}

ResultsDocument run_mpe(RunConfig cfg) {
  cfg.validate();
  require_model_and_dataset(cfg);
  const auto specs = parse_all(cfg);
  Loaded l = load_for_model(cfg);
  RobustnessRecord r;
  r.model_id = cfg.model;
  r.srs = std::numeric_limits<double>::quiet_NaN();
  r.mpe = measure_mpe(l.model, l.sample, specs, cfg.seed);
  if (r.mpe.empty()) {
    throw ConfigurationError(
        "mpe needs --perturbation or a manifest whose items all carry \"perturbed\" images");
  }
  ResultsDocument doc = start(cfg);
  doc.records = std::vector<RobustnessRecord>{std::move(r)};
  return doc;
}

ResultsDocument run_converge(RunConfig cfg) {
  cfg.validate();
  require_model_and_dataset(cfg);
  if (cfg.sample_counts.empty()) throw ConfigurationError("converge needs sample counts");
  cfg.threads = effective_threads(cfg.threads);
  LabeledDataset all = load_manifest(cfg.dataset);
  if (all.empty()) throw InvalidInputError(cfg.dataset + ": manifest has no items");
  PredictorHandle q = open_model(cfg.model, all);
  check_model_input(q, all);
  cfg.samples = cfg.sample_counts.back();
  const Shape shape = all.items.front().image.shape();
  const auto part = band_partition(cfg.bands, cfg.partition, shape.height, shape.width);
  const auto baseline = parse_baseline(cfg.baseline, cfg.seed, all);
  CacheSession cache(q.id());
  EvaluationOptions opts;
  opts.threads = cfg.threads;
  opts.cache = cache.cache;
  auto report = convergence_scan(q, all, part, baseline, cfg.sample_counts, cfg.seed, opts);
  cache.save();
  ResultsDocument doc = start(cfg);
  doc.convergence = std::move(report);
  return doc;
}

ResultsDocument run_report(RunConfig cfg, std::span<const ResultsDocument> inputs) {
  if (inputs.empty()) throw ConfigurationError("report needs at least one results document");
  std::map<std::string, RobustnessRecord> merged;
  std::vector<std::string> order;
  auto entry = [&](const std::string& model) -> RobustnessRecord& {
    auto it = merged.find(model);
    if (it == merged.end()) {
      order.push_back(model);
      it = merged.emplace(model, RobustnessRecord{}).first;
      it->second.model_id = model;
      it->second.srs = std::numeric_limits<double>::quiet_NaN();
    }
    return it->second;
  };
  for (const auto& d : inputs) {
    if (d.sid && d.srs) {
      auto& r = entry(d.config.model);
      r.srs = *d.srs;
      r.sid = *d.sid;
    }
    if (d.records) {
      for (const auto& rec : *d.records) {
        auto& r = entry(rec.model_id);
        if (!std::isnan(rec.srs)) r.srs = rec.srs;
        if (!rec.sid.normalized.empty()) r.sid = rec.sid;
        for (const auto& [k, v] : rec.mpe) r.mpe[k] = v;
      }
    }
  }
  std::vector<RobustnessRecord> records;
  for (const auto& m : order) records.push_back(merged[m]);

  std::vector<std::string> ids = cfg.perturbations;
  for (auto& p : ids) {
    if (p != "paired") p = parse_perturbation(p).id();
  }
  if (ids.empty() && !records.empty()) {
    for (const auto& [k, v] : records.front().mpe) {
      const bool shared = std::all_of(records.begin(), records.end(),
                                      [&](const RobustnessRecord& r) { return r.mpe.count(k) > 0; });
      if (shared) ids.push_back(k);
    }
  }
  cfg.perturbations = ids;
  ResultsDocument doc = start(cfg);
  for (const auto& id : ids) {
    for (const auto& r : records) {
      if (std::isnan(r.srs)) {
        throw ConfigurationError("model " + r.model_id + " has no SRS in the inputs");
      }
    }
    doc.correlations[id] = correlate(records, id);
  }
  doc.records = std::move(records);
  return doc;
}

}  // namespace iaside

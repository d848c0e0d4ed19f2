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

#include "iaside/characteristic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "iaside/error.hpp"
#include "iaside/fourier.hpp"
#include "iaside/random.hpp"

namespace iaside {
namespace {

std::size_t resolve_threads(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested == 0 ? std::thread::hardware_concurrency() : requested;
  return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(jobs, 1));
}

// Runs fn(job) for job in [0, jobs) on up to `threads` workers and rethrows
// the first failure.
template <class Fn>
void parallel_for(std::size_t jobs, std::size_t threads, Fn&& fn) {
  threads = resolve_threads(threads, jobs);
  if (threads == 1) {
    for (std::size_t j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t j = next.fetch_add(1);
        if (j >= jobs) return;
        try {
          fn(j);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(jobs);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void check_inputs(const LabeledDataset& ds, const BandPartition& p, const PredictorHandle& q) {
  if (ds.empty()) throw InvalidInputError("dataset is empty");
  if (ds.num_classes() != q.num_classes()) {
    throw InvalidInputError("dataset has " + std::to_string(ds.num_classes()) +
                            " classes but the predictor reports " +
                            std::to_string(q.num_classes()));
  }
  for (const auto& item : ds.items) {
    if (item.image.height() != p.height() || item.image.width() != p.width()) {
      throw InvalidInputError("image size does not match the band partition");
    }
    if (item.label.size() != ds.num_classes()) {
      throw InvalidInputError("label length does not match the class count");
    }
  }
}

double label_weighted_log(const std::vector<double>& label, const ProbRow& row) {
  double s = 0.0;
  for (std::size_t y = 0; y < label.size(); ++y) {
    if (label[y] != 0.0) s += label[y] * floored_log(row[y]);
  }
  return s;
}

// Predicted rows for every (coalition, item) pair, produced chunk by chunk.
// `sink(coalition_index, item_index, row)` is called for items in increasing
// order within each coalition.
template <class Sink>
void for_each_prediction(const PredictorHandle& q, const LabeledDataset& ds,
                         std::span<const Coalition> coalitions, const BandPartition& p,
                         const AbsenceBaseline& b, const EvaluationOptions& opts, Sink&& sink) {
  std::vector<TransferMask> masks;
  masks.reserve(coalitions.size());
  for (const auto& c : coalitions) masks.push_back(transfer_mask(p, c));
  const std::string baseline_desc = descriptor(b);
  const std::string partition_desc = p.descriptor();

  const std::size_t chunk = q.batch_size();
  for (std::size_t start = 0; start < ds.size(); start += chunk) {
    const std::size_t n = std::min(chunk, ds.size() - start);
    std::vector<std::uint64_t> hashes(n);
    for (std::size_t i = 0; i < n; ++i) hashes[i] = content_hash(ds.items[start + i].image);

    // Spectra are computed lazily: a fully cached chunk never transforms.
    std::vector<std::optional<Spectrum>> spectra(n);
    std::vector<std::optional<Spectrum>> baselines(n);
    std::vector<std::once_flag> ready(n);
    auto prepare = [&](std::size_t i) {
      std::call_once(ready[i], [&] {
        spectra[i] = dft2(ds.items[start + i].image);
        baselines[i] = realize_baseline(b, ds.items[start + i].image);
      });
    };

    std::vector<ProbRows> rows(coalitions.size());
    parallel_for(coalitions.size(), opts.threads, [&](std::size_t ci) {
      ProbRows out(n);
      std::vector<std::size_t> missing;
      std::vector<CacheKey> keys(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (opts.cache) {
          keys[i] = prediction_key(hashes[i], coalitions[ci], baseline_desc, partition_desc);
          if (auto hit = opts.cache->lookup(keys[i])) {
            out[i] = std::move(*hit);
            continue;
          }
        }
        missing.push_back(i);
      }
      if (!missing.empty()) {
        std::vector<ImageTensor> filtered;
        filtered.reserve(missing.size());
        for (std::size_t i : missing) {
          prepare(i);
          filtered.push_back(apply_coalition(*spectra[i], *baselines[i], masks[ci]));
        }
        ProbRows fresh = q.predict_batch(filtered);
        for (std::size_t k = 0; k < missing.size(); ++k) {
          const std::size_t i = missing[k];
          if (opts.cache) opts.cache->insert(keys[i], fresh[k]);
          out[i] = std::move(fresh[k]);
        }
      }
      rows[ci] = std::move(out);
    });

    for (std::size_t ci = 0; ci < coalitions.size(); ++ci) {
      for (std::size_t i = 0; i < n; ++i) sink(ci, start + i, rows[ci][i]);
    }
  }
}

std::vector<double> mean_log_likelihoods(const PredictorHandle& q, const LabeledDataset& ds,
                                         std::span<const Coalition> coalitions,
                                         const BandPartition& p, const AbsenceBaseline& b,
                                         const EvaluationOptions& opts) {
  check_inputs(ds, p, q);
  std::vector<double> acc(coalitions.size(), 0.0);
  for_each_prediction(q, ds, coalitions, p, b, opts,
                      [&](std::size_t ci, std::size_t item, const ProbRow& row) {
                        acc[ci] += label_weighted_log(ds.items[item].label, row);
                      });
  for (double& a : acc) a /= static_cast<double>(ds.size());
  return acc;
}

ProbRows coalition_rows(const PredictorHandle& q, const LabeledDataset& ds, const Coalition& c,
                        const BandPartition& p, const AbsenceBaseline& b,
                        const EvaluationOptions& opts) {
  check_inputs(ds, p, q);
  ProbRows rows(ds.size());
  const Coalition one[] = {c};
  for_each_prediction(q, ds, one, p, b, opts,
                      [&](std::size_t, std::size_t item, const ProbRow& row) { rows[item] = row; });
  return rows;
}

double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

double floored_log(double p) { return std::log(std::clamp(p, kProbabilityFloor, 1.0)); }

double expected_log_likelihood(const PredictorHandle& q, const LabeledDataset& ds,
                               const Coalition& c, const BandPartition& p,
                               const AbsenceBaseline& b, const EvaluationOptions& opts) {
  const Coalition one[] = {c};
  return mean_log_likelihoods(q, ds, one, p, b, opts)[0];
}

double evaluate_characteristic(const PredictorHandle& q, const LabeledDataset& ds,
                               const Coalition& c, const BandPartition& p,
                               const AbsenceBaseline& b, const EvaluationOptions& opts) {
  if (c.m_bands() != p.m_bands()) {
    throw InvalidInputError("coalition and partition disagree on the band count");
  }
  if (c.bits() == 0) {
    check_inputs(ds, p, q);
    return 0.0;
  }
  const Coalition pair[] = {Coalition::empty(c.m_bands()), c};
  const auto ll = mean_log_likelihoods(q, ds, pair, p, b, opts);
  return ll[1] - ll[0];
}

GameTable build_game_table(const PredictorHandle& q, const LabeledDataset& ds,
                           const BandPartition& p, const AbsenceBaseline& b,
                           const EvaluationOptions& opts) {
  const std::size_t m = p.m_bands();
  if (m > kMaxTableBands) {
    throw ConfigurationError("a full game table over " + std::to_string(m) +
                             " bands needs 2^" + std::to_string(m) +
                             " evaluations; the limit is " + std::to_string(kMaxTableBands));
  }
  const std::size_t n = std::size_t{1} << m;
  std::vector<Coalition> coalitions;
  coalitions.reserve(n);
  for (std::size_t s = 0; s < n; ++s) coalitions.emplace_back(m, s);

  const auto ll = mean_log_likelihoods(q, ds, coalitions, p, b, opts);
  GameTable g;
  g.m_bands = m;
  g.dummy_constant = ll[0];
  g.values.resize(n);
  g.values[0] = 0.0;
  for (std::size_t s = 1; s < n; ++s) g.values[s] = ll[s] - ll[0];
  return g;
}

InfoIdentityAudit info_identity_audit(const PredictorHandle& q, const LabeledDataset& ds,
                                      const Coalition& c, const BandPartition& p,
                                      const AbsenceBaseline& b, const EvaluationOptions& opts) {
  EvaluationOptions local = opts;
  if (!local.cache) local.cache = std::make_shared<PredictionCache>();

  const ProbRows rows = coalition_rows(q, ds, c, p, b, local);
  const std::size_t classes = ds.num_classes();
  const double n = static_cast<double>(ds.size());

  std::vector<double> marginal(classes, 0.0);
  double conditional_entropy = 0.0;
  double kl = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& label = ds.items[i].label;
    for (std::size_t y = 0; y < classes; ++y) {
      marginal[y] += label[y] / n;
      conditional_entropy -= plogp(label[y]) / n;
      if (label[y] > 0.0) kl += label[y] * (std::log(label[y]) - floored_log(rows[i][y])) / n;
    }
  }
  double label_entropy = 0.0;
  for (double m : marginal) label_entropy -= plogp(m);

  const double constant = expected_log_likelihood(q, ds, Coalition::empty(c.m_bands()), p, b, local);
  const double v = evaluate_characteristic(q, ds, c, p, b, local);

  InfoIdentityAudit audit;
  audit.mutual_information = label_entropy - conditional_entropy;
  audit.mean_pointwise_kl = kl;
  audit.label_entropy = label_entropy;
  audit.v_plus_c = v + constant;
  audit.lhs_minus_rhs = audit.mutual_information -
                        (audit.mean_pointwise_kl + audit.label_entropy + audit.v_plus_c);
  return audit;
}

ConvergenceReport convergence_scan(const PredictorHandle& q, const LabeledDataset& ds,
                                   const BandPartition& p, const AbsenceBaseline& b,
                                   std::span<const std::size_t> sample_counts,
                                   std::uint64_t seed, const EvaluationOptions& opts) {
  if (sample_counts.empty()) throw InvalidInputError("convergence scan needs sample counts");
  for (std::size_t i = 0; i < sample_counts.size(); ++i) {
    const std::size_t k = sample_counts[i];
    if (k < 1) throw InvalidInputError("sample counts must be positive");
    if (k > ds.size()) {
      throw InvalidInputError("sample count " + std::to_string(k) + " exceeds the dataset size " +
                              std::to_string(ds.size()));
    }
    if (i > 0 && k < sample_counts[i - 1]) {
      throw InvalidInputError("sample counts must be non-decreasing");
    }
  }

  EvaluationOptions local = opts;
  if (!local.cache) local.cache = std::make_shared<PredictionCache>();
  const auto order = shuffled_indices(ds.size(), seed);

  ConvergenceReport report;
  report.sample_counts.assign(sample_counts.begin(), sample_counts.end());
  for (std::size_t k : sample_counts) {
    const LabeledDataset prefix = ds.subset(std::span(order).first(k));
    const auto importance = spectral_importance(build_game_table(q, prefix, p, b, local));
    report.raw_per_k.push_back(importance.raw);
    report.sid_per_k.push_back(importance.normalized);
  }
  const double m = static_cast<double>(p.m_bands());
  for (std::size_t i = 0; i + 1 < report.sid_per_k.size(); ++i) {
    double l1 = 0.0;
    for (std::size_t j = 0; j < report.sid_per_k[i].size(); ++j) {
      l1 += std::abs(report.sid_per_k[i + 1][j] - report.sid_per_k[i][j]);
    }
    report.errors.push_back(l1 / m);
  }
  return report;
}

}  // namespace iaside

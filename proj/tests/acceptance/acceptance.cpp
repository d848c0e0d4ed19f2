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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "iaside/characteristic.hpp"
#include "iaside/correlate.hpp"
#include "iaside/filtering.hpp"
#include "iaside/fourier.hpp"
#include "iaside/game.hpp"
#include "iaside/perturb.hpp"
#include "iaside/spectral.hpp"
#include "iaside/synthetic.hpp"
#include "iaside/toys.hpp"

#include "oracles.hpp"
#include "test_models.hpp"

using namespace iaside;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

GameTable table_of(std::size_t m, std::vector<double> v) {
  GameTable g;
  g.m_bands = m;
  g.values = std::move(v);
  return g;
}

const LabeledDataset& synthetic_100() {
  static const LabeledDataset ds = [] {
    SyntheticSpec s;
    s.items = 100;
    s.classes = 4;
    s.shape = {1, 64, 64};
    s.seed = 1;
    return synthetic_dataset(s);
  }();
  return ds;
}

Outcome shapley_axioms() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t m = 8;
  std::mt19937_64 rng(2024);
  double eff = 0.0, dummy = 0.0, sym = 0.0, lin = 0.0;
  for (int game = 0; game < 100; ++game) {
    const auto u = oracle::random_game(m, rng);
    const auto w = oracle::random_game(m, rng);
    const auto psi = shapley_values(table_of(m, u));
    double total = 0.0;
    for (double p : psi) total += p;
    eff = std::max(eff, std::abs(total - u.back()));

    // Player d contributes a fixed c to every coalition.
    const std::size_t d = static_cast<std::size_t>(game) % m;
    const double c = (game % 3 == 0) ? 0.0 : 0.37;
    std::vector<double> vd(u.size());
    for (std::size_t s = 0; s < u.size(); ++s) {
      vd[s] = u[s & ~(1ULL << d)] - u[0] + (((s >> d) & 1U) ? c : 0.0);
    }
    dummy = std::max(dummy, std::abs(shapley_values(table_of(m, vd))[d] - c));

    // Players i and j are interchangeable.
    const std::size_t i = d, j = (d + 3) % m;
    std::vector<double> vs(u.size());
    for (std::size_t s = 0; s < u.size(); ++s) {
      std::size_t t = s & ~((1ULL << i) | (1ULL << j));
      if ((s >> i) & 1U) t |= 1ULL << j;
      if ((s >> j) & 1U) t |= 1ULL << i;
      vs[s] = 0.5 * (u[s] + u[t]);
    }
    const auto ps = shapley_values(table_of(m, vs));
    sym = std::max(sym, std::abs(ps[i] - ps[j]));

    const double a = 1.5, b = -0.25;
    std::vector<double> vl(u.size());
    for (std::size_t s = 0; s < u.size(); ++s) vl[s] = a * u[s] + b * w[s];
    const auto pu = psi;
    const auto pw = shapley_values(table_of(m, w));
    const auto pl = shapley_values(table_of(m, vl));
    for (std::size_t k = 0; k < m; ++k) lin = std::max(lin, std::abs(pl[k] - (a * pu[k] + b * pw[k])));
  }
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = eff < 1e-9 && dummy < 1e-12 && sym < 1e-12 && lin < 1e-12 && t < 5.0;
  o.detail = "efficiency " + num(eff) + ", dummy " + num(dummy) + ", symmetry " + num(sym) +
             ", linearity " + num(lin) + ", " + num(t) + " s";
  return o;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (std::size_t m = 2; m <= 5; ++m) {
    for (int game = 0; game < 50; ++game) {
      const auto v = oracle::random_game(m, rng);
      const auto formula = shapley_values(table_of(m, v));
      worst = std::max(worst, max_abs_diff(formula, oracle::shapley_by_orderings(v, m)));
      worst = std::max(worst, max_abs_diff(formula, shapley_permutation_oracle(table_of(m, v))));
    }
  }
  // Player 0 holds the only left glove, players 1 and 2 hold right gloves.
  std::vector<double> glove(8, 0.0);
  for (std::size_t s = 0; s < 8; ++s) glove[s] = ((s & 1U) && (s & 6U)) ? 1.0 : 0.0;
  const auto g = shapley_values(table_of(3, glove));
  const double gerr = max_abs_diff(g, {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0});
  Outcome o;
  o.pass = worst < 1e-12 && gerr < 1e-12;
  o.detail = "max |formula - oracle| " + num(worst) + " over M=2..5; glove (" + num(g[0]) + ", " +
             num(g[1]) + ", " + num(g[2]) + ")";
  return o;
}

Outcome signal_processing() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ImageTensor> images;
  {
    std::vector<double> px(3 * 64 * 64);
    for (double& p : px) p = u(rng);
    images.emplace_back(Shape{3, 64, 64}, px);
    Rng r(5);
    images.push_back(power_law_image({1, 64, 64}, r));
  }
  double roundtrip = 0.0, parseval = 0.0, identity = 0.0, bandsum = 0.0;
  bool masks_exact = true;
  for (const auto& x : images) {
    const Spectrum f = dft2(x);
    const ImageTensor back = idft2(f);
    roundtrip = std::max(roundtrip, max_abs_diff({x.data().begin(), x.data().end()},
                                                 {back.data().begin(), back.data().end()}));
    double es = 0.0;
    for (const auto& c : f.coeffs()) es += std::norm(c);
    es /= static_cast<double>(x.shape().plane());
    parseval = std::max(parseval, std::abs(es - x.energy()) / x.energy());

    for (auto scheme : {PartitionScheme::LInf, PartitionScheme::L2}) {
      const std::size_t m = 8;
      const auto part = band_partition(m, scheme, 64, 64);
      std::vector<int> cover(64 * 64, 0);
      std::vector<double> sum(x.data().size(), 0.0);
      for (std::size_t b = 0; b < m; ++b) {
        const auto mask = transfer_mask(part, Coalition::of(m, {b}));
        for (std::size_t k = 0; k < cover.size(); ++k) cover[k] += mask.bits()[k];
        const auto xb = coalition_filter(x, Coalition::of(m, {b}), part, ZerosBaseline{});
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += xb.data()[k];
      }
      masks_exact = masks_exact && std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; });
      bandsum = std::max(bandsum, max_abs_diff(sum, {x.data().begin(), x.data().end()}));
      const ComplexGaussianBaseline noise{0.0, 1.0, 3};
      const auto grand = coalition_filter(x, Coalition::grand(m), part, noise);
      identity = std::max(identity, max_abs_diff({grand.data().begin(), grand.data().end()},
                                                 {x.data().begin(), x.data().end()}));
    }
  }
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = roundtrip < 1e-6 && parseval < 1e-9 && masks_exact && identity < 1e-6 &&
           bandsum < 1e-5 && t < 10.0;
  o.detail = "round-trip " + num(roundtrip) + ", Parseval rel " + num(parseval) + ", masks " +
             (masks_exact ? "partition exactly" : "DO NOT partition") + ", grand identity " +
             num(identity) + ", band sum " + num(bandsum) + ", " + num(t) + " s";
  return o;
}

Outcome information_identity() {
  std::mt19937_64 rng(314);
  double worst_audit = 0.0, worst_independent = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t items = 2 + rng() % 15;
    const std::size_t classes = 2 + rng() % 4;
    const auto ds = testing_models::random_dataset(items, classes, {1, 8, 8}, rng(), trial % 2 == 0);
    const PredictorHandle q(std::make_shared<testing_models::HashedRandomPredictor>(classes, rng()));
    const std::size_t m = 4;
    const auto part = band_partition(m, PartitionScheme::LInf, 8, 8);
    const Coalition c(m, rng() % 16);
    const AbsenceBaseline b = trial % 3 == 0 ? AbsenceBaseline{ComplexGaussianBaseline{0.0, 0.5, 1}}
                                             : AbsenceBaseline{ZerosBaseline{}};
    const auto audit = info_identity_audit(q, ds, c, part, b);
    worst_audit = std::max(worst_audit, std::abs(audit.lhs_minus_rhs));

    // Independent evaluation of both sides on the empirical distribution.
    const auto rows = q.predict_batch(coalition_filter_set(ds.images(), c, part, b));
    std::vector<double> py(classes, 0.0);
    for (const auto& it : ds.items) {
      for (std::size_t y = 0; y < classes; ++y) py[y] += it.label[y] / static_cast<double>(items);
    }
    double mi = 0.0, kl = 0.0, h = 0.0, ll = 0.0;
    for (std::size_t i = 0; i < items; ++i) {
      for (std::size_t y = 0; y < classes; ++y) {
        const double p = ds.items[i].label[y];
        if (p <= 0.0) continue;
        const double lq = std::log(std::clamp(rows[i][y], 1e-12, 1.0));
        mi += p * std::log(p / py[y]) / static_cast<double>(items);
        kl += p * (std::log(p) - lq) / static_cast<double>(items);
        ll += p * lq / static_cast<double>(items);
      }
    }
    for (double p : py) {
      if (p > 0.0) h -= p * std::log(p);
    }
    const double v_plus_c = expected_log_likelihood(q, ds, c, part, b);
    worst_independent = std::max(worst_independent, std::abs(mi - (kl + h + v_plus_c)));
    worst_independent = std::max(worst_independent, std::abs(v_plus_c - ll));
  }
  Outcome o;
  o.pass = worst_audit < 1e-9 && worst_independent < 1e-9;
  o.detail = "max residual " + num(worst_audit) + " (audit), " + num(worst_independent) +
             " (independent) over 20 datasets";
  return o;
}

Outcome uniform_predictor() {
  SyntheticSpec s;
  s.items = 200;
  s.classes = 4;
  s.seed = 17;
  const auto ds = synthetic_dataset(s);
  const PredictorHandle q(std::make_shared<UniformPredictor>(4));
  const auto part = band_partition(8, PartitionScheme::LInf, 64, 64);
  const auto sid = spectral_importance(build_game_table(q, ds, part, ZerosBaseline{}));
  double dev = 0.0;
  for (double v : sid.normalized) dev = std::max(dev, std::abs(v - 0.125));
  const double score = srs(sid.normalized, {});
  Outcome o;
  o.pass = dev < 0.05 && score < 0.05;
  o.detail = "max |sid - 1/8| " + num(dev) + ", SRS " + num(score);
  return o;
}

Outcome low_vs_high_band() {
  const auto& ds = synthetic_100();
  const auto part = band_partition(8, PartitionScheme::LInf, 64, 64);
  const auto low = make_toy("band:0,1", ds);
  const auto high = make_toy("band:6,7", ds);
  const auto sl = spectral_importance(build_game_table(low, ds, part, ZerosBaseline{}));
  const auto sh = spectral_importance(build_game_table(high, ds, part, ZerosBaseline{}));
  const double mass = sl.normalized[0] + sl.normalized[1];
  const double srs_low = srs(sl.normalized, {});
  const double srs_high = srs(sh.normalized, {});
  const auto noise = parse_perturbation("white:rho=0.1");
  const double mpe_low = mpe(low, ds, noise, 5);
  const double mpe_high = mpe(high, ds, noise, 5);
  Outcome o;
  o.pass = mass >= 0.8 && srs_low > srs_high && mpe_low < mpe_high;
  o.detail = "low-band mass in bands 0-1 " + num(mass) + ", SRS low " + num(srs_low) + " > high " +
             num(srs_high) + ", mPE low " + num(mpe_low) + " < high " + num(mpe_high);
  return o;
}

Outcome correlation() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& ds = synthetic_100();
  const auto part = band_partition(8, PartitionScheme::LInf, 64, 64);
  const auto noise = parse_perturbation("white:rho=0.1");
  const auto blur = parse_perturbation("blur:k=3");
  std::vector<RobustnessRecord> records;
  std::string active;
  for (int k = 0; k < 6; ++k) {
    active += (k ? "," : "") + std::to_string(k);
    const auto q = make_toy("band:" + active, ds);
    RobustnessRecord r;
    r.model_id = q.id();
    r.sid = spectral_importance(build_game_table(q, ds, part, ZerosBaseline{}));
    r.srs = srs(r.sid.normalized, {});
    r.mpe[noise.id()] = mpe(q, ds, noise, 11);
    r.mpe[blur.id()] = mpe(q, ds, blur, 11);
    records.push_back(std::move(r));
  }
  const auto cn = correlate(records, noise.id());
  const auto cb = correlate(records, blur.id());
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = cn.spearman <= -0.8 && cb.spearman <= -0.8 && t < 300.0;
  o.detail = "Spearman " + num(cn.spearman) + " (white noise), " + num(cb.spearman) +
             " (blur) across 6 nested models, " + num(t) + " s";
  return o;
}

Outcome convergence() {
  SyntheticSpec s;
  s.items = 512;
  s.classes = 4;
  s.seed = 11;
  const auto ds = synthetic_dataset(s);
  const auto part = band_partition(8, PartitionScheme::LInf, 64, 64);
  const auto q = make_toy("band:0,1,2,3", ds);
  const std::vector<std::size_t> counts{25, 50, 100, 200};
  Outcome o;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto r = convergence_scan(q, ds, part, ZerosBaseline{}, counts, seed);
    const bool ok = r.errors.back() < r.errors.front();
    o.pass = o.pass && ok;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(seed) +
                ": " + num(r.errors.front()) + " -> " + num(r.errors.back());
  }
  return o;
}

Outcome white_noise_esd() {
  const double sigma = 0.1;
  const ImageTensor zero(Shape{1, 64, 64});
  const auto spec = parse_perturbation("white:sigma=0.1");
  std::vector<double> mean;
  for (int draw = 0; draw < 100; ++draw) {
    const auto p = apply_perturbation(zero, spec, derive_seed(42, static_cast<std::uint64_t>(draw)));
    const auto esd = esd_radial(p.delta, 16);
    if (mean.empty()) mean.assign(esd.size(), 0.0);
    for (std::size_t b = 0; b < esd.size(); ++b) mean[b] += esd[b].density / 100.0;
  }
  double worst = 0.0;
  for (double v : mean) worst = std::max(worst, std::abs(v - sigma * sigma) / (sigma * sigma));
  Outcome o;
  o.pass = worst < 0.2;
  o.detail = "max relative deviation from sigma^2 " + num(worst) + " over " +
             std::to_string(mean.size()) + " radii";
  return o;
}

Outcome srs_arithmetic() {
  const SrsConfig cfg{0.75, 8};
  const std::vector<double> uniform(8, 0.125);
  std::vector<double> e0(8, 0.0), e7(8, 0.0);
  e0[0] = 1.0;
  e7[7] = 1.0;
  const double su = srs(uniform, cfg);
  const double s0 = srs(e0, cfg);
  const double s7 = srs(e7, cfg);
  const double oracle_gap = std::max(std::abs(s0 - oracle::srs(e0, 0.75)),
                                     std::abs(s7 - oracle::srs(e7, 0.75)));
  Outcome o;
  o.pass = su == 0.0 && std::abs(s0 - 0.5217) <= 1e-4 && oracle_gap < 1e-12;
  o.detail = "uniform " + num(su) + ", e0 " + std::to_string(s0) + ", e7 " + std::to_string(s7) +
             ", |library - independent| " + num(oracle_gap);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"shapley-axioms", shapley_axioms},
      {"oracle-equivalence", oracle_equivalence},
      {"signal-processing", signal_processing},
      {"information-identity", information_identity},
      {"uniform-predictor-sid", uniform_predictor},
      {"low-vs-high-band", low_vs_high_band},
      {"srs-mpe-correlation", correlation},
      {"convergence", convergence},
      {"white-noise-esd", white_noise_esd},
      {"srs-arithmetic", srs_arithmetic},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

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

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "iaside/error.hpp"
#include "iaside/plots.hpp"
#include "iaside/results.hpp"
#include "iaside/run.hpp"

namespace {

using iaside::ResultsDocument;
using iaside::RunConfig;

struct Options {
  RunConfig cfg;
  std::string partition = "linf";
  std::string out;
  std::string plots;
  std::string sid_file;
};

void shared_flags(CLI::App* sub, Options& o, bool model) {
  if (model) {
    sub->add_option("--model", o.cfg.model, "toy:NAME | cmd:COMMAND | tcp:HOST:PORT");
  }
  sub->add_option("--dataset", o.cfg.dataset, "dataset manifest (JSON)");
  sub->add_option("--bands", o.cfg.bands, "number of spectral bands M")->capture_default_str();
  sub->add_option("--samples", o.cfg.samples, "number of images K")->capture_default_str();
  sub->add_option("--baseline", o.cfg.baseline, "zeros | cgauss[:mu=M][:sigma=S] | replace")
      ->capture_default_str();
  sub->add_option("--partition", o.partition, "linf | l2")->capture_default_str();
  sub->add_option("--beta", o.cfg.beta, "SRS weight decay")->capture_default_str();
  sub->add_option("--seed", o.cfg.seed, "run seed")->capture_default_str();
  sub->add_option("--threads", o.cfg.threads, "worker threads (0 = hardware count)")
      ->capture_default_str();
  sub->add_option("--out", o.out, "results file (default: standard output)");
}

void emit(const ResultsDocument& doc, const Options& o) {
  if (o.out.empty()) {
    std::cout << iaside::to_json(doc);
  } else {
    iaside::write_results(o.out, doc);
  }
  if (!o.plots.empty()) {
    for (const auto& p : iaside::emit_plots(doc, o.plots)) std::cerr << "wrote " << p.string() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral importance and robustness of image classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", iaside::kToolVersion);
  Options o;

  auto* sid = app.add_subcommand("sid", "spectral importance distribution and SRS of a model");
  shared_flags(sid, o, true);
  sid->add_option("--perturbation", o.cfg.perturbations,
                  "also measure mPE under this perturbation (repeatable)");
  sid->add_option("--plots", o.plots, "directory for SVG plots");

  auto* srs = app.add_subcommand("srs", "SRS of an existing SID document");
  srs->add_option("--sid", o.sid_file, "SID results document")->required();
  srs->add_option("--beta", o.cfg.beta, "SRS weight decay")->capture_default_str();
  srs->add_option("--out", o.out, "results file (default: standard output)");

  auto* snr = app.add_subcommand("snr", "dataset spectral SNR under perturbations");
  shared_flags(snr, o, false);
  snr->add_option("--perturbation", o.cfg.perturbations, "perturbation spec (repeatable)");
  snr->add_option("--radii", o.cfg.radii, "radial bins")->capture_default_str();

  auto* mpe = app.add_subcommand("mpe", "mean prediction error under perturbations");
  shared_flags(mpe, o, true);
  mpe->add_option("--perturbation", o.cfg.perturbations, "perturbation spec (repeatable)");

  auto* conv = app.add_subcommand("converge", "SID convergence over growing sample counts");
  shared_flags(conv, o, true);
  conv->add_option("--counts", o.cfg.sample_counts, "sample counts, e.g. 25,50,100,200")
      ->delimiter(',');

  auto* report = app.add_subcommand("report", "correlate SRS with mPE across models and plot");
  report->add_option("--results", o.cfg.inputs, "SID / mPE results documents")->required();
  report->add_option("--perturbation", o.cfg.perturbations, "perturbation ids to correlate");
  report->add_option("--out", o.out, "results file (default: standard output)");
  report->add_option("--plots", o.plots, "directory for SVG plots");

  CLI11_PARSE(app, argc, argv);

  try {
    o.cfg.partition = iaside::parse_partition_scheme(o.partition);
    ResultsDocument doc;
    if (sid->parsed()) {
      o.cfg.command = "sid";
      doc = iaside::run_sid(o.cfg);
    } else if (srs->parsed()) {
      o.cfg.command = "srs";
      o.cfg.inputs = {o.sid_file};
      doc = iaside::run_srs(o.cfg, iaside::read_results(o.sid_file));
    } else if (snr->parsed()) {
      o.cfg.command = "snr";
      doc = iaside::run_snr(o.cfg);
    } else if (mpe->parsed()) {
      o.cfg.command = "mpe";
      doc = iaside::run_mpe(o.cfg);
    } else if (conv->parsed()) {
      o.cfg.command = "converge";
      doc = iaside::run_converge(o.cfg);
    } else {
      o.cfg.command = "report";
      std::vector<ResultsDocument> inputs;
      for (const auto& f : o.cfg.inputs) inputs.push_back(iaside::read_results(f));
      doc = iaside::run_report(o.cfg, inputs);
    }
    emit(doc, o);
  } catch (const std::exception& e) {
    std::cerr << "iaside: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

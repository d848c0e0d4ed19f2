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

#include "iaside/results.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iterator>
#include <limits>

#include "json.hpp"

#include "iaside/atomic_file.hpp"
#include "iaside/error.hpp"

namespace iaside {
namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json numbers(const std::vector<double>& vs) {
  Json a = Json::array();
  for (double v : vs) a.push_back(number(v));
  return a;
}

double get_number(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ConfigurationError("results document: expected a number, found \"" + s + "\"");
  }
  if (!j.is_number()) throw ConfigurationError("results document: expected a number");
  return j.get<double>();
}

std::vector<double> get_numbers(const Json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_number(v));
  return out;
}

void dump_double(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

bool is_flat(const Json& j) {
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

void dump(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * depth + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump(out, it.value(), depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty() || is_flat(j)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(out, j[i], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(out, j[i], depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      dump_double(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["model"] = c.model;
  j["dataset"] = c.dataset;
  j["bands"] = c.bands;
  j["samples"] = c.samples;
  j["baseline"] = c.baseline;
  j["partition"] = to_string(c.partition);
  j["beta"] = c.beta;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["perturbations"] = c.perturbations;
  j["radii"] = c.radii;
  j["sample_counts"] = c.sample_counts;
  j["inputs"] = c.inputs;
  return j;
}

RunConfig config_from(const Json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.model = j.at("model").get<std::string>();
  c.dataset = j.at("dataset").get<std::string>();
  c.bands = j.at("bands").get<std::size_t>();
  c.samples = j.at("samples").get<std::size_t>();
  c.baseline = j.at("baseline").get<std::string>();
  c.partition = parse_partition_scheme(j.at("partition").get<std::string>());
  c.beta = get_number(j.at("beta"));
  c.seed = j.at("seed").get<std::uint64_t>();
  c.threads = j.at("threads").get<std::size_t>();
  c.perturbations = j.at("perturbations").get<std::vector<std::string>>();
  c.radii = j.at("radii").get<std::size_t>();
  c.sample_counts = j.at("sample_counts").get<std::vector<std::size_t>>();
  c.inputs = j.at("inputs").get<std::vector<std::string>>();
  return c;
}

Json build(const ResultsDocument& doc, bool meta) {
  Json j;
  j["schema"] = "iaside.results";
  j["schema_version"] = kSchemaVersion;
  if (meta) {
    j["tool_version"] = doc.tool_version;
    j["timestamp"] = doc.timestamp;
  }
  j["config"] = config_json(doc.config);
  if (doc.sid) {
    j["sid"] = {{"raw", numbers(doc.sid->raw)}, {"normalized", numbers(doc.sid->normalized)}};
  }
  if (doc.srs) j["srs"] = number(*doc.srs);
  if (doc.v_table) {
    const auto& g = *doc.v_table;
    Json codes = Json::array();
    for (std::size_t s = 0; s < g.values.size(); ++s) codes.push_back(Coalition(g.m_bands, s).code());
    j["v_table"] = {{"m_bands", g.m_bands},
                    {"dummy_constant", number(g.dummy_constant)},
                    {"coalitions", codes},
                    {"values", numbers(g.values)}};
  }
  if (doc.convergence) {
    const auto& r = *doc.convergence;
    Json raw = Json::array();
    Json sid = Json::array();
    for (const auto& v : r.raw_per_k) raw.push_back(numbers(v));
    for (const auto& v : r.sid_per_k) sid.push_back(numbers(v));
    j["convergence"] = {{"sample_counts", r.sample_counts},
                        {"raw", raw},
                        {"sid", sid},
                        {"errors", numbers(r.errors)}};
  }
  if (doc.records) {
    Json recs = Json::array();
    for (const auto& r : *doc.records) {
      Json e;
      e["model"] = r.model_id;
      if (!std::isnan(r.srs)) e["srs"] = number(r.srs);
      Json m = Json::object();
      for (const auto& [k, v] : r.mpe) m[k] = number(v);
      e["mpe"] = m;
      if (!r.sid.normalized.empty()) e["sid"] = numbers(r.sid.normalized);
      recs.push_back(std::move(e));
    }
    j["records"] = recs;
  }
  if (!doc.correlations.empty()) {
    Json cs = Json::object();
    for (const auto& [k, c] : doc.correlations) {
      cs[k] = {{"pearson", number(c.pearson)}, {"spearman", number(c.spearman)}, {"n", c.n}};
    }
    j["correlations"] = cs;
  }
  if (!doc.snr.empty()) {
    Json curves = Json::array();
    for (const auto& c : doc.snr) {
      std::vector<double> r, s, d;
      for (const auto& p : c.points) {
        r.push_back(p.radius);
        s.push_back(p.snr);
        d.push_back(p.snr_db);
      }
      curves.push_back({{"perturbation", c.perturbation},
                        {"radius", numbers(r)},
                        {"snr", numbers(s)},
                        {"snr_db", numbers(d)}});
    }
    j["snr"] = curves;
  }
  return j;
}

std::string render(const Json& j) {
  std::string out;
  dump(out, j, 0);
  out += "\n";
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (bands < 1 || bands > kMaxTableBands) {
    throw ConfigurationError("bands must lie in [1, " + std::to_string(kMaxTableBands) +
                             "], got " + std::to_string(bands));
  }
  if (samples < 1) throw ConfigurationError("samples must be at least 1");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ConfigurationError("beta must lie in (0, 1)");
  }
  if (radii < 1) throw ConfigurationError("radii must be at least 1");
}

std::string to_json(const ResultsDocument& doc) { return render(build(doc, true)); }

std::string numeric_payload(const ResultsDocument& doc) { return render(build(doc, false)); }

ResultsDocument parse_results(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigurationError(std::string("results document is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != "iaside.results") {
    throw ConfigurationError("not an iaside results document");
  }
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw ConfigurationError("unsupported results schema version");
  }
  ResultsDocument doc;
  try {
    doc.tool_version = j.value("tool_version", "");
    doc.timestamp = j.value("timestamp", "");
    doc.config = config_from(j.at("config"));
    if (j.contains("sid")) {
      doc.sid = SpectralImportance{get_numbers(j["sid"].at("raw")),
                                   get_numbers(j["sid"].at("normalized"))};
    }
    if (j.contains("srs")) doc.srs = get_number(j["srs"]);
    if (j.contains("v_table")) {
      const auto& t = j["v_table"];
      GameTable g;
      g.m_bands = t.at("m_bands").get<std::size_t>();
      g.dummy_constant = get_number(t.at("dummy_constant"));
      g.values = get_numbers(t.at("values"));
      g.check_complete();
      doc.v_table = std::move(g);
    }
    if (j.contains("convergence")) {
      const auto& c = j["convergence"];
      ConvergenceReport r;
      r.sample_counts = c.at("sample_counts").get<std::vector<std::size_t>>();
      for (const auto& v : c.at("raw")) r.raw_per_k.push_back(get_numbers(v));
      for (const auto& v : c.at("sid")) r.sid_per_k.push_back(get_numbers(v));
      r.errors = get_numbers(c.at("errors"));
      doc.convergence = std::move(r);
    }
    if (j.contains("records")) {
      std::vector<RobustnessRecord> recs;
      for (const auto& e : j["records"]) {
        RobustnessRecord r;
        r.model_id = e.at("model").get<std::string>();
        r.srs = e.contains("srs") ? get_number(e["srs"]) : std::numeric_limits<double>::quiet_NaN();
        for (auto it = e.at("mpe").begin(); it != e.at("mpe").end(); ++it) {
          r.mpe[it.key()] = get_number(it.value());
        }
        if (e.contains("sid")) r.sid.normalized = get_numbers(e["sid"]);
        recs.push_back(std::move(r));
      }
      doc.records = std::move(recs);
    }
    if (j.contains("correlations")) {
      for (auto it = j["correlations"].begin(); it != j["correlations"].end(); ++it) {
        const auto& c = it.value();
        doc.correlations[it.key()] = {get_number(c.at("pearson")), get_number(c.at("spearman")),
                                      c.at("n").get<std::size_t>()};
      }
    }
    if (j.contains("snr")) {
      for (const auto& c : j["snr"]) {
        SnrCurve curve;
        curve.perturbation = c.at("perturbation").get<std::string>();
        const auto r = get_numbers(c.at("radius"));
        const auto s = get_numbers(c.at("snr"));
        const auto d = get_numbers(c.at("snr_db"));
        if (s.size() != r.size() || d.size() != r.size()) {
          throw ConfigurationError("snr curve columns differ in length");
        }
        for (std::size_t i = 0; i < r.size(); ++i) curve.points.push_back({r[i], s[i], d[i]});
        doc.snr.push_back(std::move(curve));
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigurationError(std::string("malformed results document: ") + e.what());
  }
  return doc;
}

ResultsDocument read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_results(text);
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(path.string() + ": " + e.what());
  }
}

void write_results(const std::filesystem::path& path, const ResultsDocument& doc) {
  write_file_atomic(path, to_json(doc));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace iaside

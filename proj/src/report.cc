// Copyright 2026 The Authors.
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

#include "interp_cert/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "interp_cert/errors.h"

namespace interp_cert {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

json ReadJson(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

json SpreadJson(const Spread& s) {
  return {{"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min},
          {"max", s.max},   {"count", s.count}};
}

json FailureJson(const RunFailure& f) {
  json j = {{"procedure", f.procedure_id},
            {"robustness", f.robustness_id},
            {"seed", f.seed},
            {"error_type", f.error_type},
            {"message", f.message}};
  if (f.fold) j["fold"] = *f.fold;
  return j;
}

RunFailure FailureFromJson(const json& j) {
  RunFailure f;
  f.procedure_id = j.at("procedure").get<std::string>();
  f.robustness_id = j.at("robustness").get<std::string>();
  f.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("fold")) f.fold = j["fold"].get<int>();
  f.error_type = j.at("error_type").get<std::string>();
  f.message = j.at("message").get<std::string>();
  return f;
}

std::string Pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string RenderRows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      line += c + 1 == rows[r].size() ? rows[r][c] : Pad(rows[r][c], widths[c]) + "  ";
    }
    out << line << "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (const std::size_t w : widths) total += w + 2;
      out << std::string(total - 2, '-') << "\n";
    }
  }
  return out.str();
}

}  // namespace

std::string CertificateFileText(const InterpretabilityCertificate& c) {
  return ToJson(c).dump(2) + "\n";
}

std::string FormatFixed3(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

std::string FormatGamma(const Gamma& gamma) {
  if (!gamma) return "undef";
  if (*gamma == 0.0) return "0";
  return FormatFixed3(*gamma);
}

json SummaryJson(const Report& report) {
  json robustness = json::array();
  for (std::size_t i = 0; i < report.robustness_ids.size(); ++i) {
    robustness.push_back({{"id", report.robustness_ids[i]},
                          {"name", report.robustness_names[i]}});
  }
  json failures = json::array();
  for (const RunFailure& f : report.failures) failures.push_back(FailureJson(f));
  json aggregated = json::array();
  for (const AggregatedCertificate& a : report.aggregated) {
    aggregated.push_back(
        {{"certificate", ToJson(a.certificate)},
         {"members", a.members},
         {"delta_spread", SpreadJson(a.delta_spread)},
         {"gamma_spread", a.gamma_spread ? SpreadJson(*a.gamma_spread) : json()},
         {"undefined_gamma_members", a.undefined_gamma_members}});
  }
  json multi = json::array();
  for (const MultiDistributionEntry& m : report.multi_distribution) {
    multi.push_back({{"procedure", m.procedure_id},
                     {"delta", m.delta},
                     {"gamma", m.gamma ? json(*m.gamma) : json("undefined")},
                     {"robustness", m.robustness_ids}});
  }
  json structure = json::array();
  for (const OrderStructure& s : report.structure) {
    json edges = json::array();
    for (const auto& [a, b] : s.edges) {
      edges.push_back({{"dominates", s.procedure_ids[a]},
                       {"dominated", s.procedure_ids[b]}});
    }
    json classes = json::array();
    for (const auto& cls : s.classes) {
      json members = json::array();
      for (const int i : cls) members.push_back(s.procedure_ids[i]);
      classes.push_back(members);
    }
    structure.push_back({{"robustness", s.robustness_id},
                         {"dominance_edges", edges},
                         {"equivalence_classes", classes}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"version", report.version},
          {"name", report.name},
          {"generated_at", report.generated_at},
          {"loss", report.loss_id},
          {"metric", report.metric_name},
          {"target_model", report.target_model_id},
          {"alpha", report.alpha},
          {"aggregation", AggregationName(report.aggregation)},
          {"seeds", report.seeds},
          {"procedures", report.procedure_ids},
          {"robustness", robustness},
          {"certificates", report.certificate_files},
          {"failures", failures},
          {"aggregated", aggregated},
          {"multi_distribution", multi},
          {"structure", structure},
          {"run_spec", report.run_spec}};
}

void WriteReport(const Report& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "certificates", ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < report.certificates.size(); ++i) {
    WriteText(dir / "certificates" / (report.certificate_files[i] + ".json"),
              CertificateFileText(report.certificates[i]));
  }
  WriteText(dir / "summary.json", SummaryJson(report).dump(2) + "\n");
  WriteText(dir / "table.txt", RenderTable(report));
}

Report LoadReport(const fs::path& dir) {
  const json summary = ReadJson(dir / "summary.json");
  Report report;
  try {
    report.name = summary.value("name", std::string());
    report.version = summary.value("version", std::string(kVersion));
    report.generated_at = summary.value("generated_at", std::string());
    report.run_spec = summary.value("run_spec", json::object());
    report.loss_id = summary.at("loss").get<std::string>();
    report.metric_name = summary.at("metric").get<std::string>();
    report.target_model_id = summary.at("target_model").get<std::string>();
    report.alpha = summary.at("alpha").get<double>();
    report.aggregation = ParseAggregation(summary.at("aggregation").get<std::string>());
    report.seeds = summary.at("seeds").get<std::vector<std::uint64_t>>();
    report.procedure_ids = summary.at("procedures").get<std::vector<std::string>>();
    for (const json& r : summary.at("robustness")) {
      report.robustness_ids.push_back(r.at("id").get<std::string>());
      report.robustness_names.push_back(r.at("name").get<std::string>());
    }
    report.certificate_files =
        summary.at("certificates").get<std::vector<std::string>>();
    for (const json& f : summary.at("failures")) {
      RunFailure failure = FailureFromJson(f);
      if (failure.error_type != "AggregateError") {
        report.failures.push_back(std::move(failure));
      }
    }
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError((dir / "summary.json").string() + ": " + e.what());
  }
  for (const std::string& stem : report.certificate_files) {
    const fs::path path = dir / "certificates" / (stem + ".json");
    const json j = ReadJson(path);
    try {
      report.certificates.push_back(CertificateFromJson(j));
    } catch (const std::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }
  Summarize(report);
  return report;
}

std::string RenderTable(const Report& report) {
  std::map<std::string, std::string> names;
  for (std::size_t i = 0; i < report.robustness_ids.size(); ++i) {
    names[report.robustness_ids[i]] = report.robustness_names[i];
  }
  std::vector<std::vector<std::string>> rows = {
      {"Interpretable Procedure", "TM", "delta", "gamma", "D_R",
       "Performance Metric", "delta sd*", "gamma sd*", "runs*"}};
  for (const AggregatedCertificate& a : report.aggregated) {
    const InterpretabilityCertificate& c = a.certificate;
    rows.push_back({c.procedure_id(), c.target_model_id(),
                    FormatFixed3(c.delta()), FormatGamma(c.gamma()),
                    names.count(c.robustness_id()) ? names[c.robustness_id()]
                                                   : c.robustness_id(),
                    report.metric_name, FormatFixed3(a.delta_spread.stddev),
                    a.gamma_spread ? FormatFixed3(a.gamma_spread->stddev) : "undef",
                    std::to_string(a.delta_spread.count)});
  }
  std::ostringstream out;
  out << RenderRows(rows);
  out << "* spread over seeds and folds (sample standard deviation, run "
         "count); an addition to the certificate table.\n";
  if (!report.multi_distribution.empty()) {
    out << "\nmulti-distribution aggregate (max over robustness "
           "distributions)\n";
    std::vector<std::vector<std::string>> multi = {
        {"Interpretable Procedure", "delta", "gamma"}};
    for (const MultiDistributionEntry& m : report.multi_distribution) {
      multi.push_back({m.procedure_id, FormatFixed3(m.delta), FormatGamma(m.gamma)});
    }
    out << RenderRows(multi);
  }
  if (!report.failures.empty()) {
    out << "\nfailures\n";
    for (const RunFailure& f : report.failures) {
      out << "  " << f.procedure_id << " [" << f.robustness_id << "] seed "
          << f.seed;
      if (f.fold) out << " fold " << *f.fold;
      out << ": " << f.error_type << ": " << f.message << "\n";
    }
  }
  return out.str();
}

Comparison Compare(const std::vector<InterpretabilityCertificate>& certificates,
                   const std::vector<std::string>& labels, double alpha) {
  if (certificates.empty()) throw EmptyInputError("no certificates to compare");
  Comparison out;
  out.alpha = alpha;
  out.loss_id = certificates.front().loss_id();
  for (const InterpretabilityCertificate& c : certificates) {
    if (c.loss_id() != out.loss_id) {
      throw ContextMismatchError("certificates use different losses: '" +
                                 out.loss_id + "' and '" + c.loss_id() + "'");
    }
  }
  for (std::size_t i = 0; i < certificates.size(); ++i) {
    const std::string& rob = certificates[i].robustness_id();
    auto it = std::find_if(out.groups.begin(), out.groups.end(),
                           [&](const ComparisonGroup& g) {
                             return g.robustness_id == rob;
                           });
    if (it == out.groups.end()) {
      out.groups.push_back(ComparisonGroup{rob, {}, {}, {}, {}});
      it = out.groups.end() - 1;
    }
    it->labels.push_back(labels[i]);
    it->certificates.push_back(certificates[i]);
  }
  for (ComparisonGroup& g : out.groups) {
    g.edges = HasseEdges(g.certificates);
    g.classes = EquivalenceClasses(CertificateSet{g.certificates, alpha});
  }
  return out;
}

void CollectCertificates(const fs::path& dir, const std::string& prefix,
                         std::vector<InterpretabilityCertificate>* certificates,
                         std::vector<std::string>* labels) {
  const std::string lead = prefix.empty() ? "" : prefix + ":";
  if (fs::exists(dir / "summary.json")) {
    const Report report = LoadReport(dir);
    for (const AggregatedCertificate& a : report.aggregated) {
      certificates->push_back(a.certificate);
      labels->push_back(lead + a.certificate.procedure_id());
    }
    return;
  }
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    try {
      certificates->push_back(CertificateFromJson(ReadJson(f)));
    } catch (const IoError&) {
      throw;
    } catch (const std::exception& e) {
      throw IoError(f.string() + ": " + e.what());
    }
    labels->push_back(lead + f.stem().string());
  }
}

std::string RenderComparison(const Comparison& comparison) {
  std::ostringstream out;
  out << "loss: " << comparison.loss_id << "\n";
  out << "alpha: " << comparison.alpha << "\n";
  for (const ComparisonGroup& g : comparison.groups) {
    out << "\nrobustness: " << g.robustness_id << "\n";
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
      out << "  " << g.labels[i] << "  delta=" << FormatFixed3(g.certificates[i].delta())
          << " gamma=" << FormatGamma(g.certificates[i].gamma()) << "\n";
    }
    out << "dominance edges (left dominates right):\n";
    if (g.edges.empty()) out << "  (none)\n";
    for (const auto& [a, b] : g.edges) {
      out << "  " << g.labels[a] << " -> " << g.labels[b] << "\n";
    }
    out << "equivalence classes:\n";
    for (const auto& cls : g.classes) {
      out << "  {";
      for (std::size_t k = 0; k < cls.size(); ++k) {
        out << (k ? ", " : "") << g.labels[cls[k]];
      }
      out << "}\n";
    }
  }
  return out.str();
}

}  // namespace interp_cert

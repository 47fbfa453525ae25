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

// Report persistence and rendering.
//
// On disk a report is a directory:
//
//   certificates/<procedure>__<robustness>__seed<s>[__fold<k>].json
//   summary.json   metadata, aggregates, dominance edges, classes, failures
//   table.txt      the rendered table
//
// Certificate files carry no timestamp, so equal seeds give equal bytes.

#ifndef INTERP_CERT_REPORT_H_
#define INTERP_CERT_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interp_cert/metrics.h"
#include "interp_cert/runner.h"

namespace interp_cert {

// Canonical serialized form of a certificate file (two-space indent,
// trailing newline).
std::string CertificateFileText(const InterpretabilityCertificate& c);

nlohmann::json SummaryJson(const Report& report);

// Throws IoError when the directory or a file cannot be written.
void WriteReport(const Report& report, const std::filesystem::path& dir);

// Reads summary.json and every listed certificate, then recomputes the
// aggregates from the stored error estimates. Throws IoError.
Report LoadReport(const std::filesystem::path& dir);

// "0" for an exact zero, "undef" when undefined, otherwise 3 decimals.
std::string FormatGamma(const Gamma& gamma);
std::string FormatFixed3(double value);

// One row per (procedure, robustness) aggregate: procedure, TM, delta,
// gamma, D_R, metric, followed by the per-seed spread columns.
std::string RenderTable(const Report& report);

struct ComparisonGroup {
  std::string robustness_id;
  std::vector<std::string> labels;
  std::vector<InterpretabilityCertificate> certificates;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> classes;
};

struct Comparison {
  std::string loss_id;
  double alpha = 0.0;
  std::vector<ComparisonGroup> groups;
};

// Groups certificates by robustness id and computes Hasse edges and
// alpha-equivalence classes per group. Throws ContextMismatchError when loss
// ids differ and EmptyInputError when there is nothing to compare.
Comparison Compare(const std::vector<InterpretabilityCertificate>& certificates,
                   const std::vector<std::string>& labels, double alpha);

// Loads the comparison input of a directory: a report's aggregated
// certificates when summary.json exists, else every *.json certificate file
// in it. Labels are procedure ids (prefixed by `prefix` when non-empty).
void CollectCertificates(const std::filesystem::path& dir,
                         const std::string& prefix,
                         std::vector<InterpretabilityCertificate>* certificates,
                         std::vector<std::string>* labels);

std::string RenderComparison(const Comparison& comparison);

}  // namespace interp_cert

#endif  // INTERP_CERT_REPORT_H_

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

// Declarative run specs and their execution into a Report.
//
// A run spec is one JSON document:
//
//   {
//     "name": "mnist-prototypes",
//     "dataset": {"type": "idx", "images": "...", "labels": "..."},
//     "split": {"train_size": 1500, "test_size": 3500},
//     "target_model": {"kind": "NPC", "initial_prototypes": 200},
//     "procedures": [{"kind": "MMDGreedy", "m": 200}, ...],
//     "robustness": {"kind": "ClassSkew", "count": 10},
//     "loss": "zero_one",
//     "seeds": [1, 2, 3, 4, 5],
//     "alpha": 0.05,
//     "aggregation": "mean"
//   }
//
// Dataset types: "idx" (images, labels, optional limit), "csv" (path,
// target, optional features), "synthetic_linear" (SyntheticLinearSpec
// fields) and "finite_domain" (domain, n). Generated datasets are redrawn
// for every seed. Relative paths resolve against the data roots.

#ifndef INTERP_CERT_RUNNER_H_
#define INTERP_CERT_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interp_cert/dataset.h"
#include "interp_cert/loss.h"
#include "interp_cert/metrics.h"
#include "interp_cert/models.h"
#include "interp_cert/procedures.h"
#include "interp_cert/robustness.h"

namespace interp_cert {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum class DatasetType { kIdx, kCsv, kSyntheticLinear, kFiniteDomain };

struct DatasetSpec {
  DatasetType type = DatasetType::kIdx;
  std::filesystem::path images;  // idx
  std::filesystem::path labels;  // idx
  std::optional<int> limit;      // idx/csv: keep the first rows only
  std::filesystem::path csv;     // csv
  CsvSchema schema;              // csv
  SyntheticLinearSpec synthetic;
  FiniteDomainSpec domain;
  int domain_rows = 0;  // finite_domain
};

// Exactly one of: train_fraction, train_size (+ optional test_size), folds.
struct SplitSpec {
  std::optional<double> train_fraction;
  std::optional<int> train_size;
  std::optional<int> test_size;
  std::optional<int> folds;
};

struct TargetModelSpec {
  ModelKind kind = ModelKind::kNearestPrototypeClassifier;
  // NPC: number of random training rows used as the baseline prototypes
  // (default: all training rows).
  std::optional<int> initial_prototypes;
  // Linear and logistic: size of the random feature subset the baseline is
  // fitted on (default: all features).
  std::optional<int> initial_features;
};

struct RobustnessSpec {
  RobustnessGenerator generator;
  // Number of robust sets. Default: the number of classes in the test set
  // for ClassSkew, otherwise 1.
  std::optional<int> count;
};

struct RunSpec {
  std::string name;
  DatasetSpec dataset;
  SplitSpec split;
  TargetModelSpec target_model;
  std::vector<ProcedureSpec> procedures;
  // More than one entry adds a multi-distribution (max) aggregate.
  std::vector<RobustnessSpec> robustness;
  LossFunction loss;
  std::vector<std::uint64_t> seeds;
  double alpha = 0.0;
  Aggregation aggregation = Aggregation::kMean;
  nlohmann::json document;  // the spec as given, for the report
};

// Roots searched, in order, for relative dataset paths: INTERP_CERT_DATA_DIR
// when set, then the spec file's directory.
std::vector<std::filesystem::path> DataSearchRoots(
    const std::filesystem::path& spec_path);

// Throws SpecValidationError naming the offending field.
RunSpec ParseRunSpec(const nlohmann::json& document,
                     const std::vector<std::filesystem::path>& data_roots);
// Throws IoError when the file cannot be read and SpecValidationError when it
// is not valid JSON or does not validate.
RunSpec LoadRunSpec(const std::filesystem::path& path);

// Short model label used in tables and certificate ids: OLS, NPC, SLR.
std::string TargetModelId(ModelKind kind);

struct RunFailure {
  std::string procedure_id;
  std::string robustness_id;
  std::uint64_t seed = 0;
  std::optional<int> fold;
  std::string error_type;
  std::string message;
};

struct Spread {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for one member
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

// Per (procedure, robustness) certificate built from the CvError of every
// member's four error estimates.
struct AggregatedCertificate {
  InterpretabilityCertificate certificate;
  std::vector<std::string> members;  // certificate file stems
  Spread delta_spread;
  std::optional<Spread> gamma_spread;  // unset when every member gamma is undefined
  int undefined_gamma_members = 0;
};

struct MultiDistributionEntry {
  std::string procedure_id;
  double delta = 0.0;
  Gamma gamma;
  std::vector<std::string> robustness_ids;
};

// Dominance structure among the aggregated certificates of one robustness
// context. Indices refer to `procedure_ids`.
struct OrderStructure {
  std::string robustness_id;
  std::vector<std::string> procedure_ids;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> classes;
};

struct Report {
  std::string name;
  std::string version = kVersion;
  std::string generated_at;  // ISO-8601 UTC; the only nondeterministic field
  nlohmann::json run_spec;
  std::string loss_id;
  std::string metric_name;
  std::string target_model_id;
  double alpha = 0.0;
  Aggregation aggregation = Aggregation::kMean;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> procedure_ids;  // spec order
  std::vector<std::string> robustness_ids;
  std::vector<std::string> robustness_names;

  // Ordered by procedure, robustness, seed, fold; `certificate_files[i]` is
  // the file stem of `certificates[i]`.
  std::vector<InterpretabilityCertificate> certificates;
  std::vector<std::string> certificate_files;
  std::vector<RunFailure> failures;
  std::vector<AggregatedCertificate> aggregated;  // procedure, robustness
  std::vector<MultiDistributionEntry> multi_distribution;
  std::vector<OrderStructure> structure;
};

struct ExecuteOptions {
  int jobs = 1;
  std::optional<std::uint64_t> seed_override;
};

// Runs every (procedure, seed[, fold]) pipeline; failures are recorded per
// run and never abort the others. Throws SpecValidationError when a dataset
// cannot be loaded or the split does not fit it.
Report Execute(const RunSpec& spec, const ExecuteOptions& options = {});

// Rebuilds aggregates and order structure from report.certificates.
void Summarize(Report& report);
// Recomputes the order structure with a new alpha.
void ComputeStructure(Report& report, double alpha);

}  // namespace interp_cert

#endif  // INTERP_CERT_RUNNER_H_

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

// Datasets: CSV and IDX ingestion, seeded splits, and synthetic generators.

#ifndef INTERP_CERT_DATASET_H_
#define INTERP_CERT_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "interp_cert/loss.h"
#include "interp_cert/metrics.h"

namespace interp_cert {

// n x d finite features with one target per row. Class labels are stored as
// integral doubles.
class LabeledDataset {
 public:
  // Throws InvalidDatasetError when n == 0, shapes disagree or any entry is
  // non-finite.
  LabeledDataset(Eigen::MatrixXd features, Eigen::VectorXd targets,
                 std::vector<std::string> feature_names = {},
                 nlohmann::json provenance = nlohmann::json::object());

  int rows() const { return static_cast<int>(features_.rows()); }
  int cols() const { return static_cast<int>(features_.cols()); }
  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& targets() const { return targets_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  const nlohmann::json& provenance() const { return provenance_; }

  // Rows in the given order. Indices must be in range.
  LabeledDataset Subset(std::span<const int> indices) const;

  // Sorted distinct targets, as integers.
  std::vector<int> ClassLabels() const;
  // Row indices whose target equals `label`, ascending.
  std::vector<int> RowsWithLabel(int label) const;

  bool operator==(const LabeledDataset& other) const;

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd targets_;
  std::vector<std::string> feature_names_;
  nlohmann::json provenance_;
};

// ---------------------------------------------------------------------------
// CSV

struct CsvSchema {
  std::string target_column;
  // Empty means every column other than the target, in file order.
  std::vector<std::string> feature_columns;
};

// Comma-separated, header mandatory, optional RFC 4180 quoting. Values parse
// as 64-bit floats. Throws ParseError(line, column) on malformed rows and
// MissingColumnError when a schema column is not in the header.
LabeledDataset LoadCsv(const std::filesystem::path& path,
                       const CsvSchema& schema);
LabeledDataset ParseCsv(std::string_view text, const CsvSchema& schema,
                        const std::string& source = "<memory>");

// ---------------------------------------------------------------------------
// IDX (big-endian; images magic 0x00000803, labels magic 0x00000801)

// Pixels are divided by 255. Throws MagicMismatchError, CountMismatchError,
// TruncatedFileError, IoError.
LabeledDataset LoadIdx(const std::filesystem::path& images,
                       const std::filesystem::path& labels);
LabeledDataset ParseIdx(std::span<const std::uint8_t> images,
                        std::span<const std::uint8_t> labels);

// Inverse of ParseIdx: pixels are rescaled by 255 and rounded. The image
// shape comes from provenance ("image_rows", "image_cols") when present,
// otherwise 1 x d.
std::vector<std::uint8_t> SerializeIdxImages(const LabeledDataset& data);
std::vector<std::uint8_t> SerializeIdxLabels(const LabeledDataset& data);
void SaveIdx(const LabeledDataset& data, const std::filesystem::path& images,
             const std::filesystem::path& labels);

// ---------------------------------------------------------------------------
// Splits

// Seeded permutation, then contiguous slices with boundaries
// round(n * cumulative_fraction). Fractions must sum to 1 (within 1e-9).
// Throws EmptyPartError when a slice would be empty.
std::vector<std::vector<int>> SplitIndices(int n,
                                           std::span<const double> fractions,
                                           std::uint64_t seed);
// Same, with explicit part sizes that sum to at most n; rows beyond the sum
// are dropped.
std::vector<std::vector<int>> SplitIndicesBySize(int n,
                                                 std::span<const int> sizes,
                                                 std::uint64_t seed);
// K disjoint folds covering all rows.
std::vector<std::vector<int>> FoldIndices(int n, int k, std::uint64_t seed);

std::vector<LabeledDataset> Split(const LabeledDataset& data,
                                  std::span<const double> fractions,
                                  std::uint64_t seed);
std::vector<LabeledDataset> Folds(const LabeledDataset& data, int k,
                                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Finite-domain distributions

// K domain points with marginal p(x) and conditional label distribution
// p(y | x) over labels 0..C-1.
struct FiniteDomainSpec {
  Eigen::MatrixXd points;              // K x d
  Eigen::VectorXd probabilities;       // K
  Eigen::MatrixXd label_probabilities; // K x C
  std::uint64_t seed = 0;

  int domain_size() const { return static_cast<int>(points.rows()); }
  int num_labels() const { return static_cast<int>(label_probabilities.cols()); }
  // Throws std::invalid_argument when probabilities are out of [0,1] or rows
  // do not sum to 1 within 1e-12 (marginal) / 1e-9 (conditionals).
  void Validate() const;
};

// n i.i.d. draws using spec.seed (or the explicit seed). Provenance records
// the domain index of every row under "domain_index".
LabeledDataset SampleFiniteDomain(const FiniteDomainSpec& spec, int n);
LabeledDataset SampleFiniteDomain(const FiniteDomainSpec& spec, int n,
                                  std::uint64_t seed);

using Predictor = std::function<double(const Eigen::VectorXd&)>;

// Exact expected loss sum_x p(x) sum_y p(y|x) loss(predict(x), y) by
// enumeration. kMapePercent is the ratio 100 E|f(x) - y| / E[y]. Sample size
// is reported as the domain size.
ErrorEstimate ExactExpectedError(const FiniteDomainSpec& spec,
                                 const Predictor& predict,
                                 const LossFunction& loss);

nlohmann::json ToJson(const FiniteDomainSpec& spec);
FiniteDomainSpec FiniteDomainSpecFromJson(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Synthetic linear data with a known relevant-feature set

struct SyntheticLinearSpec {
  int d = 1;
  std::vector<int> relevant;          // 0-based
  std::vector<double> coefficients;   // per relevant feature; empty = all 1
  double noise = 0.0;
  int n = 100;
  std::uint64_t seed = 0;
};

// Features i.i.d. N(0, 1); target = sum of coefficient * feature over the
// relevant set plus noise * N(0, 1). Provenance carries "truth".
LabeledDataset SynthLinear(const SyntheticLinearSpec& spec);

nlohmann::json ToJson(const SyntheticLinearSpec& spec);
SyntheticLinearSpec SyntheticLinearSpecFromJson(const nlohmann::json& j);

}  // namespace interp_cert

#endif  // INTERP_CERT_DATASET_H_

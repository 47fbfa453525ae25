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

// Interpretable procedures: each one produces Information for a target model.
//
//   MMDGreedy          prototypes minimizing the kernel MMD to the data
//   RandomPrototypes   uniformly drawn prototypes (the usual baseline)
//   StepwiseFeatures   forward selection on held-out validation loss
//   Identity           the model's own parameters (delta = 1 by construction)

#ifndef INTERP_CERT_PROCEDURES_H_
#define INTERP_CERT_PROCEDURES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "interp_cert/dataset.h"
#include "interp_cert/loss.h"
#include "interp_cert/metrics.h"
#include "interp_cert/models.h"
#include "interp_cert/robustness.h"

namespace interp_cert {

enum class ProcedureKind {
  kMmdGreedy,
  kRandomPrototypes,
  kStepwiseFeatures,
  kIdentity,
};

const char* ProcedureKindName(ProcedureKind kind);
ProcedureKind ParseProcedureKind(std::string_view name);

struct ProcedureSpec {
  ProcedureKind kind = ProcedureKind::kIdentity;
  std::string id;  // defaults to the kind name
  int m = 1;       // prototypes or maximum features
  // MMDGreedy; unset means the median heuristic.
  std::optional<double> kernel_bandwidth;
  int patience = 0;  // StepwiseFeatures
  // StepwiseFeatures: loss minimized on the validation half. Unset means
  // squared error for regressors and zero-one for classifiers.
  std::optional<LossKind> selection_loss;
  std::uint64_t seed = 0;
  // When set, the information is derived from a k-NN complex model with this
  // k: StepwiseFeatures then selects features that best reproduce the complex
  // model's predictions instead of the raw targets.
  std::optional<int> complex_model_k;

  std::string display_id() const;
};

nlohmann::json ToJson(const ProcedureSpec& spec);
ProcedureSpec ProcedureSpecFromJson(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// MMD prototype selection

// n x n radial-basis kernel exp(-|x - x'|^2 / (2 bandwidth^2)).
Eigen::MatrixXd RbfKernelMatrix(const Eigen::MatrixXd& x, double bandwidth);

// Median pairwise Euclidean distance over a seeded subsample of at most
// max_rows rows. Falls back to 1 when every distance is zero.
double MedianHeuristicBandwidth(const LabeledDataset& data, std::uint64_t seed,
                                int max_rows = 500);

// Greedy objective for a prototype set S against n data points:
//   J(S) = 2/(n|S|) sum_{i,s} k(x_i, x_s) - 1/|S|^2 sum_{s,s'} k(x_s, x_s')
// Squared MMD equals 1/n^2 sum_{i,j} k(x_i, x_j) - J(S).
double MmdObjective(const Eigen::MatrixXd& kernel,
                    std::span<const int> selected);
double MmdSquared(const Eigen::MatrixXd& kernel, std::span<const int> selected);

struct MmdSelection {
  std::vector<int> indices;     // selection order
  std::vector<double> objective;  // J after each addition
};

// Greedy maximization of J with cached kernel column sums; each step costs
// O(n). Ties go to the lowest index. Throws InvalidCountError unless
// 1 <= m <= n and std::invalid_argument for bandwidth <= 0.
MmdSelection MmdGreedySelectDetailed(const LabeledDataset& data, int m,
                                     double bandwidth);
PrototypeSet MmdGreedySelect(const LabeledDataset& data, int m,
                             double bandwidth);

// m distinct rows drawn uniformly without replacement. Throws
// InvalidCountError unless 1 <= m <= n.
PrototypeSet RandomPrototypeSelect(const LabeledDataset& data, int m,
                                   std::uint64_t seed);

// ---------------------------------------------------------------------------
// Stepwise feature selection

struct StepwiseOptions {
  int max_features = 1;
  int patience = 0;
  std::uint64_t seed = 0;
  const ComplexModel* complex_model = nullptr;
};

struct StepwiseTrace {
  std::vector<int> selected;           // returned subset, in selection order
  std::vector<int> tried;              // every addition, including trimmed ones
  std::vector<double> validation_loss; // loss after each entry of `tried`
  double initial_loss = 0.0;           // intercept-only model
};

// Forward selection: data is halved by seed into fit and validation parts;
// each round adds the feature whose refit most reduces validation loss (ties
// to the lowest index). Non-improving additions are tolerated up to
// `patience` in a row; the result is the prefix with the best validation
// loss, so it never exceeds max_features nor contains duplicates.
StepwiseTrace StepwiseFeatureSelectDetailed(const LabeledDataset& data,
                                            ModelKind model_kind,
                                            const LossFunction& selection_loss,
                                            const StepwiseOptions& options);
FeatureSubset StepwiseFeatureSelect(const LabeledDataset& data,
                                    ModelKind model_kind,
                                    const LossFunction& selection_loss,
                                    int max_features, int patience,
                                    std::uint64_t seed);

// ---------------------------------------------------------------------------

// The model's current parameters; applying them is a no-op.
ParameterAdjustment IdentityProcedure(const TargetModel& model);

struct ProcedureOutput {
  Information information;
  nlohmann::json audit;
};

// Runs the procedure on the training data. Throws InvalidCountError when m is
// out of range for the pool.
ProcedureOutput RunProcedure(const ProcedureSpec& spec, const TargetModel& tm,
                             const LabeledDataset& train);

struct PipelineContext {
  std::string target_model_id;
  std::string robustness_id;
  std::uint64_t seed = 0;
  Aggregation aggregation = Aggregation::kMean;
  bool robust_sampled_with_replacement = false;
};

// Evaluates tm on the test set and on the robust sets, runs the procedure on
// train, applies its information, re-evaluates and certifies.
InterpretabilityCertificate RunPipeline(
    const ProcedureSpec& procedure, const TargetModel& tm,
    const LabeledDataset& train, const LabeledDataset& test,
    const std::vector<LabeledDataset>& robust_sets, const LossFunction& loss,
    const PipelineContext& context);

}  // namespace interp_cert

#endif  // INTERP_CERT_PROCEDURES_H_

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

// Target models, the information they can absorb, and a k-NN complex model.
//
// A target model declares which Information variants it accepts; applying
// anything else raises RepresentationError. This is what keeps M(I) inside
// the model's hypothesis class.

#ifndef INTERP_CERT_MODELS_H_
#define INTERP_CERT_MODELS_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "interp_cert/dataset.h"
#include "interp_cert/loss.h"
#include "interp_cert/metrics.h"

namespace interp_cert {

// ---------------------------------------------------------------------------
// Information

struct FeatureSubset {
  std::vector<int> indices;
};
struct PrototypeSet {
  std::vector<int> indices;  // rows of the training dataset
};
struct ParameterAdjustment {
  Eigen::VectorXd parameters;
};
struct InstanceWeights {
  Eigen::VectorXd weights;  // one per training row
};

using Information = std::variant<FeatureSubset, PrototypeSet,
                                 ParameterAdjustment, InstanceWeights>;

enum class InformationKind {
  kFeatureSubset,
  kPrototypeSet,
  kParameterAdjustment,
  kInstanceWeights,
};

InformationKind KindOf(const Information& info);
const char* InformationKindName(InformationKind kind);
nlohmann::json ToJson(const Information& info);

// ---------------------------------------------------------------------------
// Target models

enum class ModelKind {
  kLinearRegressor,
  kNearestPrototypeClassifier,
  kLogisticClassifier,
};

const char* ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);
std::set<InformationKind> DefaultAcceptedInformation(ModelKind kind);

struct LogisticOptions {
  double l2 = 1e-4;
  double gradient_tolerance = 1e-6;
  int max_iterations = 10000;
};

class TargetModel {
 public:
  ModelKind kind() const { return kind_; }
  const std::set<InformationKind>& accepted_information() const {
    return accepted_;
  }
  const std::string& loss_id() const { return loss_id_; }
  int input_dim() const { return input_dim_; }

  // Linear and logistic models: weights follow feature_subset order.
  const std::vector<int>& feature_subset() const { return feature_subset_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  // Training instance weights used by the last fit (empty = uniform).
  const Eigen::VectorXd& instance_weights() const { return instance_weights_; }
  const LogisticOptions& logistic_options() const { return logistic_options_; }

  // Nearest-prototype classifier.
  const Eigen::MatrixXd& prototypes() const { return prototypes_; }
  const Eigen::VectorXd& prototype_labels() const { return prototype_labels_; }
  const std::vector<int>& prototype_indices() const {
    return prototype_indices_;
  }

  // Flat parameter vector: [weights..., intercept] for linear and logistic
  // models, row-major prototype coordinates for the NPC.
  Eigen::VectorXd parameters() const;

  // Throws DimensionMismatchError when x has the wrong length and
  // EmptyPrototypeError for an NPC without prototypes.
  double Predict(const Eigen::VectorXd& x) const;
  Eigen::VectorXd PredictBatch(const Eigen::MatrixXd& x) const;

  TargetModel WithAcceptedInformation(std::set<InformationKind> accepted) const;
  TargetModel WithLossId(std::string loss_id) const;

  bool operator==(const TargetModel& other) const;

  // Factories live outside the class; they fill these fields directly.
  friend TargetModel FitOls(const LabeledDataset&, std::optional<std::vector<int>>,
                            const Eigen::VectorXd*);
  friend TargetModel FitLogistic(const LabeledDataset&,
                                 std::optional<std::vector<int>>,
                                 const Eigen::VectorXd*, const LogisticOptions&);
  friend TargetModel MakeNearestPrototypeClassifier(const LabeledDataset&,
                                                    std::span<const int>);
  friend TargetModel MakeNearestPrototypeClassifier(Eigen::MatrixXd,
                                                    Eigen::VectorXd);
  friend TargetModel ApplyInformation(const TargetModel&, const Information&,
                                      const LabeledDataset&);
  friend TargetModel TargetModelFromJson(const nlohmann::json&);

 private:
  TargetModel() = default;

  ModelKind kind_ = ModelKind::kLinearRegressor;
  std::set<InformationKind> accepted_;
  std::string loss_id_;
  int input_dim_ = 0;

  std::vector<int> feature_subset_;
  Eigen::VectorXd weights_;
  double intercept_ = 0.0;
  Eigen::VectorXd instance_weights_;
  LogisticOptions logistic_options_;

  Eigen::MatrixXd prototypes_;
  Eigen::VectorXd prototype_labels_;
  std::vector<int> prototype_indices_;
};

// Least squares over the selected features (all when unset) plus an
// intercept, via a column-pivoted QR of the normal equations with pivot
// threshold 1e-10. Optional per-row weights are rescaled to mean 1. Throws
// RankDeficientError for singular designs.
TargetModel FitOls(const LabeledDataset& data,
                   std::optional<std::vector<int>> feature_subset = std::nullopt,
                   const Eigen::VectorXd* instance_weights = nullptr);

// L2-regularized logistic regression on labels {0, 1}, fitted by full-batch
// gradient descent with step 1 / L (L the smoothness constant). Throws
// SingleClassError when only one class is present.
TargetModel FitLogistic(const LabeledDataset& data,
                        std::optional<std::vector<int>> feature_subset = std::nullopt,
                        const Eigen::VectorXd* instance_weights = nullptr,
                        const LogisticOptions& options = {});

TargetModel MakeNearestPrototypeClassifier(const LabeledDataset& training,
                                           std::span<const int> indices);
TargetModel MakeNearestPrototypeClassifier(Eigen::MatrixXd prototypes,
                                           Eigen::VectorXd labels);

// Label of the Euclidean-nearest prototype, lowest index on ties.
int NpcPredict(const TargetModel& model, const Eigen::VectorXd& x);

// Returns a new model of the same kind with the information absorbed. The
// argument model is never modified. Throws RepresentationError when the
// variant is not accepted and InvalidInformationError for malformed payloads.
TargetModel ApplyInformation(const TargetModel& model, const Information& info,
                             const LabeledDataset& training);

ErrorEstimate Evaluate(const TargetModel& model, const LabeledDataset& data,
                       const LossFunction& loss);

ErrorEstimate ExactExpectedError(const FiniteDomainSpec& spec,
                                 const TargetModel& model,
                                 const LossFunction& loss);

nlohmann::json ToJson(const TargetModel& model);
TargetModel TargetModelFromJson(const nlohmann::json& j);

// Objective and gradient behind FitLogistic, exposed for derivative checks.
// Parameters are [weights..., intercept]; x already restricted to the
// feature subset; sample weights have mean 1 (empty = uniform).
double LogisticObjective(const Eigen::VectorXd& params, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& y,
                         const Eigen::VectorXd& sample_weights, double l2);
Eigen::VectorXd LogisticGradient(const Eigen::VectorXd& params,
                                 const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& sample_weights,
                                 double l2);

// ---------------------------------------------------------------------------
// Complex model

enum class Task { kClassification, kRegression };

class ComplexModel {
 public:
  // Throws EmptyTrainingError for an empty training set and
  // std::invalid_argument unless 1 <= k <= n.
  ComplexModel(LabeledDataset training, int k, Task task);

  int k() const { return k_; }
  Task task() const { return task_; }
  const LabeledDataset& training() const { return training_; }

 private:
  LabeledDataset training_;
  int k_;
  Task task_;
};

// Majority label among the k nearest rows (ties to the lowest label) or
// their mean target. Distance ties resolve to the lower row index.
double KnnPredict(const ComplexModel& model, const Eigen::VectorXd& x);

ErrorEstimate Evaluate(const ComplexModel& model, const LabeledDataset& data,
                       const LossFunction& loss);

}  // namespace interp_cert

#endif  // INTERP_CERT_MODELS_H_

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

#include "interp_cert/loss.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "interp_cert/errors.h"

namespace interp_cert {

const char* LossKindId(LossKind kind) {
  switch (kind) {
    case LossKind::kZeroOne:
      return "zero_one";
    case LossKind::kMapePercent:
      return "mape_percent";
    case LossKind::kSquaredError:
      return "squared_error";
    case LossKind::kFeatureRecallComplement:
      return "feature_recall_complement";
  }
  return "unknown";
}

LossKind ParseLossKind(std::string_view name) {
  if (name == "zero_one" || name == "ZeroOne") return LossKind::kZeroOne;
  if (name == "mape_percent" || name == "MAPEPercent") {
    return LossKind::kMapePercent;
  }
  if (name == "squared_error" || name == "SquaredError") {
    return LossKind::kSquaredError;
  }
  if (name == "feature_recall_complement" ||
      name == "FeatureRecallComplement") {
    return LossKind::kFeatureRecallComplement;
  }
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

std::string LossFunction::id() const { return LossKindId(kind); }

std::string LossFunction::metric_name() const {
  switch (kind) {
    case LossKind::kZeroOne:
      return "Classification error";
    case LossKind::kMapePercent:
      return "MAPE";
    case LossKind::kSquaredError:
      return "Squared error";
    case LossKind::kFeatureRecallComplement:
      return "Feature Recall";
  }
  return "unknown";
}

ErrorEstimate EvaluatePredictions(const Eigen::VectorXd& predictions,
                                  const Eigen::VectorXd& targets,
                                  const LossFunction& loss) {
  if (predictions.size() != targets.size()) {
    throw DimensionMismatchError("predictions and targets differ in length");
  }
  const Eigen::Index n = targets.size();
  if (n == 0) throw EmptyInputError("no rows to evaluate");
  double value = 0.0;
  switch (loss.kind) {
    case LossKind::kZeroOne:
      value = (predictions.array() != targets.array()).cast<double>().mean();
      break;
    case LossKind::kSquaredError:
      value = (predictions - targets).squaredNorm() / static_cast<double>(n);
      break;
    case LossKind::kMapePercent: {
      const double total = targets.sum();
      if (!(total > 0.0)) {
        throw InvalidTargetError("MAPE needs a positive mean actual value");
      }
      value = 100.0 * (predictions - targets).cwiseAbs().sum() / total;
      break;
    }
    case LossKind::kFeatureRecallComplement:
      throw IncompatibleLossError(
          "feature recall is a property of the model, not of predictions");
  }
  return ErrorEstimate(value, n, loss.id());
}

double FeatureRecallComplement(std::span<const int> selected,
                               std::span<const int> truth) {
  const std::set<int> truth_set(truth.begin(), truth.end());
  if (truth_set.empty()) {
    throw InvalidTargetError("feature recall needs a nonempty truth set");
  }
  const std::set<int> selected_set(selected.begin(), selected.end());
  int hits = 0;
  for (const int f : selected_set) hits += truth_set.count(f);
  return 1.0 - static_cast<double>(hits) / static_cast<double>(truth_set.size());
}

}  // namespace interp_cert

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

#ifndef INTERP_CERT_LOSS_H_
#define INTERP_CERT_LOSS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "interp_cert/metrics.h"

namespace interp_cert {

enum class LossKind {
  kZeroOne,
  kMapePercent,
  kSquaredError,
  kFeatureRecallComplement,
};

struct LossFunction {
  LossKind kind = LossKind::kZeroOne;
  // Ground-truth feature set; only used by kFeatureRecallComplement.
  std::vector<int> truth;

  static LossFunction ZeroOne() { return {LossKind::kZeroOne, {}}; }
  static LossFunction MapePercent() { return {LossKind::kMapePercent, {}}; }
  static LossFunction SquaredError() { return {LossKind::kSquaredError, {}}; }
  static LossFunction FeatureRecallComplement(std::vector<int> truth) {
    return {LossKind::kFeatureRecallComplement, std::move(truth)};
  }

  // Stable token stored in every ErrorEstimate ("zero_one", ...).
  std::string id() const;
  // Display name ("Classification error", "MAPE", ...).
  std::string metric_name() const;
};

const char* LossKindId(LossKind kind);
// Accepts the token or the CamelCase name ("ZeroOne"). Throws
// std::invalid_argument on anything else.
LossKind ParseLossKind(std::string_view name);

// Mean loss of predictions against targets. kFeatureRecallComplement is not
// a per-row loss and is rejected with IncompatibleLossError here.
ErrorEstimate EvaluatePredictions(const Eigen::VectorXd& predictions,
                                  const Eigen::VectorXd& targets,
                                  const LossFunction& loss);

// 1 - |selected ∩ truth| / |truth|. Throws InvalidTargetError when truth is
// empty.
double FeatureRecallComplement(std::span<const int> selected,
                               std::span<const int> truth);

}  // namespace interp_cert

#endif  // INTERP_CERT_LOSS_H_

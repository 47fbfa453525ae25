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

// Generators for adversarial samples S_R drawn from a base dataset.

#ifndef INTERP_CERT_ROBUSTNESS_H_
#define INTERP_CERT_ROBUSTNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "interp_cert/dataset.h"
#include "interp_cert/loss.h"
#include "interp_cert/metrics.h"
#include "interp_cert/models.h"

namespace interp_cert {

struct IdentityGenerator {};

// Single-class test sets. With `label` set every generated set holds that
// class; otherwise set i holds the i-th smallest label (cycling), so asking
// for as many sets as there are classes yields one set per class. A missing
// set_size means the size of the least frequent class.
struct ClassSkewGenerator {
  std::optional<int> label;
  std::optional<int> set_size;
  bool allow_replacement = true;
  std::uint64_t seed = 0;
};

enum class PerturbationNorm { kL2, kLinf };

// Per-row isotropic Gaussian noise rescaled onto the epsilon sphere of the
// chosen norm, so every perturbation has norm exactly epsilon (up to
// rounding).
struct AdditivePerturbationGenerator {
  double epsilon = 0.0;
  PerturbationNorm norm = PerturbationNorm::kL2;
  std::uint64_t seed = 0;
};

using RobustnessGenerator = std::variant<IdentityGenerator, ClassSkewGenerator,
                                         AdditivePerturbationGenerator>;

// Stable token, e.g. "identity", "class_skew", "class_skew(label=3)",
// "additive_l2(eps=0.1)".
std::string RobustnessId(const RobustnessGenerator& gen);
// Table label: "Identity", "Skewed", "L2 perturbation", "Linf perturbation".
std::string RobustnessDisplayName(const RobustnessGenerator& gen);

RobustnessGenerator RobustnessGeneratorFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const RobustnessGenerator& gen);

// Replaces the generator's own seed (if it has one).
RobustnessGenerator WithSeed(const RobustnessGenerator& gen,
                             std::uint64_t seed);

struct RobustSets {
  std::vector<LabeledDataset> sets;
  // True when some class had fewer rows than the requested set size.
  bool sampled_with_replacement = false;
};

// Throws InsufficientClassError when a class is absent (or too small with
// replacement disabled), InvalidEpsilonError for epsilon <= 0 and
// std::invalid_argument for count < 1.
RobustSets GenerateRobustSets(const RobustnessGenerator& gen,
                              const LabeledDataset& source, int count);

enum class Aggregation { kMean, kMax };

const char* AggregationName(Aggregation a);
Aggregation ParseAggregation(std::string_view name);

struct RobustError {
  ErrorEstimate error;
  std::vector<double> per_set;
};

// Mean (or max) of the per-set errors; sample sizes add. Throws
// EmptyInputError for an empty sequence.
RobustError ComputeRobustError(const TargetModel& model,
                               const std::vector<LabeledDataset>& sets,
                               const LossFunction& loss,
                               Aggregation aggregation = Aggregation::kMean);

}  // namespace interp_cert

#endif  // INTERP_CERT_ROBUSTNESS_H_

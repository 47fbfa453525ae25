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

#include "interp_cert/procedures.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "interp_cert/errors.h"
#include "interp_cert/random.h"

namespace interp_cert {

const char* ProcedureKindName(ProcedureKind kind) {
  switch (kind) {
    case ProcedureKind::kMmdGreedy:
      return "MMDGreedy";
    case ProcedureKind::kRandomPrototypes:
      return "RandomPrototypes";
    case ProcedureKind::kStepwiseFeatures:
      return "StepwiseFeatures";
    case ProcedureKind::kIdentity:
      return "Identity";
  }
  return "unknown";
}

ProcedureKind ParseProcedureKind(std::string_view name) {
  for (const ProcedureKind k :
       {ProcedureKind::kMmdGreedy, ProcedureKind::kRandomPrototypes,
        ProcedureKind::kStepwiseFeatures, ProcedureKind::kIdentity}) {
    if (name == ProcedureKindName(k)) return k;
  }
  throw std::invalid_argument("unknown procedure kind '" + std::string(name) +
                              "'");
}

std::string ProcedureSpec::display_id() const {
  return id.empty() ? ProcedureKindName(kind) : id;
}

nlohmann::json ToJson(const ProcedureSpec& spec) {
  nlohmann::json j = {{"kind", ProcedureKindName(spec.kind)},
                      {"id", spec.display_id()},
                      {"m", spec.m},
                      {"patience", spec.patience},
                      {"seed", spec.seed}};
  if (spec.kernel_bandwidth) j["bandwidth"] = *spec.kernel_bandwidth;
  if (spec.selection_loss) j["selection_loss"] = LossKindId(*spec.selection_loss);
  if (spec.complex_model_k) j["complex_model"] = {{"k", *spec.complex_model_k}};
  return j;
}

ProcedureSpec ProcedureSpecFromJson(const nlohmann::json& j) {
  ProcedureSpec spec;
  spec.kind = ParseProcedureKind(j.at("kind").get<std::string>());
  spec.id = j.value("id", std::string());
  spec.m = j.value("m", 1);
  if (j.contains("bandwidth")) spec.kernel_bandwidth = j["bandwidth"].get<double>();
  spec.patience = j.value("patience", 0);
  if (j.contains("selection_loss")) {
    spec.selection_loss = ParseLossKind(j["selection_loss"].get<std::string>());
  }
  spec.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("complex_model")) {
    spec.complex_model_k = j["complex_model"].at("k").get<int>();
  }
  return spec;
}

// ---------------------------------------------------------------------------
// MMD

Eigen::MatrixXd RbfKernelMatrix(const Eigen::MatrixXd& x, double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  const Eigen::VectorXd sq = x.rowwise().squaredNorm();
  Eigen::MatrixXd dist = -2.0 * (x * x.transpose());
  dist.colwise() += sq;
  dist.rowwise() += sq.transpose();
  // The product is not exactly symmetric in floating point; mirror it.
  dist.triangularView<Eigen::StrictlyLower>() = dist.transpose();
  const double scale = -1.0 / (2.0 * bandwidth * bandwidth);
  Eigen::MatrixXd kernel = (dist.cwiseMax(0.0) * scale).array().exp();
  kernel.diagonal().setOnes();
  return kernel;
}

double MedianHeuristicBandwidth(const LabeledDataset& data, std::uint64_t seed,
                                int max_rows) {
  const int n = data.rows();
  const int take = std::min(n, max_rows);
  Rng rng(seed);
  const std::vector<int> rows = rng.SampleWithoutReplacement(n, take);
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(take) * (take - 1) / 2);
  for (int a = 0; a < take; ++a) {
    for (int b = a + 1; b < take; ++b) {
      distances.push_back(
          (data.features().row(rows[a]) - data.features().row(rows[b])).norm());
    }
  }
  if (distances.empty()) return 1.0;
  const auto mid = distances.begin() + (distances.size() - 1) / 2;
  std::nth_element(distances.begin(), mid, distances.end());
  return *mid > 0.0 ? *mid : 1.0;
}

double MmdObjective(const Eigen::MatrixXd& kernel,
                    std::span<const int> selected) {
  if (selected.empty()) return 0.0;
  const double n = static_cast<double>(kernel.rows());
  const double k = static_cast<double>(selected.size());
  double cross = 0.0;
  double inner = 0.0;
  for (const int s : selected) {
    cross += kernel.col(s).sum();
    for (const int t : selected) inner += kernel(s, t);
  }
  return 2.0 * cross / (n * k) - inner / (k * k);
}

double MmdSquared(const Eigen::MatrixXd& kernel,
                  std::span<const int> selected) {
  const double n = static_cast<double>(kernel.rows());
  return kernel.sum() / (n * n) - MmdObjective(kernel, selected);
}

MmdSelection MmdGreedySelectDetailed(const LabeledDataset& data, int m,
                                     double bandwidth) {
  const int n = data.rows();
  if (m < 1 || m > n) {
    throw InvalidCountError("prototype count " + std::to_string(m) +
                            " outside [1, " + std::to_string(n) + "]");
  }
  const Eigen::MatrixXd kernel = RbfKernelMatrix(data.features(), bandwidth);
  const Eigen::VectorXd column_sums = kernel.colwise().sum().transpose();
  Eigen::VectorXd cross = Eigen::VectorXd::Zero(n);  // sum_{s in S} k(c, s)
  std::vector<bool> taken(n, false);
  double data_term = 0.0;   // sum_{s in S} column_sums[s]
  double proto_term = 0.0;  // sum_{s, s' in S} k(s, s')

  MmdSelection out;
  for (int step = 0; step < m; ++step) {
    const double size = step + 1.0;
    int best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < n; ++c) {
      if (taken[c]) continue;
      const double value =
          2.0 * (data_term + column_sums(c)) / (n * size) -
          (proto_term + 2.0 * cross(c) + kernel(c, c)) / (size * size);
      if (value > best_value) {
        best_value = value;
        best = c;
      }
    }
    taken[best] = true;
    data_term += column_sums(best);
    proto_term += 2.0 * cross(best) + kernel(best, best);
    cross += kernel.col(best);
    out.indices.push_back(best);
    out.objective.push_back(best_value);
  }
  return out;
}

PrototypeSet MmdGreedySelect(const LabeledDataset& data, int m,
                             double bandwidth) {
  return PrototypeSet{MmdGreedySelectDetailed(data, m, bandwidth).indices};
}

PrototypeSet RandomPrototypeSelect(const LabeledDataset& data, int m,
                                   std::uint64_t seed) {
  const int n = data.rows();
  if (m < 1 || m > n) {
    throw InvalidCountError("prototype count " + std::to_string(m) +
                            " outside [1, " + std::to_string(n) + "]");
  }
  Rng rng(seed);
  return PrototypeSet{rng.SampleWithoutReplacement(n, m)};
}

// ---------------------------------------------------------------------------
// Stepwise

namespace {

TargetModel FitFeatureModel(ModelKind kind, const LabeledDataset& data,
                            const std::vector<int>& subset) {
  switch (kind) {
    case ModelKind::kLinearRegressor:
      return FitOls(data, subset);
    case ModelKind::kLogisticClassifier:
      return FitLogistic(data, subset);
    case ModelKind::kNearestPrototypeClassifier:
      break;
  }
  throw std::invalid_argument("stepwise selection needs a feature-based model");
}

LossFunction DefaultSelectionLoss(ModelKind kind) {
  return kind == ModelKind::kLinearRegressor ? LossFunction::SquaredError()
                                             : LossFunction::ZeroOne();
}

LabeledDataset WithTargets(const LabeledDataset& data, Eigen::VectorXd targets) {
  return LabeledDataset(data.features(), std::move(targets),
                        data.feature_names(), data.provenance());
}

LabeledDataset RelabelWithComplexModel(const LabeledDataset& data,
                                       const ComplexModel& cm) {
  Eigen::VectorXd y(data.rows());
  for (int i = 0; i < data.rows(); ++i) {
    y(i) = KnnPredict(cm, data.features().row(i).transpose());
  }
  return WithTargets(data, std::move(y));
}

}  // namespace

StepwiseTrace StepwiseFeatureSelectDetailed(const LabeledDataset& data,
                                            ModelKind model_kind,
                                            const LossFunction& selection_loss,
                                            const StepwiseOptions& options) {
  const int d = data.cols();
  if (options.max_features < 1 || options.max_features > d) {
    throw InvalidCountError("max features " +
                            std::to_string(options.max_features) +
                            " outside [1, " + std::to_string(d) + "]");
  }
  if (options.patience < 0) throw std::invalid_argument("patience must be >= 0");
  const std::vector<double> halves = {0.5, 0.5};
  const auto parts = SplitIndices(data.rows(), halves, options.seed);
  LabeledDataset fit = data.Subset(parts[0]);
  LabeledDataset validation = data.Subset(parts[1]);
  if (options.complex_model != nullptr) {
    fit = RelabelWithComplexModel(fit, *options.complex_model);
    validation = RelabelWithComplexModel(validation, *options.complex_model);
  }

  auto score = [&](const std::vector<int>& subset) {
    return Evaluate(FitFeatureModel(model_kind, fit, subset), validation,
                    selection_loss)
        .value();
  };

  StepwiseTrace trace;
  trace.initial_loss = score({});
  double best_loss = trace.initial_loss;
  std::size_t best_prefix = 0;
  int streak = 0;
  std::vector<bool> used(d, false);
  while (static_cast<int>(trace.tried.size()) < options.max_features) {
    int best_feature = -1;
    double round_best = std::numeric_limits<double>::infinity();
    std::vector<int> candidate = trace.tried;
    candidate.push_back(-1);
    for (int f = 0; f < d; ++f) {
      if (used[f]) continue;
      candidate.back() = f;
      const double loss = score(candidate);
      if (loss < round_best) {
        round_best = loss;
        best_feature = f;
      }
    }
    if (best_feature < 0) break;
    used[best_feature] = true;
    trace.tried.push_back(best_feature);
    trace.validation_loss.push_back(round_best);
    if (round_best < best_loss) {
      best_loss = round_best;
      best_prefix = trace.tried.size();
      streak = 0;
    } else if (++streak > options.patience) {
      break;
    }
  }
  trace.selected.assign(trace.tried.begin(),
                        trace.tried.begin() + static_cast<long>(best_prefix));
  return trace;
}

FeatureSubset StepwiseFeatureSelect(const LabeledDataset& data,
                                    ModelKind model_kind,
                                    const LossFunction& selection_loss,
                                    int max_features, int patience,
                                    std::uint64_t seed) {
  StepwiseOptions options;
  options.max_features = max_features;
  options.patience = patience;
  options.seed = seed;
  return FeatureSubset{
      StepwiseFeatureSelectDetailed(data, model_kind, selection_loss, options)
          .selected};
}

// ---------------------------------------------------------------------------

ParameterAdjustment IdentityProcedure(const TargetModel& model) {
  return ParameterAdjustment{model.parameters()};
}

ProcedureOutput RunProcedure(const ProcedureSpec& spec, const TargetModel& tm,
                             const LabeledDataset& train) {
  nlohmann::json audit = {{"procedure", ToJson(spec)}};
  switch (spec.kind) {
    case ProcedureKind::kMmdGreedy: {
      const double bandwidth =
          spec.kernel_bandwidth
              ? *spec.kernel_bandwidth
              : MedianHeuristicBandwidth(train, DeriveKey(spec.seed, "bandwidth"));
      MmdSelection sel = MmdGreedySelectDetailed(train, spec.m, bandwidth);
      audit["kernel_bandwidth"] = bandwidth;
      audit["mmd_objective"] = sel.objective.back();
      return {PrototypeSet{std::move(sel.indices)}, std::move(audit)};
    }
    case ProcedureKind::kRandomPrototypes:
      return {RandomPrototypeSelect(train, spec.m, spec.seed), std::move(audit)};
    case ProcedureKind::kStepwiseFeatures: {
      if (tm.kind() == ModelKind::kNearestPrototypeClassifier) {
        throw RepresentationError(
            "FeatureSubset is outside the representational power of "
            "NearestPrototypeClassifier");
      }
      const LossFunction selection_loss =
          spec.selection_loss ? LossFunction{*spec.selection_loss, {}}
                              : DefaultSelectionLoss(tm.kind());
      StepwiseOptions options;
      options.max_features = spec.m;
      options.patience = spec.patience;
      options.seed = spec.seed;
      std::optional<ComplexModel> cm;
      if (spec.complex_model_k) {
        cm.emplace(train, *spec.complex_model_k,
                   tm.kind() == ModelKind::kLinearRegressor
                       ? Task::kRegression
                       : Task::kClassification);
        options.complex_model = &*cm;
      }
      StepwiseTrace trace =
          StepwiseFeatureSelectDetailed(train, tm.kind(), selection_loss, options);
      audit["stepwise_tried"] = trace.tried;
      audit["stepwise_validation_loss"] = trace.validation_loss;
      audit["stepwise_initial_loss"] = trace.initial_loss;
      return {FeatureSubset{std::move(trace.selected)}, std::move(audit)};
    }
    case ProcedureKind::kIdentity:
      return {IdentityProcedure(tm), std::move(audit)};
  }
  throw std::invalid_argument("unknown procedure kind");
}

namespace {

nlohmann::json SummarizeInformation(const Information& info) {
  if (std::holds_alternative<FeatureSubset>(info) ||
      std::holds_alternative<PrototypeSet>(info)) {
    return ToJson(info);
  }
  const Eigen::Index size =
      std::holds_alternative<ParameterAdjustment>(info)
          ? std::get<ParameterAdjustment>(info).parameters.size()
          : std::get<InstanceWeights>(info).weights.size();
  return {{"kind", InformationKindName(KindOf(info))}, {"size", size}};
}

}  // namespace

InterpretabilityCertificate RunPipeline(
    const ProcedureSpec& procedure, const TargetModel& tm,
    const LabeledDataset& train, const LabeledDataset& test,
    const std::vector<LabeledDataset>& robust_sets, const LossFunction& loss,
    const PipelineContext& context) {
  const ErrorEstimate base_t = Evaluate(tm, test, loss);
  const RobustError base_r =
      ComputeRobustError(tm, robust_sets, loss, context.aggregation);

  ProcedureOutput out = RunProcedure(procedure, tm, train);
  const TargetModel improved = ApplyInformation(tm, out.information, train);

  const ErrorEstimate new_t = Evaluate(improved, test, loss);
  const RobustError new_r =
      ComputeRobustError(improved, robust_sets, loss, context.aggregation);

  nlohmann::json audit = std::move(out.audit);
  audit["information"] = SummarizeInformation(out.information);
  audit["robust_aggregation"] = AggregationName(context.aggregation);
  audit["robust_set_errors_base"] = base_r.per_set;
  audit["robust_set_errors_new"] = new_r.per_set;
  audit["robust_sampled_with_replacement"] =
      context.robust_sampled_with_replacement;

  return Certify(base_t, base_r.error, new_t, new_r.error,
                 CertificateIds{procedure.display_id(), context.target_model_id,
                                context.robustness_id},
                 context.seed, std::move(audit));
}

}  // namespace interp_cert

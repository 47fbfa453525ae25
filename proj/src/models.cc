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

#include "interp_cert/models.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "interp_cert/errors.h"

namespace interp_cert {

InformationKind KindOf(const Information& info) {
  return static_cast<InformationKind>(info.index());
}

const char* InformationKindName(InformationKind kind) {
  switch (kind) {
    case InformationKind::kFeatureSubset:
      return "FeatureSubset";
    case InformationKind::kPrototypeSet:
      return "PrototypeSet";
    case InformationKind::kParameterAdjustment:
      return "ParameterAdjustment";
    case InformationKind::kInstanceWeights:
      return "InstanceWeights";
  }
  return "unknown";
}

namespace {

InformationKind ParseInformationKind(std::string_view name) {
  for (const InformationKind k :
       {InformationKind::kFeatureSubset, InformationKind::kPrototypeSet,
        InformationKind::kParameterAdjustment,
        InformationKind::kInstanceWeights}) {
    if (name == InformationKindName(k)) return k;
  }
  throw std::invalid_argument("unknown information kind '" +
                              std::string(name) + "'");
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd FromStd(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json ToJson(const Information& info) {
  nlohmann::json j;
  j["kind"] = InformationKindName(KindOf(info));
  std::visit(
      [&j](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, FeatureSubset> ||
                      std::is_same_v<T, PrototypeSet>) {
          j["indices"] = payload.indices;
        } else if constexpr (std::is_same_v<T, ParameterAdjustment>) {
          j["parameters"] = ToStd(payload.parameters);
        } else {
          j["weights"] = ToStd(payload.weights);
        }
      },
      info);
  return j;
}

const char* ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinearRegressor:
      return "LinearRegressor";
    case ModelKind::kNearestPrototypeClassifier:
      return "NearestPrototypeClassifier";
    case ModelKind::kLogisticClassifier:
      return "LogisticClassifier";
  }
  return "unknown";
}

ModelKind ParseModelKind(std::string_view name) {
  if (name == "LinearRegressor" || name == "OLS") {
    return ModelKind::kLinearRegressor;
  }
  if (name == "NearestPrototypeClassifier" || name == "NPC") {
    return ModelKind::kNearestPrototypeClassifier;
  }
  if (name == "LogisticClassifier" || name == "SLR") {
    return ModelKind::kLogisticClassifier;
  }
  throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

std::set<InformationKind> DefaultAcceptedInformation(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinearRegressor:
    case ModelKind::kLogisticClassifier:
      return {InformationKind::kFeatureSubset,
              InformationKind::kParameterAdjustment,
              InformationKind::kInstanceWeights};
    case ModelKind::kNearestPrototypeClassifier:
      return {InformationKind::kPrototypeSet,
              InformationKind::kParameterAdjustment};
  }
  return {};
}

// ---------------------------------------------------------------------------
// TargetModel

Eigen::VectorXd TargetModel::parameters() const {
  if (kind_ == ModelKind::kNearestPrototypeClassifier) {
    Eigen::VectorXd out(prototypes_.size());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < prototypes_.rows(); ++i) {
      for (Eigen::Index j = 0; j < prototypes_.cols(); ++j) {
        out(k++) = prototypes_(i, j);
      }
    }
    return out;
  }
  Eigen::VectorXd out(weights_.size() + 1);
  out.head(weights_.size()) = weights_;
  out(weights_.size()) = intercept_;
  return out;
}

double TargetModel::Predict(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim_) {
    throw DimensionMismatchError("model expects " + std::to_string(input_dim_) +
                                 " features, got " + std::to_string(x.size()));
  }
  switch (kind_) {
    case ModelKind::kNearestPrototypeClassifier:
      return NpcPredict(*this, x);
    case ModelKind::kLinearRegressor:
    case ModelKind::kLogisticClassifier: {
      double z = intercept_;
      for (std::size_t k = 0; k < feature_subset_.size(); ++k) {
        z += weights_(static_cast<Eigen::Index>(k)) * x(feature_subset_[k]);
      }
      if (kind_ == ModelKind::kLinearRegressor) return z;
      return z > 0.0 ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

Eigen::VectorXd TargetModel::PredictBatch(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim_) {
    throw DimensionMismatchError("model expects " + std::to_string(input_dim_) +
                                 " features, got " + std::to_string(x.cols()));
  }
  Eigen::VectorXd out(x.rows());
  if (kind_ == ModelKind::kNearestPrototypeClassifier) {
    if (prototypes_.rows() == 0) throw EmptyPrototypeError("NPC has no prototypes");
    // Column-major copies keep every prototype and query contiguous; the
    // distance arithmetic (and thus tie behavior) matches NpcPredict.
    const Eigen::MatrixXd protos = prototypes_.transpose();
    const Eigen::MatrixXd queries = x.transpose();
    for (Eigen::Index i = 0; i < queries.cols(); ++i) {
      Eigen::Index best = 0;
      double best_distance = (protos.col(0) - queries.col(i)).squaredNorm();
      for (Eigen::Index p = 1; p < protos.cols(); ++p) {
        const double d = (protos.col(p) - queries.col(i)).squaredNorm();
        if (d < best_distance) {
          best_distance = d;
          best = p;
        }
      }
      out(i) = static_cast<double>(std::lround(prototype_labels_(best)));
    }
    return out;
  }
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out(i) = Predict(x.row(i).transpose());
  }
  return out;
}

TargetModel TargetModel::WithAcceptedInformation(
    std::set<InformationKind> accepted) const {
  const std::set<InformationKind> representable =
      DefaultAcceptedInformation(kind_);
  for (const InformationKind k : accepted) {
    if (!representable.count(k)) {
      throw std::invalid_argument(std::string(ModelKindName(kind_)) +
                                  " cannot represent " +
                                  InformationKindName(k));
    }
  }
  TargetModel copy = *this;
  copy.accepted_ = std::move(accepted);
  return copy;
}

TargetModel TargetModel::WithLossId(std::string loss_id) const {
  TargetModel copy = *this;
  copy.loss_id_ = std::move(loss_id);
  return copy;
}

bool TargetModel::operator==(const TargetModel& other) const {
  auto same = [](const auto& a, const auto& b) {
    return a.size() == b.size() && (a.size() == 0 || a == b);
  };
  auto same_matrix = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.size() == 0 || a == b);
  };
  return kind_ == other.kind_ && accepted_ == other.accepted_ &&
         loss_id_ == other.loss_id_ && input_dim_ == other.input_dim_ &&
         feature_subset_ == other.feature_subset_ &&
         same(weights_, other.weights_) && intercept_ == other.intercept_ &&
         same(instance_weights_, other.instance_weights_) &&
         same_matrix(prototypes_, other.prototypes_) &&
         same(prototype_labels_, other.prototype_labels_) &&
         prototype_indices_ == other.prototype_indices_;
}

// ---------------------------------------------------------------------------
// Fitting helpers

namespace {

std::vector<int> ResolveSubset(const LabeledDataset& data,
                               const std::optional<std::vector<int>>& subset) {
  std::vector<int> out;
  if (!subset) {
    out.resize(data.cols());
    for (int j = 0; j < data.cols(); ++j) out[j] = j;
    return out;
  }
  for (const int f : *subset) {
    if (f < 0 || f >= data.cols()) {
      throw InvalidInformationError("feature index " + std::to_string(f) +
                                    " out of range");
    }
  }
  return *subset;
}

// Returns weights rescaled to mean 1, or an empty vector for uniform weights.
Eigen::VectorXd NormalizeWeights(const Eigen::VectorXd* weights, int n) {
  if (weights == nullptr || weights->size() == 0) return {};
  if (weights->size() != n) {
    throw DimensionMismatchError("one instance weight per training row");
  }
  if (!weights->allFinite() || (weights->array() < 0.0).any()) {
    throw InvalidInformationError("instance weights must be finite and >= 0");
  }
  const double total = weights->sum();
  if (!(total > 0.0)) {
    throw InvalidInformationError("instance weights must have positive sum");
  }
  return *weights * (static_cast<double>(n) / total);
}

Eigen::MatrixXd SelectColumns(const Eigen::MatrixXd& x,
                              const std::vector<int>& columns) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = x.col(columns[k]);
  }
  return out;
}

double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

TargetModel FitOls(const LabeledDataset& data,
                   std::optional<std::vector<int>> feature_subset,
                   const Eigen::VectorXd* instance_weights) {
  const std::vector<int> subset = ResolveSubset(data, feature_subset);
  const int n = data.rows();
  const auto p = static_cast<Eigen::Index>(subset.size());
  const Eigen::VectorXd w = NormalizeWeights(instance_weights, n);
  const Eigen::VectorXd v = w.size() ? w : Eigen::VectorXd::Ones(n);

  const int effective_rows = static_cast<int>((v.array() > 0.0).count());
  if (effective_rows <= p) {
    throw RankDeficientError("need more rows than fitted features");
  }

  const Eigen::MatrixXd x = SelectColumns(data.features(), subset);
  const double total = v.sum();
  const Eigen::RowVectorXd x_mean = (v.transpose() * x) / total;
  const double y_mean = v.dot(data.targets()) / total;

  TargetModel model;
  model.kind_ = ModelKind::kLinearRegressor;
  model.accepted_ = DefaultAcceptedInformation(model.kind_);
  model.input_dim_ = data.cols();
  model.feature_subset_ = subset;
  model.instance_weights_ = w;
  if (p == 0) {
    model.weights_ = Eigen::VectorXd(0);
    model.intercept_ = y_mean;
    return model;
  }

  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::VectorXd yc = data.targets().array() - y_mean;
  const Eigen::MatrixXd normal = xc.transpose() * v.asDiagonal() * xc;
  const Eigen::VectorXd rhs = xc.transpose() * (v.array() * yc.array()).matrix();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    throw RankDeficientError("normal equations are singular (rank " +
                             std::to_string(qr.rank()) + " < " +
                             std::to_string(p) + ")");
  }
  model.weights_ = qr.solve(rhs);
  model.intercept_ = y_mean - x_mean.dot(model.weights_);
  return model;
}

double LogisticObjective(const Eigen::VectorXd& params,
                         const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& sample_weights, double l2) {
  const Eigen::Index p = x.cols();
  const Eigen::VectorXd z = (x * params.head(p)).array() + params(p);
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double vi = sample_weights.size() ? sample_weights(i) : 1.0;
    total += vi * (Softplus(z(i)) - y(i) * z(i));
  }
  return total / static_cast<double>(x.rows()) +
         0.5 * l2 * params.head(p).squaredNorm();
}

Eigen::VectorXd LogisticGradient(const Eigen::VectorXd& params,
                                 const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& sample_weights,
                                 double l2) {
  const Eigen::Index p = x.cols();
  const Eigen::VectorXd z = (x * params.head(p)).array() + params(p);
  Eigen::VectorXd residual(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double vi = sample_weights.size() ? sample_weights(i) : 1.0;
    residual(i) = vi * (Sigmoid(z(i)) - y(i));
  }
  const double n = static_cast<double>(x.rows());
  Eigen::VectorXd grad(p + 1);
  grad.head(p) = x.transpose() * residual / n + l2 * params.head(p);
  grad(p) = residual.sum() / n;
  return grad;
}

TargetModel FitLogistic(const LabeledDataset& data,
                        std::optional<std::vector<int>> feature_subset,
                        const Eigen::VectorXd* instance_weights,
                        const LogisticOptions& options) {
  const std::vector<int> subset = ResolveSubset(data, feature_subset);
  const int n = data.rows();
  const Eigen::VectorXd& y = data.targets();
  bool has_zero = false;
  bool has_one = false;
  for (int i = 0; i < n; ++i) {
    if (y(i) == 0.0) {
      has_zero = true;
    } else if (y(i) == 1.0) {
      has_one = true;
    } else {
      throw InvalidTargetError("logistic labels must be 0 or 1");
    }
  }
  if (!has_zero || !has_one) {
    throw SingleClassError("logistic fit needs both classes present");
  }
  const Eigen::VectorXd w = NormalizeWeights(instance_weights, n);
  const Eigen::MatrixXd x = SelectColumns(data.features(), subset);
  const Eigen::Index p = x.cols();

  // Smoothness constant of the objective: 0.25 * lambda_max(X~' V X~ / n) + l2
  // with X~ = [X, 1].
  Eigen::MatrixXd augmented(n, p + 1);
  augmented.leftCols(p) = x;
  augmented.col(p).setOnes();
  const Eigen::VectorXd v = w.size() ? w : Eigen::VectorXd::Ones(n);
  const Eigen::MatrixXd gram =
      augmented.transpose() * v.asDiagonal() * augmented / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram,
                                                     Eigen::EigenvaluesOnly);
  const double lipschitz = 0.25 * eig.eigenvalues().maxCoeff() + options.l2;
  const double step = 1.0 / lipschitz;

  Eigen::VectorXd params = Eigen::VectorXd::Zero(p + 1);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd grad = LogisticGradient(params, x, y, w, options.l2);
    if (grad.norm() <= options.gradient_tolerance) break;
    params -= step * grad;
  }

  TargetModel model;
  model.kind_ = ModelKind::kLogisticClassifier;
  model.accepted_ = DefaultAcceptedInformation(model.kind_);
  model.input_dim_ = data.cols();
  model.feature_subset_ = subset;
  model.weights_ = params.head(p);
  model.intercept_ = params(p);
  model.instance_weights_ = w;
  model.logistic_options_ = options;
  return model;
}

TargetModel MakeNearestPrototypeClassifier(const LabeledDataset& training,
                                           std::span<const int> indices) {
  if (indices.empty()) throw EmptyPrototypeError("no prototypes given");
  for (const int i : indices) {
    if (i < 0 || i >= training.rows()) {
      throw InvalidInformationError("prototype index " + std::to_string(i) +
                                    " out of range");
    }
  }
  const LabeledDataset rows = training.Subset(indices);
  TargetModel model =
      MakeNearestPrototypeClassifier(rows.features(), rows.targets());
  model.prototype_indices_.assign(indices.begin(), indices.end());
  return model;
}

TargetModel MakeNearestPrototypeClassifier(Eigen::MatrixXd prototypes,
                                           Eigen::VectorXd labels) {
  if (prototypes.rows() == 0) throw EmptyPrototypeError("no prototypes given");
  if (labels.size() != prototypes.rows()) {
    throw DimensionMismatchError("one label per prototype");
  }
  if (!prototypes.allFinite() || !labels.allFinite()) {
    throw InvalidInformationError("prototypes must be finite");
  }
  TargetModel model;
  model.kind_ = ModelKind::kNearestPrototypeClassifier;
  model.accepted_ = DefaultAcceptedInformation(model.kind_);
  model.input_dim_ = static_cast<int>(prototypes.cols());
  model.prototypes_ = std::move(prototypes);
  model.prototype_labels_ = std::move(labels);
  return model;
}

int NpcPredict(const TargetModel& model, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd& protos = model.prototypes();
  if (protos.rows() == 0) throw EmptyPrototypeError("NPC has no prototypes");
  if (x.size() != protos.cols()) {
    throw DimensionMismatchError("query dimension differs from prototypes");
  }
  Eigen::Index best = 0;
  double best_distance = (protos.row(0).transpose() - x).squaredNorm();
  for (Eigen::Index i = 1; i < protos.rows(); ++i) {
    const double d = (protos.row(i).transpose() - x).squaredNorm();
    if (d < best_distance) {
      best_distance = d;
      best = i;
    }
  }
  return static_cast<int>(std::lround(model.prototype_labels()(best)));
}

TargetModel ApplyInformation(const TargetModel& model, const Information& info,
                             const LabeledDataset& training) {
  const InformationKind kind = KindOf(info);
  if (!model.accepted_information().count(kind)) {
    throw RepresentationError(std::string(InformationKindName(kind)) +
                              " is outside the representational power of " +
                              ModelKindName(model.kind()));
  }
  if (training.cols() != model.input_dim()) {
    throw DimensionMismatchError("training data dimension differs from model");
  }
  const Eigen::VectorXd* reuse_weights =
      model.instance_weights().size() == training.rows()
          ? &model.instance_weights()
          : nullptr;

  auto refit = [&](std::optional<std::vector<int>> subset,
                   const Eigen::VectorXd* weights) {
    TargetModel fitted =
        model.kind() == ModelKind::kLinearRegressor
            ? FitOls(training, std::move(subset), weights)
            : FitLogistic(training, std::move(subset), weights,
                          model.logistic_options());
    fitted.accepted_ = model.accepted_;
    fitted.loss_id_ = model.loss_id_;
    return fitted;
  };

  switch (kind) {
    case InformationKind::kFeatureSubset:
      return refit(std::get<FeatureSubset>(info).indices, reuse_weights);
    case InformationKind::kInstanceWeights: {
      const Eigen::VectorXd& w = std::get<InstanceWeights>(info).weights;
      if (w.size() != training.rows()) {
        throw InvalidInformationError("one instance weight per training row");
      }
      return refit(model.feature_subset(), &w);
    }
    case InformationKind::kPrototypeSet: {
      TargetModel out = MakeNearestPrototypeClassifier(
          training, std::get<PrototypeSet>(info).indices);
      out.accepted_ = model.accepted_;
      out.loss_id_ = model.loss_id_;
      return out;
    }
    case InformationKind::kParameterAdjustment: {
      const Eigen::VectorXd& params =
          std::get<ParameterAdjustment>(info).parameters;
      if (params.size() != model.parameters().size()) {
        throw DimensionMismatchError(
            "parameter adjustment has " + std::to_string(params.size()) +
            " entries, model has " + std::to_string(model.parameters().size()));
      }
      if (!params.allFinite()) {
        throw InvalidInformationError("parameters must be finite");
      }
      TargetModel out = model;
      if (model.kind() == ModelKind::kNearestPrototypeClassifier) {
        Eigen::Index k = 0;
        for (Eigen::Index i = 0; i < out.prototypes_.rows(); ++i) {
          for (Eigen::Index j = 0; j < out.prototypes_.cols(); ++j) {
            out.prototypes_(i, j) = params(k++);
          }
        }
      } else {
        out.weights_ = params.head(params.size() - 1);
        out.intercept_ = params(params.size() - 1);
      }
      return out;
    }
  }
  throw InvalidInformationError("unknown information kind");
}

ErrorEstimate Evaluate(const TargetModel& model, const LabeledDataset& data,
                       const LossFunction& loss) {
  if (data.cols() != model.input_dim()) {
    throw DimensionMismatchError("model expects " +
                                 std::to_string(model.input_dim()) +
                                 " features, data has " +
                                 std::to_string(data.cols()));
  }
  if (loss.kind == LossKind::kFeatureRecallComplement) {
    if (model.kind() == ModelKind::kNearestPrototypeClassifier) {
      throw IncompatibleLossError("NPC has no feature subset to score");
    }
    return ErrorEstimate(
        FeatureRecallComplement(model.feature_subset(), loss.truth),
        data.rows(), loss.id());
  }
  if (loss.kind == LossKind::kZeroOne &&
      model.kind() == ModelKind::kLinearRegressor) {
    throw IncompatibleLossError("classification error needs a classifier");
  }
  return EvaluatePredictions(model.PredictBatch(data.features()),
                             data.targets(), loss);
}

ErrorEstimate ExactExpectedError(const FiniteDomainSpec& spec,
                                 const TargetModel& model,
                                 const LossFunction& loss) {
  if (loss.kind == LossKind::kFeatureRecallComplement) {
    if (model.kind() == ModelKind::kNearestPrototypeClassifier) {
      throw IncompatibleLossError("NPC has no feature subset to score");
    }
    return ErrorEstimate(
        FeatureRecallComplement(model.feature_subset(), loss.truth),
        spec.domain_size(), loss.id());
  }
  return ExactExpectedError(
      spec, [&model](const Eigen::VectorXd& x) { return model.Predict(x); },
      loss);
}

nlohmann::json ToJson(const TargetModel& model) {
  nlohmann::json j;
  j["kind"] = ModelKindName(model.kind());
  j["loss_id"] = model.loss_id();
  j["input_dim"] = model.input_dim();
  std::vector<std::string> accepted;
  for (const InformationKind k : model.accepted_information()) {
    accepted.emplace_back(InformationKindName(k));
  }
  j["accepted_information"] = accepted;
  nlohmann::json params;
  if (model.kind() == ModelKind::kNearestPrototypeClassifier) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < model.prototypes().rows(); ++i) {
      rows.push_back(ToStd(model.prototypes().row(i).transpose()));
    }
    params["prototypes"] = rows;
    params["labels"] = ToStd(model.prototype_labels());
    params["prototype_indices"] = model.prototype_indices();
  } else {
    params["feature_subset"] = model.feature_subset();
    params["weights"] = ToStd(model.weights());
    params["intercept"] = model.intercept();
    if (model.instance_weights().size()) {
      params["instance_weights"] = ToStd(model.instance_weights());
    }
    if (model.kind() == ModelKind::kLogisticClassifier) {
      params["l2"] = model.logistic_options().l2;
    }
  }
  j["parameters"] = params;
  return j;
}

TargetModel TargetModelFromJson(const nlohmann::json& j) {
  TargetModel model;
  model.kind_ = ParseModelKind(j.at("kind").get<std::string>());
  model.loss_id_ = j.value("loss_id", std::string());
  model.input_dim_ = j.at("input_dim").get<int>();
  for (const auto& name : j.at("accepted_information")) {
    model.accepted_.insert(ParseInformationKind(name.get<std::string>()));
  }
  const auto& params = j.at("parameters");
  if (model.kind_ == ModelKind::kNearestPrototypeClassifier) {
    const auto& rows = params.at("prototypes");
    model.prototypes_.resize(static_cast<Eigen::Index>(rows.size()),
                             model.input_dim_);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto row = rows[i].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != model.input_dim_) {
        throw DimensionMismatchError("prototype row has wrong length");
      }
      model.prototypes_.row(static_cast<Eigen::Index>(i)) = FromStd(row);
    }
    model.prototype_labels_ =
        FromStd(params.at("labels").get<std::vector<double>>());
    model.prototype_indices_ =
        params.value("prototype_indices", std::vector<int>{});
  } else {
    model.feature_subset_ = params.at("feature_subset").get<std::vector<int>>();
    model.weights_ = FromStd(params.at("weights").get<std::vector<double>>());
    model.intercept_ = params.at("intercept").get<double>();
    if (params.contains("instance_weights")) {
      model.instance_weights_ =
          FromStd(params["instance_weights"].get<std::vector<double>>());
    }
    if (params.contains("l2")) {
      model.logistic_options_.l2 = params["l2"].get<double>();
    }
    if (model.weights_.size() !=
        static_cast<Eigen::Index>(model.feature_subset_.size())) {
      throw DimensionMismatchError("one weight per selected feature");
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// ComplexModel

ComplexModel::ComplexModel(LabeledDataset training, int k, Task task)
    : training_(std::move(training)), k_(k), task_(task) {
  if (k_ < 1 || k_ > training_.rows()) {
    throw std::invalid_argument("k must lie in [1, training size]");
  }
}

double KnnPredict(const ComplexModel& model, const Eigen::VectorXd& x) {
  const LabeledDataset& train = model.training();
  if (train.rows() == 0) throw EmptyTrainingError("k-NN has no training rows");
  if (x.size() != train.cols()) {
    throw DimensionMismatchError("query dimension differs from training data");
  }
  std::vector<std::pair<double, int>> by_distance(train.rows());
  for (int i = 0; i < train.rows(); ++i) {
    by_distance[i] = {(train.features().row(i).transpose() - x).squaredNorm(),
                      i};
  }
  const int k = model.k();
  std::partial_sort(by_distance.begin(), by_distance.begin() + k,
                    by_distance.end());
  if (model.task() == Task::kRegression) {
    double sum = 0.0;
    for (int r = 0; r < k; ++r) sum += train.targets()(by_distance[r].second);
    return sum / k;
  }
  std::map<int, int> votes;
  for (int r = 0; r < k; ++r) {
    ++votes[static_cast<int>(std::lround(train.targets()(by_distance[r].second)))];
  }
  int best_label = votes.begin()->first;
  int best_count = votes.begin()->second;
  for (const auto& [label, count] : votes) {
    if (count > best_count) {
      best_label = label;
      best_count = count;
    }
  }
  return best_label;
}

ErrorEstimate Evaluate(const ComplexModel& model, const LabeledDataset& data,
                       const LossFunction& loss) {
  if (data.cols() != model.training().cols()) {
    throw DimensionMismatchError("data dimension differs from training data");
  }
  if (loss.kind == LossKind::kFeatureRecallComplement) {
    throw IncompatibleLossError("k-NN has no feature subset to score");
  }
  Eigen::VectorXd predictions(data.rows());
  for (int i = 0; i < data.rows(); ++i) {
    predictions(i) = KnnPredict(model, data.features().row(i).transpose());
  }
  return EvaluatePredictions(predictions, data.targets(), loss);
}

}  // namespace interp_cert

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

#include "interp_cert/robustness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "interp_cert/errors.h"
#include "interp_cert/random.h"

namespace interp_cert {
namespace {

std::string FormatNumber(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

const char* NormName(PerturbationNorm norm) {
  return norm == PerturbationNorm::kL2 ? "l2" : "linf";
}

std::vector<LabeledDataset> SkewedSets(const ClassSkewGenerator& gen,
                                       const LabeledDataset& source, int count,
                                       bool* with_replacement) {
  std::vector<int> labels;
  if (gen.label) {
    labels = {*gen.label};
  } else {
    labels = source.ClassLabels();
  }

  int size = 0;
  if (gen.set_size) {
    if (*gen.set_size < 1) {
      throw std::invalid_argument("skewed set size must be >= 1");
    }
    size = *gen.set_size;
  } else {
    size = std::numeric_limits<int>::max();
    for (const int label : labels) {
      size = std::min(size, static_cast<int>(source.RowsWithLabel(label).size()));
    }
  }

  Rng rng(gen.seed);
  std::vector<LabeledDataset> out;
  for (int s = 0; s < count; ++s) {
    const int label = labels[static_cast<std::size_t>(s) % labels.size()];
    const std::vector<int> rows = source.RowsWithLabel(label);
    if (rows.empty()) {
      throw InsufficientClassError("class " + std::to_string(label) +
                                   " has no rows");
    }
    Rng set_rng = rng.Child(static_cast<std::uint64_t>(s));
    std::vector<int> picked;
    if (static_cast<int>(rows.size()) >= size) {
      for (const int k :
           set_rng.SampleWithoutReplacement(static_cast<int>(rows.size()), size)) {
        picked.push_back(rows[k]);
      }
    } else {
      if (!gen.allow_replacement) {
        throw InsufficientClassError(
            "class " + std::to_string(label) + " has " +
            std::to_string(rows.size()) + " rows, need " + std::to_string(size));
      }
      *with_replacement = true;
      for (int k = 0; k < size; ++k) {
        picked.push_back(rows[set_rng.UniformInt(rows.size())]);
      }
    }
    LabeledDataset set = source.Subset(picked);
    nlohmann::json prov = set.provenance();
    prov["skew_label"] = label;
    out.emplace_back(set.features(), set.targets(), set.feature_names(),
                     std::move(prov));
  }
  return out;
}

std::vector<LabeledDataset> PerturbedSets(
    const AdditivePerturbationGenerator& gen, const LabeledDataset& source,
    int count) {
  if (!(gen.epsilon > 0.0) || !std::isfinite(gen.epsilon)) {
    throw InvalidEpsilonError("epsilon must be a positive finite number");
  }
  Rng rng(gen.seed);
  std::vector<LabeledDataset> out;
  for (int s = 0; s < count; ++s) {
    Rng set_rng = rng.Child(static_cast<std::uint64_t>(s));
    Eigen::MatrixXd x = source.features();
    Eigen::VectorXd eta(x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double norm = 0.0;
      do {
        for (Eigen::Index j = 0; j < eta.size(); ++j) eta(j) = set_rng.Normal();
        norm = gen.norm == PerturbationNorm::kL2 ? eta.norm()
                                                 : eta.cwiseAbs().maxCoeff();
      } while (norm == 0.0);
      x.row(i) += (eta * (gen.epsilon / norm)).transpose();
    }
    out.emplace_back(std::move(x), source.targets(), source.feature_names(),
                     source.provenance());
  }
  return out;
}

}  // namespace

std::string RobustnessId(const RobustnessGenerator& gen) {
  return std::visit(
      [](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, IdentityGenerator>) {
          return "identity";
        } else if constexpr (std::is_same_v<T, ClassSkewGenerator>) {
          std::string id = "class_skew";
          std::vector<std::string> parts;
          if (g.label) parts.push_back("label=" + std::to_string(*g.label));
          if (g.set_size) parts.push_back("size=" + std::to_string(*g.set_size));
          if (!parts.empty()) {
            id += "(";
            for (std::size_t i = 0; i < parts.size(); ++i) {
              if (i) id += ",";
              id += parts[i];
            }
            id += ")";
          }
          return id;
        } else {
          return std::string("additive_") + NormName(g.norm) +
                 "(eps=" + FormatNumber(g.epsilon) + ")";
        }
      },
      gen);
}

std::string RobustnessDisplayName(const RobustnessGenerator& gen) {
  switch (gen.index()) {
    case 0:
      return "Identity";
    case 1:
      return "Skewed";
    default:
      return std::get<AdditivePerturbationGenerator>(gen).norm ==
                     PerturbationNorm::kL2
                 ? "L2 perturbation"
                 : "Linf perturbation";
  }
}

RobustnessGenerator RobustnessGeneratorFromJson(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "Identity") return IdentityGenerator{};
  if (kind == "ClassSkew") {
    ClassSkewGenerator g;
    if (j.contains("class")) g.label = j["class"].get<int>();
    if (j.contains("set_size")) g.set_size = j["set_size"].get<int>();
    g.allow_replacement = j.value("allow_replacement", true);
    g.seed = j.value("seed", std::uint64_t{0});
    return g;
  }
  if (kind == "AdditivePerturbation") {
    AdditivePerturbationGenerator g;
    g.epsilon = j.at("epsilon").get<double>();
    const std::string norm = j.value("norm", std::string("L2"));
    if (norm == "L2") {
      g.norm = PerturbationNorm::kL2;
    } else if (norm == "Linf") {
      g.norm = PerturbationNorm::kLinf;
    } else {
      throw std::invalid_argument("norm must be L2 or Linf");
    }
    g.seed = j.value("seed", std::uint64_t{0});
    return g;
  }
  throw std::invalid_argument("unknown robustness generator '" + kind + "'");
}

nlohmann::json ToJson(const RobustnessGenerator& gen) {
  return std::visit(
      [](const auto& g) -> nlohmann::json {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, IdentityGenerator>) {
          return {{"kind", "Identity"}};
        } else if constexpr (std::is_same_v<T, ClassSkewGenerator>) {
          nlohmann::json j = {{"kind", "ClassSkew"},
                              {"allow_replacement", g.allow_replacement},
                              {"seed", g.seed}};
          if (g.label) j["class"] = *g.label;
          if (g.set_size) j["set_size"] = *g.set_size;
          return j;
        } else {
          return {{"kind", "AdditivePerturbation"},
                  {"epsilon", g.epsilon},
                  {"norm", g.norm == PerturbationNorm::kL2 ? "L2" : "Linf"},
                  {"seed", g.seed}};
        }
      },
      gen);
}

RobustnessGenerator WithSeed(const RobustnessGenerator& gen,
                             std::uint64_t seed) {
  RobustnessGenerator out = gen;
  if (auto* g = std::get_if<ClassSkewGenerator>(&out)) g->seed = seed;
  if (auto* g = std::get_if<AdditivePerturbationGenerator>(&out)) g->seed = seed;
  return out;
}

RobustSets GenerateRobustSets(const RobustnessGenerator& gen,
                              const LabeledDataset& source, int count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  RobustSets out;
  if (std::holds_alternative<IdentityGenerator>(gen)) {
    out.sets.assign(static_cast<std::size_t>(count), source);
  } else if (const auto* skew = std::get_if<ClassSkewGenerator>(&gen)) {
    out.sets = SkewedSets(*skew, source, count, &out.sampled_with_replacement);
  } else {
    out.sets = PerturbedSets(std::get<AdditivePerturbationGenerator>(gen),
                             source, count);
  }
  return out;
}

const char* AggregationName(Aggregation a) {
  return a == Aggregation::kMean ? "mean" : "max";
}

Aggregation ParseAggregation(std::string_view name) {
  if (name == "mean") return Aggregation::kMean;
  if (name == "max") return Aggregation::kMax;
  throw std::invalid_argument("aggregation must be 'mean' or 'max'");
}

RobustError ComputeRobustError(const TargetModel& model,
                               const std::vector<LabeledDataset>& sets,
                               const LossFunction& loss,
                               Aggregation aggregation) {
  if (sets.empty()) throw EmptyInputError("no robust sets to evaluate");
  std::vector<double> per_set;
  std::int64_t size = 0;
  for (const LabeledDataset& s : sets) {
    const ErrorEstimate e = Evaluate(model, s, loss);
    per_set.push_back(e.value());
    size += e.sample_size();
  }
  double value = 0.0;
  if (aggregation == Aggregation::kMean) {
    for (const double v : per_set) value += v;
    value /= static_cast<double>(per_set.size());
  } else {
    value = *std::max_element(per_set.begin(), per_set.end());
  }
  return RobustError{ErrorEstimate(value, size, loss.id()), std::move(per_set)};
}

}  // namespace interp_cert

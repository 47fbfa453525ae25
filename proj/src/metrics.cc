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

#include "interp_cert/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "interp_cert/errors.h"

namespace interp_cert {
namespace {

void RequireSameLoss(const ErrorEstimate& a, const ErrorEstimate& b) {
  if (a.loss_id() != b.loss_id()) {
    throw LossMismatchError("loss '" + a.loss_id() + "' vs '" + b.loss_id() +
                            "'");
  }
}

}  // namespace

ErrorEstimate::ErrorEstimate(double value, std::int64_t sample_size,
                             std::string loss_id)
    : value_(value), sample_size_(sample_size), loss_id_(std::move(loss_id)) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("error value must be finite and >= 0");
  }
  if (sample_size < 1) {
    throw std::invalid_argument("sample_size must be >= 1");
  }
}

InterpretabilityCertificate::InterpretabilityCertificate(
    double delta, Gamma gamma, ErrorEstimate base_t, ErrorEstimate new_t,
    ErrorEstimate base_r, ErrorEstimate new_r, CertificateIds ids,
    std::uint64_t seed, CertificateAudit audit)
    : delta_(delta),
      gamma_(gamma),
      base_t_(std::move(base_t)),
      new_t_(std::move(new_t)),
      base_r_(std::move(base_r)),
      new_r_(std::move(new_r)),
      ids_(std::move(ids)),
      seed_(seed),
      audit_(std::move(audit)) {
  RequireSameLoss(base_t_, new_t_);
  RequireSameLoss(base_t_, base_r_);
  RequireSameLoss(base_t_, new_r_);
}

double ComputeDelta(const ErrorEstimate& e_base, const ErrorEstimate& e_new) {
  RequireSameLoss(e_base, e_new);
  if (e_base.value() == 0.0) {
    throw ZeroBaselineError(
        "baseline error is zero; the target model is already perfect");
  }
  return e_new.value() / e_base.value();
}

Gamma ComputeGamma(const ErrorEstimate& e_base_t, const ErrorEstimate& e_base_r,
                   const ErrorEstimate& e_new_t, const ErrorEstimate& e_new_r) {
  RequireSameLoss(e_base_t, e_base_r);
  RequireSameLoss(e_base_t, e_new_t);
  RequireSameLoss(e_base_t, e_new_r);
  const double gap_base = e_base_r.value() - e_base_t.value();
  const double gap_new = e_new_r.value() - e_new_t.value();
  if (std::abs(gap_base) <= kGapTolerance) {
    if (std::abs(gap_new) <= kGapTolerance) return 0.0;
    return std::nullopt;
  }
  return gap_new / gap_base;
}

InterpretabilityCertificate Certify(const ErrorEstimate& e_base_t,
                                    const ErrorEstimate& e_base_r,
                                    const ErrorEstimate& e_new_t,
                                    const ErrorEstimate& e_new_r,
                                    CertificateIds ids, std::uint64_t seed,
                                    CertificateAudit audit) {
  const double delta = ComputeDelta(e_base_t, e_new_t);
  const Gamma gamma = ComputeGamma(e_base_t, e_base_r, e_new_t, e_new_r);
  return InterpretabilityCertificate(delta, gamma, e_base_t, e_new_t, e_base_r,
                                     e_new_r, std::move(ids), seed,
                                     std::move(audit));
}

ErrorEstimate CvError(std::span<const ErrorEstimate> fold_errors) {
  if (fold_errors.empty()) throw EmptyInputError("cv_error of zero folds");
  double sum = 0.0;
  std::int64_t size = 0;
  for (const ErrorEstimate& e : fold_errors) {
    RequireSameLoss(fold_errors.front(), e);
    sum += e.value();
    size += e.sample_size();
  }
  return ErrorEstimate(sum / static_cast<double>(fold_errors.size()), size,
                       fold_errors.front().loss_id());
}

double AggregateMultiDistribution(std::span<const double> deltas) {
  if (deltas.empty()) throw EmptyInputError("no distributions to aggregate");
  return *std::max_element(deltas.begin(), deltas.end());
}

Gamma AggregateMultiDistributionGamma(std::span<const Gamma> gammas) {
  if (gammas.empty()) throw EmptyInputError("no distributions to aggregate");
  double worst = -std::numeric_limits<double>::infinity();
  for (const Gamma& g : gammas) {
    if (!g) return std::nullopt;
    worst = std::max(worst, *g);
  }
  return worst;
}

const char* DominanceName(Dominance d) {
  switch (d) {
    case Dominance::kEqual:
      return "equal";
    case Dominance::kFirstDominates:
      return "first_dominates";
    case Dominance::kSecondDominates:
      return "second_dominates";
    case Dominance::kIncomparable:
      return "incomparable";
  }
  return "unknown";
}

int CompareGamma(const Gamma& a, const Gamma& b) {
  if (!a && !b) return 0;
  if (!a) return 1;
  if (!b) return -1;
  if (*a < *b) return -1;
  if (*a > *b) return 1;
  return 0;
}

Dominance Dominates(const InterpretabilityCertificate& a,
                    const InterpretabilityCertificate& b) {
  if (a.loss_id() != b.loss_id() || a.robustness_id() != b.robustness_id()) {
    throw ContextMismatchError(
        "certificates measured under different loss or robustness context: (" +
        a.loss_id() + ", " + a.robustness_id() + ") vs (" + b.loss_id() +
        ", " + b.robustness_id() + ")");
  }
  const int cd = a.delta() < b.delta() ? -1 : (a.delta() > b.delta() ? 1 : 0);
  const int cg = CompareGamma(a.gamma(), b.gamma());
  if (cd == 0 && cg == 0) return Dominance::kEqual;
  if (cd <= 0 && cg <= 0) return Dominance::kFirstDominates;
  if (cd >= 0 && cg >= 0) return Dominance::kSecondDominates;
  return Dominance::kIncomparable;
}

std::vector<std::vector<int>> EquivalenceClasses(const CertificateSet& set) {
  if (set.alpha < 0.0 || std::isnan(set.alpha)) {
    throw std::invalid_argument("alpha must be >= 0");
  }
  const int n = static_cast<int>(set.certificates.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return set.certificates[i].delta() < set.certificates[j].delta();
  });

  // In delta order, components of the closeness graph are maximal runs whose
  // consecutive gaps are within alpha.
  std::vector<int> component(n, -1);
  int current = -1;
  for (int k = 0; k < n; ++k) {
    if (k == 0 || set.certificates[order[k]].delta() -
                          set.certificates[order[k - 1]].delta() >
                      set.alpha) {
      ++current;
    }
    component[order[k]] = current;
  }

  std::vector<std::vector<int>> by_component(current + 1);
  for (int i = 0; i < n; ++i) by_component[component[i]].push_back(i);
  std::sort(by_component.begin(), by_component.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return by_component;
}

std::vector<std::pair<int, int>> HasseEdges(
    std::span<const InterpretabilityCertificate> certificates) {
  const int n = static_cast<int>(certificates.size());
  std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && Dominates(certificates[i], certificates[j]) ==
                        Dominance::kFirstDominates) {
        below[i][j] = true;
      }
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!below[i][j]) continue;
      bool covered = false;
      for (int k = 0; k < n && !covered; ++k) {
        covered = below[i][k] && below[k][j];
      }
      if (!covered) edges.emplace_back(i, j);
    }
  }
  return edges;
}

nlohmann::json ToJson(const ErrorEstimate& e) {
  return {{"value", e.value()},
          {"sample_size", e.sample_size()},
          {"loss", e.loss_id()}};
}

nlohmann::json ToJson(const InterpretabilityCertificate& c) {
  nlohmann::json j;
  j["delta"] = c.delta();
  if (c.gamma()) {
    j["gamma"] = *c.gamma();
  } else {
    j["gamma"] = "undefined";
  }
  j["errors"] = {{"base_T", ToJson(c.base_t())},
                 {"base_R", ToJson(c.base_r())},
                 {"new_T", ToJson(c.new_t())},
                 {"new_R", ToJson(c.new_r())}};
  j["ids"] = {{"procedure", c.procedure_id()},
              {"target_model", c.target_model_id()},
              {"robustness", c.robustness_id()}};
  j["seed"] = c.seed();
  j["audit"] = c.audit();
  return j;
}

ErrorEstimate ErrorEstimateFromJson(const nlohmann::json& j) {
  return ErrorEstimate(j.at("value").get<double>(),
                       j.at("sample_size").get<std::int64_t>(),
                       j.at("loss").get<std::string>());
}

InterpretabilityCertificate CertificateFromJson(const nlohmann::json& j) {
  Gamma gamma;
  const auto& g = j.at("gamma");
  if (g.is_string()) {
    if (g.get<std::string>() != "undefined") {
      throw std::invalid_argument("gamma must be a number or \"undefined\"");
    }
  } else {
    gamma = g.get<double>();
  }
  const auto& errors = j.at("errors");
  const auto& ids = j.at("ids");
  return InterpretabilityCertificate(
      j.at("delta").get<double>(), gamma,
      ErrorEstimateFromJson(errors.at("base_T")),
      ErrorEstimateFromJson(errors.at("new_T")),
      ErrorEstimateFromJson(errors.at("base_R")),
      ErrorEstimateFromJson(errors.at("new_R")),
      CertificateIds{ids.at("procedure").get<std::string>(),
                     ids.at("target_model").get<std::string>(),
                     ids.at("robustness").get<std::string>()},
      j.at("seed").get<std::uint64_t>(),
      j.contains("audit") ? j.at("audit") : nlohmann::json::object());
}

}  // namespace interp_cert

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

// (delta, gamma) interpretability certificates.
//
// A procedure communicates information I to a target model M. With errors
// measured on a standard sample T and an adversarial sample R,
//
//   delta = e_T(M(I)) / e_T(M)
//   gamma = (e_R(M(I)) - e_T(M(I))) / (e_R(M) - e_T(M))
//
// are the tightest factors for which the improved model's error, and its
// robustness gap, are bounded by the baseline's. Smaller is better for both.

#ifndef INTERP_CERT_METRICS_H_
#define INTERP_CERT_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace interp_cert {

// Absolute tolerance under which an error gap counts as zero.
inline constexpr double kGapTolerance = 1e-12;

// Empirical error of one model on one sample.
class ErrorEstimate {
 public:
  // Throws std::invalid_argument when value < 0, value is not finite, or
  // sample_size < 1.
  ErrorEstimate(double value, std::int64_t sample_size, std::string loss_id);

  double value() const { return value_; }
  std::int64_t sample_size() const { return sample_size_; }
  const std::string& loss_id() const { return loss_id_; }

  bool operator==(const ErrorEstimate&) const = default;

 private:
  double value_;
  std::int64_t sample_size_;
  std::string loss_id_;
};

// nullopt is the Undefined marker.
using Gamma = std::optional<double>;

// Free-form audit trail attached to a certificate (selected indices, kernel
// bandwidth, per-set robust errors, ...). Does not take part in ordering.
using CertificateAudit = nlohmann::json;

struct CertificateIds {
  std::string procedure_id;
  std::string target_model_id;
  std::string robustness_id;
};

class InterpretabilityCertificate {
 public:
  InterpretabilityCertificate(double delta, Gamma gamma, ErrorEstimate base_t,
                              ErrorEstimate new_t, ErrorEstimate base_r,
                              ErrorEstimate new_r, CertificateIds ids,
                              std::uint64_t seed,
                              CertificateAudit audit = nlohmann::json::object());

  double delta() const { return delta_; }
  const Gamma& gamma() const { return gamma_; }
  const ErrorEstimate& base_t() const { return base_t_; }
  const ErrorEstimate& new_t() const { return new_t_; }
  const ErrorEstimate& base_r() const { return base_r_; }
  const ErrorEstimate& new_r() const { return new_r_; }
  const CertificateIds& ids() const { return ids_; }
  const std::string& procedure_id() const { return ids_.procedure_id; }
  const std::string& target_model_id() const { return ids_.target_model_id; }
  const std::string& robustness_id() const { return ids_.robustness_id; }
  const std::string& loss_id() const { return base_t_.loss_id(); }
  std::uint64_t seed() const { return seed_; }
  const CertificateAudit& audit() const { return audit_; }

 private:
  double delta_;
  Gamma gamma_;
  ErrorEstimate base_t_;
  ErrorEstimate new_t_;
  ErrorEstimate base_r_;
  ErrorEstimate new_r_;
  CertificateIds ids_;
  std::uint64_t seed_;
  CertificateAudit audit_;
};

// e_new / e_base. Throws ZeroBaselineError when e_base is 0 and
// LossMismatchError when the loss ids differ.
double ComputeDelta(const ErrorEstimate& e_base, const ErrorEstimate& e_new);

// Gap ratio. Both gaps within kGapTolerance gives 0; a vanishing baseline gap
// with a non-vanishing new gap gives Undefined.
Gamma ComputeGamma(const ErrorEstimate& e_base_t, const ErrorEstimate& e_base_r,
                   const ErrorEstimate& e_new_t, const ErrorEstimate& e_new_r);

InterpretabilityCertificate Certify(
    const ErrorEstimate& e_base_t, const ErrorEstimate& e_base_r,
    const ErrorEstimate& e_new_t, const ErrorEstimate& e_new_r,
    CertificateIds ids, std::uint64_t seed,
    CertificateAudit audit = nlohmann::json::object());

// Mean of fold errors; sample sizes add. Throws EmptyInputError when empty.
ErrorEstimate CvError(std::span<const ErrorEstimate> fold_errors);

// Maximum over several target distributions. Throws EmptyInputError.
double AggregateMultiDistribution(std::span<const double> deltas);
// Same for gamma; any Undefined input makes the aggregate Undefined.
Gamma AggregateMultiDistributionGamma(std::span<const Gamma> gammas);

enum class Dominance {
  kEqual,
  kFirstDominates,   // a ⊑ b
  kSecondDominates,  // b ⊑ a
  kIncomparable,
};

const char* DominanceName(Dominance d);

// Componentwise order on (delta, gamma). An Undefined gamma ranks above
// every defined gamma. Throws ContextMismatchError when the loss or the
// robustness context differ.
Dominance Dominates(const InterpretabilityCertificate& a,
                    const InterpretabilityCertificate& b);

// Three-way comparison of gammas under the same ordering (-1, 0, 1).
int CompareGamma(const Gamma& a, const Gamma& b);

struct CertificateSet {
  std::vector<InterpretabilityCertificate> certificates;
  double alpha = 0.0;
};

// Connected components of the graph joining certificates whose deltas differ
// by at most alpha. Each class lists positions into set.certificates in
// ascending order; classes are ordered by their smallest member.
std::vector<std::vector<int>> EquivalenceClasses(const CertificateSet& set);

// Edges (i, j) of the strict dominance relation with transitive edges
// removed: i dominates j and no k sits strictly between them.
std::vector<std::pair<int, int>> HasseEdges(
    std::span<const InterpretabilityCertificate> certificates);

// JSON document:
//   {"delta": x, "gamma": x | "undefined",
//    "errors": {"base_T": E, "base_R": E, "new_T": E, "new_R": E},
//    "ids": {"procedure": s, "target_model": s, "robustness": s},
//    "seed": n, "audit": {...}}
// with E = {"value": x, "sample_size": n, "loss": s}.
nlohmann::json ToJson(const ErrorEstimate& e);
nlohmann::json ToJson(const InterpretabilityCertificate& c);
ErrorEstimate ErrorEstimateFromJson(const nlohmann::json& j);
InterpretabilityCertificate CertificateFromJson(const nlohmann::json& j);

}  // namespace interp_cert

#endif  // INTERP_CERT_METRICS_H_

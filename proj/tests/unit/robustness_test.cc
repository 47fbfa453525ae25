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

#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "interp_cert/dataset.h"
#include "interp_cert/errors.h"
#include "interp_cert/loss.h"
#include "interp_cert/models.h"
#include "interp_cert/random.h"
#include "interp_cert/robustness.h"

namespace interp_cert {
namespace {

LabeledDataset Digits(int n, int classes, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    y(i) = i % classes;
    for (int j = 0; j < 3; ++j) x(i, j) = 4.0 * y(i) + rng.Normal();
  }
  return LabeledDataset(x, y);
}

TEST_CASE("class skew yields one class per set") {
  const LabeledDataset d = Digits(200, 10, 1);
  const RobustSets r = GenerateRobustSets(ClassSkewGenerator{}, d, 10);
  REQUIRE(r.sets.size() == 10);
  for (int i = 0; i < 10; ++i) {
    const std::vector<int> labels = r.sets[i].ClassLabels();
    REQUIRE(labels.size() == 1);
    CHECK(labels[0] == i);
    CHECK(r.sets[i].rows() == 20);
  }
  CHECK_FALSE(r.sampled_with_replacement);
}

TEST_CASE("class skew with a fixed label and replacement") {
  const LabeledDataset d = Digits(30, 3, 2);
  ClassSkewGenerator gen;
  gen.label = 2;
  gen.set_size = 25;
  const RobustSets r = GenerateRobustSets(gen, d, 4);
  REQUIRE(r.sets.size() == 4);
  CHECK(r.sampled_with_replacement);
  for (const LabeledDataset& s : r.sets) {
    CHECK(s.ClassLabels() == std::vector<int>{2});
    CHECK(s.rows() == 25);
  }
  gen.allow_replacement = false;
  CHECK_THROWS_AS(GenerateRobustSets(gen, d, 1), InsufficientClassError);
  gen.label = 7;
  gen.allow_replacement = true;
  CHECK_THROWS_AS(GenerateRobustSets(gen, d, 1), InsufficientClassError);
  CHECK_THROWS_AS(GenerateRobustSets(ClassSkewGenerator{}, d, 0),
                  std::invalid_argument);
}

TEST_CASE("identity robust sets equal the source") {
  const LabeledDataset d = Digits(40, 4, 3);
  const RobustSets r = GenerateRobustSets(IdentityGenerator{}, d, 3);
  REQUIRE(r.sets.size() == 3);
  for (const LabeledDataset& s : r.sets) {
    CHECK(s.features() == d.features());
    CHECK(s.targets() == d.targets());
  }
}

TEST_CASE("perturbations stay inside the epsilon ball") {
  const LabeledDataset d = Digits(100, 5, 4);
  for (PerturbationNorm norm : {PerturbationNorm::kL2, PerturbationNorm::kLinf}) {
    for (double eps : {1e-3, 0.1, 2.5}) {
      const RobustSets r =
          GenerateRobustSets(AdditivePerturbationGenerator{eps, norm, 7}, d, 2);
      for (const LabeledDataset& s : r.sets) {
        CHECK(s.targets() == d.targets());
        double worst = 0.0;
        for (int i = 0; i < d.rows(); ++i) {
          const Eigen::VectorXd eta = (s.features().row(i) - d.features().row(i)).transpose();
          worst = std::max(worst, norm == PerturbationNorm::kL2
                                      ? eta.norm()
                                      : eta.cwiseAbs().maxCoeff());
        }
        CHECK(worst <= eps + 1e-12);
        CHECK(worst > 0.0);
      }
    }
  }
  CHECK_THROWS_AS(GenerateRobustSets(AdditivePerturbationGenerator{0.0}, d, 1),
                  InvalidEpsilonError);
  CHECK_THROWS_AS(GenerateRobustSets(AdditivePerturbationGenerator{-1.0}, d, 1),
                  InvalidEpsilonError);
}

TEST_CASE("vanishing perturbations leave errors unchanged") {
  SyntheticLinearSpec spec;
  spec.d = 4;
  spec.relevant = {0, 2};
  spec.noise = 0.2;
  spec.n = 150;
  spec.seed = 5;
  const LabeledDataset d = SynthLinear(spec);
  const TargetModel ols = FitOls(d);
  const double clean = Evaluate(ols, d, LossFunction::SquaredError()).value();
  const RobustSets r =
      GenerateRobustSets(AdditivePerturbationGenerator{1e-8}, d, 1);
  const double noisy =
      ComputeRobustError(ols, r.sets, LossFunction::SquaredError()).error.value();
  CHECK(std::fabs(noisy - clean) <= 1e-6);
}

TEST_CASE("robust error aggregation") {
  const LabeledDataset d = Digits(60, 3, 6);
  const TargetModel npc =
      MakeNearestPrototypeClassifier(d, std::vector<int>{0, 1, 2});
  const RobustSets skew = GenerateRobustSets(ClassSkewGenerator{}, d, 3);
  const RobustError r = ComputeRobustError(npc, skew.sets, LossFunction::ZeroOne());
  REQUIRE(r.per_set.size() == 3);
  double mean = 0.0, worst = 0.0;
  for (double v : r.per_set) {
    mean += v / 3;
    worst = std::max(worst, v);
  }
  CHECK(r.error.value() == doctest::Approx(mean).epsilon(1e-15));
  CHECK(r.error.sample_size() == 60);
  CHECK(ComputeRobustError(npc, skew.sets, LossFunction::ZeroOne(), Aggregation::kMax)
            .error.value() == worst);
  CHECK(ComputeRobustError(npc, {skew.sets[0]}, LossFunction::ZeroOne()).error.value() ==
        r.per_set[0]);
  CHECK_THROWS_AS(ComputeRobustError(npc, {}, LossFunction::ZeroOne()),
                  EmptyInputError);
}

TEST_CASE("class-pure prototypes have zero error on a same-class skewed set") {
  const LabeledDataset d = Digits(90, 3, 8);
  std::vector<int> idx;
  for (int i = 0; i < 90; ++i) {
    if (d.targets()(i) == 1) idx.push_back(i);
  }
  const TargetModel npc = MakeNearestPrototypeClassifier(d, idx);
  ClassSkewGenerator gen;
  gen.label = 1;
  const RobustSets r = GenerateRobustSets(gen, d, 1);
  CHECK(ComputeRobustError(npc, r.sets, LossFunction::ZeroOne()).error.value() == 0.0);
}

TEST_CASE("identity robustness gives gamma exactly zero") {
  const LabeledDataset d = Digits(80, 4, 9);
  const TargetModel a = MakeNearestPrototypeClassifier(d, std::vector<int>{0, 1, 2, 3});
  const TargetModel b = MakeNearestPrototypeClassifier(d, std::vector<int>{4, 5, 6, 7, 8});
  const RobustSets r = GenerateRobustSets(IdentityGenerator{}, d, 1);
  const LossFunction loss = LossFunction::ZeroOne();
  const ErrorEstimate at = Evaluate(a, d, loss), bt = Evaluate(b, d, loss);
  const ErrorEstimate ar = ComputeRobustError(a, r.sets, loss).error;
  const ErrorEstimate br = ComputeRobustError(b, r.sets, loss).error;
  const Gamma g = ComputeGamma(at, ar, bt, br);
  REQUIRE(g.has_value());
  CHECK(*g == 0.0);
}

TEST_CASE("robust sets are reproducible from the seed") {
  const LabeledDataset d = Digits(50, 5, 10);
  const std::vector<RobustnessGenerator> gens = {
      ClassSkewGenerator{std::nullopt, 30, true, 3},
      AdditivePerturbationGenerator{0.5, PerturbationNorm::kLinf, 3}};
  for (const RobustnessGenerator& g : gens) {
    const RobustSets a = GenerateRobustSets(g, d, 5);
    const RobustSets b = GenerateRobustSets(g, d, 5);
    for (int i = 0; i < 5; ++i) CHECK(a.sets[i] == b.sets[i]);
    const RobustSets c = GenerateRobustSets(WithSeed(g, 4), d, 5);
    bool differs = false;
    for (int i = 0; i < 5; ++i) differs = differs || !(a.sets[i] == c.sets[i]);
    CHECK(differs);
  }
}

TEST_CASE("generator ids and JSON round trip") {
  CHECK(RobustnessId(IdentityGenerator{}) == "identity");
  CHECK(RobustnessDisplayName(ClassSkewGenerator{}) == "Skewed");
  const std::vector<RobustnessGenerator> gens = {
      IdentityGenerator{}, ClassSkewGenerator{3, 10, false, 2},
      AdditivePerturbationGenerator{0.25, PerturbationNorm::kL2, 11}};
  for (const RobustnessGenerator& g : gens) {
    CHECK(ToJson(RobustnessGeneratorFromJson(ToJson(g))) == ToJson(g));
  }
}

}  // namespace
}  // namespace interp_cert

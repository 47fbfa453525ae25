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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "interp_cert/errors.h"
#include "interp_cert/random.h"
#include "interp_cert/report.h"
#include "interp_cert/runner.h"

namespace interp_cert {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("interp_cert_runner_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Positive regression target so MAPE is defined.
fs::path WriteRegressionCsv(const fs::path& dir) {
  const fs::path path = dir / "cost.csv";
  std::ofstream out(path);
  out << "a,b,c,cost\n";
  Rng rng(17);
  for (int i = 0; i < 120; ++i) {
    const double a = rng.Normal(), b = rng.Normal(), c = rng.Normal();
    out << a << "," << b << "," << c << "," << 50 + 3 * a + 2 * b + rng.Normal()
        << "\n";
  }
  return path;
}

json IdentitySpec() {
  return json::parse(R"({
    "name": "identity-only",
    "dataset": {"type": "csv", "path": "cost.csv", "target": "cost"},
    "split": {"train_fraction": 0.7},
    "target_model": {"kind": "LinearRegressor", "initial_features": 2},
    "procedures": [{"kind": "Identity"}],
    "robustness": {"kind": "Identity"},
    "loss": "mape_percent",
    "seeds": [1, 2, 3],
    "alpha": 0.05
  })");
}

TEST_CASE("identity-only runs certify delta 1 and gamma 0") {
  const fs::path dir = TempDir("identity");
  WriteRegressionCsv(dir);
  for (const json& split : {json{{"train_fraction", 0.7}}, json{{"folds", 3}}}) {
    json doc = IdentitySpec();
    doc["split"] = split;
    const Report report = Execute(ParseRunSpec(doc, {dir}));
    CHECK(report.failures.empty());
    CHECK(report.certificates.size() == (split.contains("folds") ? 9u : 3u));
    for (const InterpretabilityCertificate& c : report.certificates) {
      CHECK(c.delta() == 1.0);
      REQUIRE(c.gamma().has_value());
      CHECK(*c.gamma() == 0.0);
    }
    REQUIRE(report.aggregated.size() == 1);
    CHECK(report.aggregated[0].certificate.delta() == 1.0);
    CHECK(*report.aggregated[0].certificate.gamma() == 0.0);
  }
}

TEST_CASE("validation errors name the offending field") {
  const fs::path dir = TempDir("validation");
  WriteRegressionCsv(dir);
  struct Case {
    const char* pointer;
    json value;
    const char* field;
  };
  const std::vector<Case> cases = {
      {"/dataset/path", "missing.csv", "dataset/path"},
      {"/split", json{{"train_fraction", 1.5}}, "split/train_fraction"},
      {"/procedures", json::array(), "procedures"},
      {"/seeds", json::array(), "seeds"},
      {"/alpha", -1, "alpha"},
      {"/loss", "zero_one", "loss"},
      {"/procedures/0", json{{"kind", "MMDGreedy"}, {"m", 3}}, "procedures/0"},
  };
  for (const Case& c : cases) {
    json doc = IdentitySpec();
    doc[json::json_pointer(c.pointer)] = c.value;
    CAPTURE(std::string(c.pointer));
    try {
      ParseRunSpec(doc, {dir});
      FAIL("expected a validation error");
    } catch (const SpecValidationError& e) {
      CAPTURE(e.field());
      CHECK(e.field().rfind(c.field, 0) == 0);
    }
  }
  CHECK_THROWS_AS(LoadRunSpec(dir / "nope.json"), IoError);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(LoadRunSpec(dir / "broken.json"), SpecValidationError);
}

TEST_CASE("data roots: environment first, then the spec directory") {
  const fs::path dir = TempDir("roots");
  ::setenv("INTERP_CERT_DATA_DIR", "/some/root", 1);
  std::vector<fs::path> roots = DataSearchRoots(dir / "spec.json");
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == fs::path("/some/root"));
  CHECK(roots[1] == dir);
  ::unsetenv("INTERP_CERT_DATA_DIR");
  roots = DataSearchRoots(dir / "spec.json");
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == dir);
}

TEST_CASE("a failing procedure does not suppress the others") {
  const fs::path dir = TempDir("isolation");
  WriteRegressionCsv(dir);
  json doc = IdentitySpec();
  doc["procedures"] = json::parse(
      R"([{"kind": "StepwiseFeatures", "id": "too-many", "m": 10},
          {"kind": "Identity"},
          {"kind": "StepwiseFeatures", "id": "ok", "m": 2}])");
  const Report report = Execute(ParseRunSpec(doc, {dir}), {.jobs = 3});
  CHECK(report.failures.size() == 3);
  for (const RunFailure& f : report.failures) {
    CHECK(f.procedure_id == "too-many");
    CHECK(f.error_type == "InvalidCountError");
  }
  CHECK(report.certificates.size() == 6);
  CHECK(report.aggregated.size() == 2);
  CHECK(RenderTable(report).find("InvalidCountError") != std::string::npos);
}

TEST_CASE("execution is deterministic across runs and job counts") {
  const fs::path dir = TempDir("determinism");
  WriteRegressionCsv(dir);
  json doc = IdentitySpec();
  doc["procedures"] = json::parse(
      R"([{"kind": "StepwiseFeatures", "m": 2, "patience": 1}, {"kind": "Identity"}])");
  doc["robustness"] = json::parse(R"({"kind": "AdditivePerturbation", "epsilon": 0.5})");
  const RunSpec spec = ParseRunSpec(doc, {dir});
  const Report a = Execute(spec, {.jobs = 1});
  const Report b = Execute(spec, {.jobs = 4});
  REQUIRE(a.certificates.size() == b.certificates.size());
  CHECK(a.certificate_files == b.certificate_files);
  for (std::size_t i = 0; i < a.certificates.size(); ++i) {
    CHECK(CertificateFileText(a.certificates[i]) ==
          CertificateFileText(b.certificates[i]));
  }
  const Report c = Execute(spec, {.jobs = 1, .seed_override = 9});
  CHECK(c.seeds == std::vector<std::uint64_t>{9});
  CHECK(c.certificates.size() == 2);
}

TEST_CASE("aggregates are reproducible from the member error estimates") {
  const fs::path dir = TempDir("aggregate");
  WriteRegressionCsv(dir);
  json doc = IdentitySpec();
  doc["procedures"] = json::parse(R"([{"kind": "StepwiseFeatures", "m": 3}])");
  doc["robustness"] = json::parse(R"({"kind": "AdditivePerturbation", "epsilon": 1.0})");
  const Report report = Execute(ParseRunSpec(doc, {dir}));
  REQUIRE(report.aggregated.size() == 1);
  double bt = 0, nt = 0, br = 0, nr = 0;
  for (const InterpretabilityCertificate& c : report.certificates) {
    bt += c.base_t().value();
    nt += c.new_t().value();
    br += c.base_r().value();
    nr += c.new_r().value();
  }
  const double k = static_cast<double>(report.certificates.size());
  const InterpretabilityCertificate& agg = report.aggregated[0].certificate;
  CHECK(agg.delta() == doctest::Approx((nt / k) / (bt / k)).epsilon(1e-12));
  REQUIRE(agg.gamma().has_value());
  CHECK(*agg.gamma() ==
        doctest::Approx((nr / k - nt / k) / (br / k - bt / k)).epsilon(1e-9));
}

TEST_CASE("reports survive a write and reload") {
  const fs::path dir = TempDir("roundtrip");
  WriteRegressionCsv(dir);
  json doc = IdentitySpec();
  doc["procedures"] = json::parse(
      R"([{"kind": "StepwiseFeatures", "m": 2}, {"kind": "Identity"}])");
  const Report report = Execute(ParseRunSpec(doc, {dir}));
  WriteReport(report, dir / "out");
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(fs::exists(dir / "out" / "table.txt"));
  const Report back = LoadReport(dir / "out");
  CHECK(RenderTable(back) == RenderTable(report));
  CHECK(back.certificates.size() == report.certificates.size());
  CHECK_THROWS_AS(LoadReport(dir / "absent"), IoError);
}

InterpretabilityCertificate Cert(const std::string& id, double delta, Gamma gamma,
                                 const std::string& loss = "mape_percent") {
  const ErrorEstimate one(1.0, 10, loss), scaled(delta, 10, loss);
  return InterpretabilityCertificate(delta, gamma, one, scaled, one, scaled,
                                     {id, "OLS", "identity"}, 0);
}

TEST_CASE("table row for an arithmetic run") {
  Report report;
  report.name = "edc";
  report.loss_id = "mape_percent";
  report.metric_name = "MAPE";
  report.target_model_id = "OLS";
  report.procedure_ids = {"EDC"};
  report.robustness_ids = {"identity"};
  report.robustness_names = {"Identity"};
  const ErrorEstimate base(103.64, 100, "mape_percent"), after(95.83, 100, "mape_percent");
  report.certificates.push_back(
      Certify(base, base, after, after, {"EDC", "OLS", "identity"}, 1));
  report.certificate_files = {"EDC__identity__seed1"};
  Summarize(report);
  const std::string table = RenderTable(report);
  std::string row;
  std::istringstream lines(table);
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("EDC", 0) == 0) row = line;
  }
  std::istringstream cells(row);
  std::vector<std::string> tokens;
  for (std::string t; cells >> t;) tokens.push_back(t);
  REQUIRE(tokens.size() >= 6);
  CHECK(tokens[1] == "OLS");
  CHECK(tokens[2] == "0.925");
  CHECK(tokens[3] == "0");
  CHECK(tokens[4] == "Identity");
  CHECK(tokens[5] == "MAPE");
  CHECK(FormatGamma(std::nullopt) == "undef");
  CHECK(FormatGamma(0.8) == "0.800");
}

TEST_CASE("compare examples") {
  Comparison c = Compare({Cert("a", 0.50, 1.0), Cert("b", 0.52, 1.0)}, {"a", "b"}, 0.05);
  REQUIRE(c.groups.size() == 1);
  CHECK(c.groups[0].classes == std::vector<std::vector<int>>{{0, 1}});
  c = Compare({Cert("a", 0.5, 0.9), Cert("b", 0.9, 1.0)}, {"a", "b"}, 0.0);
  CHECK(c.groups[0].edges == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(RenderComparison(c).find("a") != std::string::npos);
  CHECK_THROWS_AS(Compare({Cert("a", 0.5, 0.9), Cert("b", 0.9, 1.0, "zero_one")},
                          {"a", "b"}, 0.0),
                  ContextMismatchError);
  CHECK_THROWS_AS(Compare({}, {}, 0.0), EmptyInputError);
}

}  // namespace
}  // namespace interp_cert

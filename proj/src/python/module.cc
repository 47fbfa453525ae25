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

// Python bindings for the core operations. JSON-shaped results cross the
// boundary as strings and are decoded by the package's __init__.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "interp_cert/dataset.h"
#include "interp_cert/errors.h"
#include "interp_cert/loss.h"
#include "interp_cert/metrics.h"
#include "interp_cert/models.h"
#include "interp_cert/procedures.h"
#include "interp_cert/report.h"
#include "interp_cert/runner.h"

namespace py = pybind11;

namespace interp_cert {
namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

LabeledDataset ToDataset(const Matrix& x, const std::optional<Eigen::VectorXd>& y) {
  return LabeledDataset(x, y ? *y : Eigen::VectorXd::Zero(x.rows()));
}

std::vector<InterpretabilityCertificate> ParseCertificates(
    const std::vector<std::string>& documents) {
  std::vector<InterpretabilityCertificate> out;
  for (const std::string& d : documents) {
    out.push_back(CertificateFromJson(nlohmann::json::parse(d)));
  }
  return out;
}

std::string EvaluateSpec(const std::filesystem::path& spec_path,
                         const std::optional<std::filesystem::path>& out_dir,
                         int jobs, std::optional<std::uint64_t> seed) {
  const RunSpec spec = LoadRunSpec(spec_path);
  Report report;
  {
    py::gil_scoped_release release;
    report = Execute(spec, {jobs, seed});
  }
  if (out_dir) WriteReport(report, *out_dir);
  return SummaryJson(report).dump();
}

}  // namespace
}  // namespace interp_cert

PYBIND11_MODULE(_core, m) {
  using namespace interp_cert;
  m.doc() = "Interpretability certificates: delta/gamma evaluation";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "InterpCertError", PyExc_RuntimeError);
  py::register_exception<SpecValidationError>(m, "SpecValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<ZeroBaselineError>(m, "ZeroBaselineError", base.ptr());
  py::register_exception<LossMismatchError>(m, "LossMismatchError", base.ptr());
  py::register_exception<ContextMismatchError>(m, "ContextMismatchError", base.ptr());
  py::register_exception<InvalidCountError>(m, "InvalidCountError", base.ptr());

  m.def(
      "compute_delta",
      [](double base_t, double new_t, const std::string& loss) {
        return ComputeDelta(ErrorEstimate(base_t, 1, loss), ErrorEstimate(new_t, 1, loss));
      },
      py::arg("base_t"), py::arg("new_t"), py::arg("loss") = "zero_one",
      "new_t / base_t.");
  m.def(
      "compute_gamma",
      [](double base_t, double base_r, double new_t, double new_r,
         const std::string& loss) {
        return ComputeGamma(ErrorEstimate(base_t, 1, loss), ErrorEstimate(base_r, 1, loss),
                            ErrorEstimate(new_t, 1, loss), ErrorEstimate(new_r, 1, loss));
      },
      py::arg("base_t"), py::arg("base_r"), py::arg("new_t"), py::arg("new_r"),
      py::arg("loss") = "zero_one",
      "Robustness gap ratio; None when undefined.");
  m.def(
      "certify",
      [](double base_t, double base_r, double new_t, double new_r,
         const std::string& loss, const std::string& procedure,
         const std::string& target_model, const std::string& robustness,
         std::int64_t sample_size) {
        const auto e = [&](double v) { return ErrorEstimate(v, sample_size, loss); };
        return ToJson(Certify(e(base_t), e(base_r), e(new_t), e(new_r),
                              {procedure, target_model, robustness}, 0))
            .dump();
      },
      py::arg("base_t"), py::arg("base_r"), py::arg("new_t"), py::arg("new_r"),
      py::arg("loss") = "zero_one", py::arg("procedure") = "procedure",
      py::arg("target_model") = "TM", py::arg("robustness") = "identity",
      py::arg("sample_size") = 1);
  m.def(
      "dominates",
      [](const std::string& a, const std::string& b) {
        return std::string(DominanceName(Dominates(
            CertificateFromJson(nlohmann::json::parse(a)),
            CertificateFromJson(nlohmann::json::parse(b)))));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "equivalence_classes",
      [](const std::vector<std::string>& certificates, double alpha) {
        return EquivalenceClasses(CertificateSet{ParseCertificates(certificates), alpha});
      },
      py::arg("certificates"), py::arg("alpha"));
  m.def(
      "hasse_edges",
      [](const std::vector<std::string>& certificates) {
        return HasseEdges(ParseCertificates(certificates));
      },
      py::arg("certificates"));

  m.def(
      "median_heuristic_bandwidth",
      [](const Matrix& x, std::uint64_t seed) {
        return MedianHeuristicBandwidth(ToDataset(x, std::nullopt), seed);
      },
      py::arg("x"), py::arg("seed") = 0);
  m.def(
      "mmd_greedy_select",
      [](const Matrix& x, int count, std::optional<double> bandwidth) {
        const LabeledDataset d = ToDataset(x, std::nullopt);
        return MmdGreedySelect(d, count, bandwidth.value_or(MedianHeuristicBandwidth(d, 0)))
            .indices;
      },
      py::arg("x"), py::arg("m"), py::arg("bandwidth") = std::nullopt);
  m.def(
      "random_prototype_select",
      [](const Matrix& x, int count, std::uint64_t seed) {
        return RandomPrototypeSelect(ToDataset(x, std::nullopt), count, seed).indices;
      },
      py::arg("x"), py::arg("m"), py::arg("seed") = 0);
  m.def(
      "stepwise_feature_select",
      [](const Matrix& x, const Eigen::VectorXd& y, int max_features, int patience,
         std::uint64_t seed, const std::string& model, const std::string& loss) {
        return StepwiseFeatureSelect(ToDataset(x, y), ParseModelKind(model),
                                     LossFunction{ParseLossKind(loss), {}},
                                     max_features, patience, seed)
            .indices;
      },
      py::arg("x"), py::arg("y"), py::arg("m"), py::arg("patience") = 0,
      py::arg("seed") = 0, py::arg("model") = "LinearRegressor",
      py::arg("loss") = "squared_error");

  m.def(
      "load_idx",
      [](const std::filesystem::path& images, const std::filesystem::path& labels) {
        const LabeledDataset d = LoadIdx(images, labels);
        return py::make_tuple(Matrix(d.features()), d.targets());
      },
      py::arg("images"), py::arg("labels"));
  m.def(
      "load_csv",
      [](const std::filesystem::path& path, const std::string& target,
         const std::vector<std::string>& features) {
        const LabeledDataset d = LoadCsv(path, CsvSchema{target, features});
        return py::make_tuple(Matrix(d.features()), d.targets());
      },
      py::arg("path"), py::arg("target"), py::arg("features") = std::vector<std::string>{});

  m.def("_evaluate", &EvaluateSpec, py::arg("spec"), py::arg("out") = std::nullopt,
        py::arg("jobs") = 1, py::arg("seed") = std::nullopt);
  m.def(
      "render_table",
      [](const std::filesystem::path& dir) { return RenderTable(LoadReport(dir)); },
      py::arg("report_dir"));
  m.def(
      "compare",
      [](const std::vector<std::filesystem::path>& dirs, std::optional<double> alpha) {
        std::vector<InterpretabilityCertificate> certificates;
        std::vector<std::string> labels;
        for (const auto& dir : dirs) {
          CollectCertificates(dir, dirs.size() > 1 ? dir.filename().string() : "",
                              &certificates, &labels);
        }
        return RenderComparison(Compare(certificates, labels, alpha.value_or(0.0)));
      },
      py::arg("dirs"), py::arg("alpha") = std::nullopt);
}

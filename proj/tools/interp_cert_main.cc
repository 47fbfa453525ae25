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

// interp_cert: evaluate run specs, render reports, compare certificates.
//
// Exit codes: 0 success, 2 invalid spec or arguments, 3 some pipelines
// failed (the report is still written), 4 I/O failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "interp_cert/errors.h"
#include "interp_cert/report.h"
#include "interp_cert/runner.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitPartial = 3;
constexpr int kExitIo = 4;

int Evaluate(const std::string& spec_path, const std::string& out_dir,
             const interp_cert::ExecuteOptions& options) {
  const interp_cert::RunSpec spec = interp_cert::LoadRunSpec(spec_path);
  const interp_cert::Report report = interp_cert::Execute(spec, options);
  interp_cert::WriteReport(report, out_dir);
  std::cout << interp_cert::RenderTable(report);
  std::cout << "wrote " << report.certificates.size() << " certificates to "
            << out_dir << "\n";
  if (!report.failures.empty()) {
    std::cerr << report.failures.size() << " pipeline(s) failed\n";
    return kExitPartial;
  }
  return kExitOk;
}

int ShowReport(const std::string& in_dir) {
  const interp_cert::Report report = interp_cert::LoadReport(in_dir);
  std::cout << interp_cert::RenderTable(report);
  return kExitOk;
}

int CompareDirs(const std::vector<std::string>& dirs,
                std::optional<double> alpha) {
  std::vector<interp_cert::InterpretabilityCertificate> certificates;
  std::vector<std::string> labels;
  double default_alpha = 0.0;
  for (const std::string& dir : dirs) {
    const std::filesystem::path path(dir);
    if (std::filesystem::exists(path / "summary.json")) {
      default_alpha = interp_cert::LoadReport(path).alpha;
    }
    interp_cert::CollectCertificates(
        path, dirs.size() > 1 ? path.filename().string() : "", &certificates,
        &labels);
  }
  const interp_cert::Comparison comparison = interp_cert::Compare(
      certificates, labels, alpha.value_or(default_alpha));
  std::cout << interp_cert::RenderComparison(comparison);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpretability certificates: delta/gamma evaluation"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  int jobs = 1;
  app.add_option("--seed", seed, "Override the run spec's seed list")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", jobs, "Maximum concurrent pipelines")
      ->check(CLI::PositiveNumber);

  std::string spec_path;
  std::string out_dir;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Run a spec, write a report");
  evaluate->add_option("--spec", spec_path, "Run spec JSON")->required();
  evaluate->add_option("--out", out_dir, "Report directory")->required();
  evaluate->add_option("--seed", seed, "Override the run spec's seed list");
  evaluate->add_option("--jobs", jobs, "Maximum concurrent pipelines")
      ->check(CLI::PositiveNumber);

  std::string report_dir;
  CLI::App* report = app.add_subcommand("report", "Render a report's table");
  report->add_option("--in", report_dir, "Report directory")->required();

  std::vector<std::string> compare_dirs;
  std::optional<double> alpha;
  CLI::App* compare =
      app.add_subcommand("compare", "Dominance edges and equivalence classes");
  compare->add_option("--in", compare_dirs,
                      "Report or certificate directory (repeatable)")
      ->required();
  compare->add_option("--alpha", alpha, "Equivalence tolerance on delta")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (evaluate->parsed()) {
      interp_cert::ExecuteOptions options;
      options.jobs = jobs;
      options.seed_override = seed;
      return Evaluate(spec_path, out_dir, options);
    }
    if (report->parsed()) return ShowReport(report_dir);
    return CompareDirs(compare_dirs, alpha);
  } catch (const interp_cert::SpecValidationError& e) {
    std::cerr << "invalid run spec: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const interp_cert::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const interp_cert::ContextMismatchError& e) {
    std::cerr << "context mismatch: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const interp_cert::EmptyInputError& e) {
    std::cerr << "nothing to compare: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
}

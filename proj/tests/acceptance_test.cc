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

// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
// Usage: acceptance_test [--repo <dir>] [--only N] [--known-unattainable N]...
//
// The exit status is nonzero when a criterion fails, unless every failing
// criterion was listed with --known-unattainable; those still print FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "interp_cert/dataset.h"
#include "interp_cert/errors.h"
#include "interp_cert/loss.h"
#include "interp_cert/metrics.h"
#include "interp_cert/models.h"
#include "interp_cert/procedures.h"
#include "interp_cert/random.h"
#include "interp_cert/report.h"
#include "interp_cert/runner.h"

namespace interp_cert {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<std::uint8_t> ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const AggregatedCertificate* FindAggregate(const Report& report,
                                           const std::string& procedure) {
  for (const AggregatedCertificate& a : report.aggregated) {
    if (a.certificate.procedure_id() == procedure) return &a;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// 1. delta arithmetic

Outcome DeltaArithmetic(const fs::path&) {
  const double delta = ComputeDelta(ErrorEstimate(103.64, 1, "mape_percent"),
                                    ErrorEstimate(95.83, 1, "mape_percent"));
  return {std::fabs(delta - 0.925) <= 0.001, Fmt("delta=%.6f target 0.925 +- 0.001", delta)};
}

// 2. gamma arithmetic

Outcome GammaArithmetic(const fs::path&) {
  const Gamma gamma = ComputeGamma(ErrorEstimate(0.10, 1, "zero_one"),
                                   ErrorEstimate(0.30, 1, "zero_one"),
                                   ErrorEstimate(0.12, 1, "zero_one"),
                                   ErrorEstimate(0.28, 1, "zero_one"));
  if (!gamma) return {false, "gamma undefined"};
  return {std::fabs(*gamma - 0.8) <= 1e-12,
          Fmt("gamma=%.15f target 0.8 +- 1e-12", *gamma)};
}

// ---------------------------------------------------------------------------
// 3. MMD prototypes on the MNIST subset

Report mnist_report;  // reused by the determinism check

Outcome MnistPrototypes(const fs::path& repo) {
  const auto start = std::chrono::steady_clock::now();
  const RunSpec spec = LoadRunSpec(repo / "specs" / "mnist_prototypes.json");
  mnist_report = Execute(spec, {.jobs = 1});
  const double runtime = Seconds(start);
  const AggregatedCertificate* mmd = FindAggregate(mnist_report, "MMDGreedy");
  const AggregatedCertificate* rnd = FindAggregate(mnist_report, "RandomPrototypes");
  if (mmd == nullptr || rnd == nullptr || !mnist_report.failures.empty()) {
    return {false, "pipeline failures: " + std::to_string(mnist_report.failures.size())};
  }
  const double delta = mmd->certificate.delta();
  const Gamma gamma = mmd->certificate.gamma();
  const int seeds = mmd->delta_spread.count;
  const bool ok = seeds >= 5 && delta >= 0.15 && delta <= 0.45 && gamma &&
                  *gamma >= 0.75 && *gamma <= 1.25 && runtime <= 300.0;
  std::string detail = Fmt(
      "seeds=%d delta=%.3f (target [0.15, 0.45]) gamma=%s (target [0.75, 1.25]) "
      "runtime=%.1fs (limit 300s)",
      seeds, delta, FormatGamma(gamma).c_str(), runtime);
  detail += Fmt("\n    per-seed delta mean=%.3f sd=%.3f; per-seed gamma mean=%s",
                mmd->delta_spread.mean, mmd->delta_spread.stddev,
                mmd->gamma_spread ? FormatFixed3(mmd->gamma_spread->mean).c_str()
                                  : "undef");
  detail += Fmt("\n    random prototypes: delta=%.3f gamma=%s; dominance(MMD, random)=%s",
                rnd->certificate.delta(), FormatGamma(rnd->certificate.gamma()).c_str(),
                DominanceName(Dominates(mmd->certificate, rnd->certificate)));
  return {ok, detail};
}

// ---------------------------------------------------------------------------
// 4. D_R = D_T on a finite domain

FiniteDomainSpec MakeDomain(std::uint64_t seed) {
  Rng rng(seed);
  const int k = 24, labels = 3;
  FiniteDomainSpec spec;
  spec.points.resize(k, 2);
  spec.probabilities.resize(k);
  spec.label_probabilities.resize(k, labels);
  for (int i = 0; i < k; ++i) {
    spec.points(i, 0) = rng.Normal() * 3;
    spec.points(i, 1) = rng.Normal() * 3;
    spec.probabilities(i) = 0.2 + rng.Uniform();
    // Mostly the label of the point's angular sector, with noise.
    const double angle = std::atan2(spec.points(i, 1), spec.points(i, 0)) + M_PI;
    const int major = std::min(labels - 1, static_cast<int>(angle / (2 * M_PI / labels)));
    for (int c = 0; c < labels; ++c) spec.label_probabilities(i, c) = c == major ? 0.7 : 0.15;
  }
  spec.probabilities /= spec.probabilities.sum();
  spec.Validate();
  return spec;
}

TargetModel DomainNpc(const FiniteDomainSpec& spec, std::span<const int> rows) {
  Eigen::MatrixXd protos(rows.size(), 2);
  Eigen::VectorXd labels(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    protos.row(i) = spec.points.row(rows[i]);
    Eigen::Index best;
    spec.label_probabilities.row(rows[i]).maxCoeff(&best);
    labels(i) = static_cast<double>(best);
  }
  return MakeNearestPrototypeClassifier(protos, labels);
}

Outcome FiniteDomainProperty(const fs::path&) {
  const auto start = std::chrono::steady_clock::now();
  const FiniteDomainSpec domain = MakeDomain(4);
  const LossFunction loss = LossFunction::ZeroOne();
  const std::vector<int> base_rows = {0, 1};
  const std::vector<int> new_rows = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  const TargetModel base = DomainNpc(domain, base_rows);
  const TargetModel improved = DomainNpc(domain, new_rows);
  const double exact_delta = ExactExpectedError(domain, improved, loss).value() /
                             ExactExpectedError(domain, base, loss).value();
  const int resamples = 100;

  // Robustness gap e(S_R) - e(S_T) with both samples drawn from D_T.
  std::vector<double> gaps;
  for (int r = 0; r < resamples; ++r) {
    const LabeledDataset st = SampleFiniteDomain(domain, 1000, DeriveKey(11, 2 * r));
    const LabeledDataset sr = SampleFiniteDomain(domain, 1000, DeriveKey(11, 2 * r + 1));
    gaps.push_back(Evaluate(improved, sr, loss).value() -
                   Evaluate(improved, st, loss).value());
  }
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / resamples;
  double ss = 0.0;
  for (double g : gaps) ss += (g - mean) * (g - mean);
  const double se = std::sqrt(ss / (resamples - 1)) / std::sqrt(resamples);
  const bool gap_ok = std::fabs(mean) <= 2 * se;

  // Mean |empirical delta - exact delta| over resamples at each n.
  std::vector<double> deviation;
  for (int n : {100, 1000, 10000}) {
    double total = 0.0;
    for (int r = 0; r < resamples; ++r) {
      const LabeledDataset s = SampleFiniteDomain(
          domain, n, DeriveKey(DeriveKey(12, static_cast<std::uint64_t>(n)), r));
      total += std::fabs(Evaluate(improved, s, loss).value() /
                             Evaluate(base, s, loss).value() -
                         exact_delta);
    }
    deviation.push_back(total / resamples);
  }
  const int shrinking = (deviation[1] < deviation[0]) + (deviation[2] < deviation[1]);
  const double runtime = Seconds(start);
  // Three sample sizes give two increments; both must shrink.
  const bool ok = gap_ok && shrinking == 2 && runtime <= 60.0;
  return {ok, Fmt("mean gap=%.5f (2 SE=%.5f); |delta - exact %.4f| at n=1e2,1e3,1e4: "
                  "%.4f, %.4f, %.4f (%d/2 increments shrink); runtime=%.1fs",
                  mean, 2 * se, exact_delta, deviation[0], deviation[1],
                  deviation[2], shrinking, runtime)};
}

// ---------------------------------------------------------------------------
// 5. greedy MMD against brute force

double Objective(const Eigen::MatrixXd& x, const std::vector<int>& s, double h) {
  auto k = [&](int a, int b) {
    return std::exp(-(x.row(a) - x.row(b)).squaredNorm() / (2 * h * h));
  };
  const int n = static_cast<int>(x.rows());
  double cross = 0.0, inner = 0.0;
  for (int a : s) {
    for (int j = 0; j < n; ++j) cross += k(a, j);
    for (int b : s) inner += k(a, b);
  }
  const double m = static_cast<double>(s.size());
  return 2.0 / (n * m) * cross - inner / (m * m);
}

Outcome GreedyOracle(const fs::path&) {
  Rng rng(2026);
  int single_matches = 0, pair_optimal = 0, pair_within_slack = 0;
  const int datasets = 50;
  for (int t = 0; t < datasets; ++t) {
    const int n = 3 + static_cast<int>(rng.UniformInt(10));  // 3..12
    Eigen::MatrixXd x(n, 2);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = rng.Normal();
      x(i, 1) = rng.Normal();
    }
    const LabeledDataset d(x, Eigen::VectorXd::Zero(n));
    const double h = MedianHeuristicBandwidth(d, static_cast<std::uint64_t>(t));

    int best_single = -1;
    double best_single_value = -1e300;
    for (int i = 0; i < n; ++i) {
      const double v = Objective(x, {i}, h);
      if (v > best_single_value + 1e-12) {
        best_single_value = v;
        best_single = i;
      }
    }
    single_matches += MmdGreedySelect(d, 1, h).indices[0] == best_single;

    double best_pair = -1e300;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) best_pair = std::max(best_pair, Objective(x, {a, b}, h));
    }
    const double greedy = Objective(x, MmdGreedySelect(d, 2, h).indices, h);
    pair_optimal += greedy >= best_pair - 1e-12;
    pair_within_slack += best_pair - greedy <= std::fabs(best_pair) / M_E + 1e-12;
  }
  const bool ok = single_matches == datasets && pair_optimal >= 45 &&
                  pair_within_slack == datasets;
  return {ok, Fmt("m=1 brute-force matches %d/50; m=2 optimal %d/50 (need >= 45), "
                  "within 1/e slack %d/50",
                  single_matches, pair_optimal, pair_within_slack)};
}

// ---------------------------------------------------------------------------
// 6. planted-feature recall

Outcome FeatureRecall(const fs::path& repo) {
  const RunSpec spec = LoadRunSpec(repo / "specs" / "feature_recall.json");
  const Report report = Execute(spec, {.jobs = 4});
  if (!report.failures.empty()) {
    return {false, "pipeline failures: " + std::to_string(report.failures.size())};
  }
  double stepwise_loss = 0.0, baseline_loss = 0.0;
  int stepwise_runs = 0, baseline_runs = 0;
  for (const InterpretabilityCertificate& c : report.certificates) {
    // Every certificate carries the random-subset baseline's loss.
    baseline_loss += c.base_t().value();
    ++baseline_runs;
    if (c.procedure_id() == "StepwiseFeatures") {
      stepwise_loss += c.new_t().value();
      ++stepwise_runs;
    }
  }
  const AggregatedCertificate* step = FindAggregate(report, "StepwiseFeatures");
  if (step == nullptr || stepwise_runs != 20) return {false, "missing stepwise runs"};
  const double stepwise_recall = 1.0 - stepwise_loss / stepwise_runs;
  const double baseline_recall = 1.0 - baseline_loss / baseline_runs;
  const double delta = step->certificate.delta();
  const bool ok = stepwise_recall >= 0.9 && std::fabs(baseline_recall - 0.2) <= 0.05 &&
                  delta <= 0.3;
  return {ok, Fmt("seeds=%d stepwise recall=%.3f (>= 0.9), baseline recall=%.3f "
                  "(0.2 +- 0.05), delta=%.3f (<= 0.3)",
                  stepwise_runs, stepwise_recall, baseline_recall, delta)};
}

// ---------------------------------------------------------------------------
// 7. order laws and equivalence classes

InterpretabilityCertificate RandomCert(Rng& rng) {
  // Coarse grids so that ties and mutual dominance actually occur.
  const double delta = 0.25 * static_cast<double>(1 + rng.UniformInt(4));
  Gamma gamma;
  if (rng.UniformInt(8) != 0) gamma = 0.5 * static_cast<double>(rng.UniformInt(4));
  const ErrorEstimate base(1.0, 10, "zero_one"), after(delta, 10, "zero_one");
  return InterpretabilityCertificate(delta, gamma, base, after, base, after,
                                     {"p", "NPC", "identity"}, 0);
}

bool AtMost(Dominance d) {
  return d == Dominance::kEqual || d == Dominance::kFirstDominates;
}

Outcome OrderLaws(const fs::path&) {
  Rng rng(7);
  int reflexive = 0, antisymmetric = 0, transitive = 0;
  const int triples = 1000;
  for (int t = 0; t < triples; ++t) {
    const InterpretabilityCertificate a = RandomCert(rng), b = RandomCert(rng),
                                      c = RandomCert(rng);
    reflexive += Dominates(a, a) == Dominance::kEqual;
    const bool ab = AtMost(Dominates(a, b)), ba = AtMost(Dominates(b, a));
    const bool same = std::fabs(a.delta() - b.delta()) <= 1e-12 &&
                      CompareGamma(a.gamma(), b.gamma()) == 0;
    antisymmetric += !(ab && ba) || same;
    const bool bc = AtMost(Dominates(b, c)), ac = AtMost(Dominates(a, c));
    transitive += !(ab && bc) || ac;
  }

  int partitions = 0, singletons = 0;
  const int sets = 200;
  for (int t = 0; t < sets; ++t) {
    CertificateSet set;
    set.alpha = rng.Uniform() * 0.3;
    const int n = 1 + static_cast<int>(rng.UniformInt(15));
    std::set<double> distinct;
    CertificateSet zero;
    for (int i = 0; i < n; ++i) {
      set.certificates.push_back(RandomCert(rng));
      double delta;
      do {
        delta = rng.Uniform();
      } while (!distinct.insert(delta).second);
      const ErrorEstimate base(1.0, 10, "zero_one"), after(delta, 10, "zero_one");
      zero.certificates.emplace_back(delta, 0.0, base, after, base, after,
                                     CertificateIds{"p", "NPC", "identity"}, 0);
    }
    std::vector<int> seen;
    for (const auto& cls : EquivalenceClasses(set)) {
      if (cls.empty()) seen.push_back(-1);
      seen.insert(seen.end(), cls.begin(), cls.end());
    }
    std::sort(seen.begin(), seen.end());
    std::vector<int> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    partitions += seen == expected;
    const auto zero_classes = EquivalenceClasses(zero);
    singletons += static_cast<int>(zero_classes.size()) == n;
  }
  const bool ok = reflexive == triples && antisymmetric == triples &&
                  transitive == triples && partitions == sets && singletons == sets;
  return {ok, Fmt("reflexive %d/%d, antisymmetric %d/%d, transitive %d/%d, "
                  "partitions %d/%d, alpha=0 singletons %d/%d",
                  reflexive, triples, antisymmetric, triples, transitive, triples,
                  partitions, sets, singletons, sets)};
}

// ---------------------------------------------------------------------------
// 8. determinism

int CountDifferences(const Report& a, const Report& b) {
  if (a.certificates.size() != b.certificates.size()) return -1;
  int differences = 0;
  for (std::size_t i = 0; i < a.certificates.size(); ++i) {
    differences += CertificateFileText(a.certificates[i]) !=
                   CertificateFileText(b.certificates[i]);
    differences += a.certificate_files[i] != b.certificate_files[i];
  }
  return differences;
}

Outcome Determinism(const fs::path& repo) {
  const int jobs = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
  std::vector<std::string> parts;
  bool ok = true;
  for (const char* name : {"mnist_prototypes.json", "feature_recall.json"}) {
    const RunSpec spec = LoadRunSpec(repo / "specs" / name);
    const Report first = std::string(name) == "mnist_prototypes.json" &&
                                 !mnist_report.certificates.empty()
                             ? mnist_report
                             : Execute(spec, {.jobs = 1});
    const Report second = Execute(spec, {.jobs = jobs});
    const int diff = CountDifferences(first, second);
    ok = ok && diff == 0 && !first.certificates.empty();
    parts.push_back(Fmt("%s: %zu certificates, %d differ (jobs 1 vs %d)", name,
                        first.certificates.size(), diff, jobs));
  }
  std::string detail = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) detail += "; " + parts[i];
  return {ok, detail};
}

// ---------------------------------------------------------------------------
// 9. file formats

Outcome FormatRoundTrips(const fs::path& repo) {
  const fs::path images = repo / "data" / "mnist5k" / "mnist5k-images-idx3-ubyte";
  const fs::path labels = repo / "data" / "mnist5k" / "mnist5k-labels-idx1-ubyte";
  const LabeledDataset mnist = LoadIdx(images, labels);
  const bool images_ok = SerializeIdxImages(mnist) == ReadBytes(images);
  const bool labels_ok = SerializeIdxLabels(mnist) == ReadBytes(labels);

  const fs::path corpus = repo / "tests" / "data" / "malformed_csv";
  std::ifstream in(corpus / "expected.json");
  const nlohmann::json manifest = nlohmann::json::parse(in);
  int correct = 0;
  for (const auto& c : manifest) {
    CsvSchema schema;
    schema.target_column = c.value("target", std::string("y"));
    schema.feature_columns = c.value("features", std::vector<std::string>{});
    try {
      LoadCsv(corpus / c["file"].get<std::string>(), schema);
    } catch (const ParseError& e) {
      correct += e.line() == c["line"].get<std::size_t>() &&
                 e.column() == c["column"].get<std::size_t>();
    }
  }
  const int cases = static_cast<int>(manifest.size());
  const bool ok = images_ok && labels_ok && cases == 10 && correct == cases;
  return {ok, Fmt("idx images %s, labels %s (%d rows); malformed csv %d/%d rejected "
                  "at the expected line and column",
                  images_ok ? "identical" : "DIFFER", labels_ok ? "identical" : "DIFFER",
                  mnist.rows(), correct, cases)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(const fs::path&)> run;
};

}  // namespace
}  // namespace interp_cert

int main(int argc, char** argv) {
  using namespace interp_cert;
  fs::path repo = INTERP_CERT_REPO_DIR;
  std::set<int> known_unattainable;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (i + 1 < argc && arg == "--repo") {
      repo = argv[++i];
    } else if (i + 1 < argc && arg == "--known-unattainable") {
      known_unattainable.insert(std::atoi(argv[++i]));
    } else if (i + 1 < argc && arg == "--only") {
      only.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "unknown argument %s\n", arg.c_str());
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "delta arithmetic (MAPE 103.64 -> 95.83)", DeltaArithmetic},
      {2, "gamma arithmetic (0.10, 0.30, 0.12, 0.28)", GammaArithmetic},
      {3, "MMD prototypes on MNIST subset", MnistPrototypes},
      {4, "finite domain with D_R = D_T", FiniteDomainProperty},
      {5, "greedy MMD vs brute force", GreedyOracle},
      {6, "planted-feature recall", FeatureRecall},
      {7, "partial order and equivalence laws", OrderLaws},
      {8, "determinism", Determinism},
      {9, "IDX and CSV round trips", FormatRoundTrips},
  };

  int unexpected = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome outcome;
    try {
      outcome = c.run(repo);
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const bool tolerated = !outcome.pass && known_unattainable.count(c.id);
    std::printf("[%s] criterion %d: %s -- %s%s\n", outcome.pass ? "PASS" : "FAIL",
                c.id, c.name, outcome.detail.c_str(),
                tolerated ? "\n    (known unattainable; see README)" : "");
    std::fflush(stdout);
    if (!outcome.pass && !tolerated) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}

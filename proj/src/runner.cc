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

#include "interp_cert/runner.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "interp_cert/errors.h"
#include "interp_cert/random.h"

namespace interp_cert {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Validation helpers. Every failure names a slash-separated field path.

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "/" + key;
}

const json& Require(const json& j, const std::string& key,
                    const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw SpecValidationError(Join(path, key), "required field is missing");
  }
  return j.at(key);
}

template <typename T>
T As(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw SpecValidationError(path, std::string("wrong type: ") + e.what());
  }
}

template <typename T>
std::optional<T> Optional(const json& j, const std::string& key,
                          const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return As<T>(j.at(key), Join(path, key));
}

int PositiveInt(const json& j, const std::string& path, int minimum = 1) {
  if (!j.is_number_integer()) throw SpecValidationError(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < minimum || v > std::numeric_limits<int>::max()) {
    throw SpecValidationError(path,
                              "must be >= " + std::to_string(minimum));
  }
  return static_cast<int>(v);
}

fs::path ExistingPath(const json& j, const std::string& path,
                      const std::vector<fs::path>& roots) {
  const fs::path p = As<std::string>(j, path);
  if (p.is_absolute() || roots.empty()) {
    if (fs::exists(p)) return p;
  } else {
    for (const fs::path& root : roots) {
      if (fs::exists(root / p)) return root / p;
    }
  }
  throw SpecValidationError(path, "file not found: " + p.string());
}

// Runs `body`, turning any non-validation exception into a validation error
// at `path`.
template <typename F>
auto AtPath(const std::string& path, F&& body) {
  try {
    return body();
  } catch (const SpecValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecValidationError(path, e.what());
  }
}

DatasetSpec ParseDataset(const json& j, const std::vector<fs::path>& root) {
  const std::string path = "dataset";
  if (!j.is_object()) throw SpecValidationError(path, "expected an object");
  DatasetSpec d;
  const auto type = As<std::string>(Require(j, "type", path), "dataset/type");
  if (type == "idx") {
    d.type = DatasetType::kIdx;
    d.images = ExistingPath(Require(j, "images", path), "dataset/images", root);
    d.labels = ExistingPath(Require(j, "labels", path), "dataset/labels", root);
  } else if (type == "csv") {
    d.type = DatasetType::kCsv;
    d.csv = ExistingPath(Require(j, "path", path), "dataset/path", root);
    d.schema.target_column =
        As<std::string>(Require(j, "target", path), "dataset/target");
    if (auto f = Optional<std::vector<std::string>>(j, "features", path)) {
      d.schema.feature_columns = *f;
    }
  } else if (type == "synthetic_linear") {
    d.type = DatasetType::kSyntheticLinear;
    d.synthetic = AtPath(path, [&] { return SyntheticLinearSpecFromJson(j); });
    if (d.synthetic.d < 1) throw SpecValidationError("dataset/d", "must be >= 1");
    if (d.synthetic.n < 2) throw SpecValidationError("dataset/n", "must be >= 2");
    for (const int r : d.synthetic.relevant) {
      if (r < 0 || r >= d.synthetic.d) {
        throw SpecValidationError("dataset/relevant",
                                  "feature index out of range");
      }
    }
  } else if (type == "finite_domain") {
    d.type = DatasetType::kFiniteDomain;
    d.domain = AtPath("dataset/domain", [&] {
      FiniteDomainSpec s = FiniteDomainSpecFromJson(Require(j, "domain", path));
      s.Validate();
      return s;
    });
    d.domain_rows = PositiveInt(Require(j, "n", path), "dataset/n", 2);
  } else {
    throw SpecValidationError("dataset/type", "unknown dataset type '" + type +
                                                  "'");
  }
  if (j.contains("limit")) d.limit = PositiveInt(j["limit"], "dataset/limit", 2);
  return d;
}

SplitSpec ParseSplit(const json& j) {
  const std::string path = "split";
  if (!j.is_object()) throw SpecValidationError(path, "expected an object");
  SplitSpec s;
  int modes = 0;
  if (j.contains("train_fraction")) {
    ++modes;
    s.train_fraction = As<double>(j["train_fraction"], "split/train_fraction");
    if (!(*s.train_fraction > 0.0 && *s.train_fraction < 1.0)) {
      throw SpecValidationError("split/train_fraction", "must be in (0, 1)");
    }
  }
  if (j.contains("train_size")) {
    ++modes;
    s.train_size = PositiveInt(j["train_size"], "split/train_size");
    if (j.contains("test_size")) {
      s.test_size = PositiveInt(j["test_size"], "split/test_size");
    }
  } else if (j.contains("test_size")) {
    throw SpecValidationError("split/test_size", "requires split/train_size");
  }
  if (j.contains("folds")) {
    ++modes;
    s.folds = PositiveInt(j["folds"], "split/folds", 2);
  }
  if (modes != 1) {
    throw SpecValidationError(
        path, "give exactly one of train_fraction, train_size, folds");
  }
  return s;
}

TargetModelSpec ParseTargetModel(const json& j) {
  const std::string path = "target_model";
  if (!j.is_object()) throw SpecValidationError(path, "expected an object");
  TargetModelSpec t;
  t.kind = AtPath("target_model/kind", [&] {
    return ParseModelKind(As<std::string>(Require(j, "kind", path),
                                          "target_model/kind"));
  });
  const bool npc = t.kind == ModelKind::kNearestPrototypeClassifier;
  if (j.contains("initial_prototypes")) {
    if (!npc) {
      throw SpecValidationError("target_model/initial_prototypes",
                                "only valid for NearestPrototypeClassifier");
    }
    t.initial_prototypes =
        PositiveInt(j["initial_prototypes"], "target_model/initial_prototypes");
  }
  if (j.contains("initial_features")) {
    if (npc) {
      throw SpecValidationError("target_model/initial_features",
                                "not valid for NearestPrototypeClassifier");
    }
    t.initial_features =
        PositiveInt(j["initial_features"], "target_model/initial_features");
  }
  return t;
}

std::vector<ProcedureSpec> ParseProcedures(const json& j, ModelKind model) {
  if (!j.is_array()) throw SpecValidationError("procedures", "expected an array");
  if (j.empty()) {
    throw SpecValidationError("procedures", "at least one procedure is required");
  }
  const std::set<InformationKind> accepted = DefaultAcceptedInformation(model);
  std::vector<ProcedureSpec> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "procedures/" + std::to_string(i);
    const json& p = j[i];
    if (!p.is_object()) throw SpecValidationError(path, "expected an object");
    Require(p, "kind", path);
    ProcedureSpec spec = AtPath(path, [&] { return ProcedureSpecFromJson(p); });
    if (p.contains("m")) spec.m = PositiveInt(p["m"], path + "/m");
    if (p.contains("patience")) {
      spec.patience = PositiveInt(p["patience"], path + "/patience", 0);
    }
    if (spec.kernel_bandwidth && !(*spec.kernel_bandwidth > 0.0)) {
      throw SpecValidationError(path + "/bandwidth", "must be > 0");
    }
    if (spec.complex_model_k && *spec.complex_model_k < 1) {
      throw SpecValidationError(path + "/complex_model/k", "must be >= 1");
    }
    InformationKind needs = InformationKind::kParameterAdjustment;
    if (spec.kind == ProcedureKind::kMmdGreedy ||
        spec.kind == ProcedureKind::kRandomPrototypes) {
      needs = InformationKind::kPrototypeSet;
    } else if (spec.kind == ProcedureKind::kStepwiseFeatures) {
      needs = InformationKind::kFeatureSubset;
    }
    if (!accepted.count(needs)) {
      throw SpecValidationError(
          path + "/kind", std::string(ProcedureKindName(spec.kind)) +
                              " produces " + InformationKindName(needs) +
                              ", which " + ModelKindName(model) +
                              " does not accept");
    }
    if (!ids.insert(spec.display_id()).second) {
      throw SpecValidationError(path + "/id",
                                "duplicate procedure id '" +
                                    spec.display_id() + "'");
    }
    out.push_back(std::move(spec));
  }
  return out;
}

RobustnessSpec ParseOneRobustness(const json& j, const std::string& path) {
  if (!j.is_object()) throw SpecValidationError(path, "expected an object");
  Require(j, "kind", path);
  RobustnessSpec r;
  r.generator = AtPath(path, [&] { return RobustnessGeneratorFromJson(j); });
  if (j.contains("count")) r.count = PositiveInt(j["count"], path + "/count");
  if (j.contains("set_size")) PositiveInt(j["set_size"], path + "/set_size");
  if (const auto* g = std::get_if<AdditivePerturbationGenerator>(&r.generator)) {
    if (!(g->epsilon > 0.0) || !std::isfinite(g->epsilon)) {
      throw SpecValidationError(path + "/epsilon", "must be a positive number");
    }
  }
  return r;
}

std::vector<RobustnessSpec> ParseRobustness(const json& j) {
  std::vector<RobustnessSpec> out;
  if (j.is_array()) {
    if (j.empty()) throw SpecValidationError("robustness", "empty array");
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(ParseOneRobustness(j[i], "robustness/" + std::to_string(i)));
    }
  } else {
    out.push_back(ParseOneRobustness(j, "robustness"));
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!ids.insert(RobustnessId(out[i].generator)).second) {
      throw SpecValidationError("robustness/" + std::to_string(i),
                                "duplicate robustness generator");
    }
  }
  return out;
}

LossFunction ParseLoss(const json& j) {
  LossFunction loss;
  if (j.is_string()) {
    loss.kind = AtPath("loss", [&] { return ParseLossKind(j.get<std::string>()); });
  } else if (j.is_object()) {
    loss.kind = AtPath("loss/kind", [&] {
      return ParseLossKind(As<std::string>(Require(j, "kind", "loss"), "loss/kind"));
    });
    if (j.contains("truth")) {
      loss.truth = As<std::vector<int>>(j["truth"], "loss/truth");
    }
  } else {
    throw SpecValidationError("loss", "expected a string or an object");
  }
  return loss;
}

void CheckCompatibility(const RunSpec& spec) {
  const bool classifier =
      spec.target_model.kind != ModelKind::kLinearRegressor;
  if (spec.loss.kind == LossKind::kZeroOne && !classifier) {
    throw SpecValidationError("loss",
                              "zero_one needs a classifier target model");
  }
  if (spec.loss.kind == LossKind::kFeatureRecallComplement) {
    if (spec.target_model.kind == ModelKind::kNearestPrototypeClassifier) {
      throw SpecValidationError(
          "loss", "feature_recall_complement needs a feature-based model");
    }
    if (spec.loss.truth.empty() &&
        spec.dataset.type != DatasetType::kSyntheticLinear) {
      throw SpecValidationError(
          "loss/truth", "feature_recall_complement needs a truth set");
    }
  }
  if (spec.dataset.type == DatasetType::kSyntheticLinear &&
      spec.loss.kind == LossKind::kFeatureRecallComplement &&
      spec.loss.truth.empty() && spec.dataset.synthetic.relevant.empty()) {
    throw SpecValidationError("dataset/relevant",
                              "empty relevant set cannot serve as truth");
  }
  for (const RobustnessSpec& r : spec.robustness) {
    if (std::holds_alternative<ClassSkewGenerator>(r.generator) && !classifier) {
      throw SpecValidationError("robustness",
                                "ClassSkew needs a classification task");
    }
  }
}

// ---------------------------------------------------------------------------
// Execution

std::string Sanitize(const std::string& s) {
  std::string out;
  for (const char c : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                      c == '.' || c == '_';
    out += keep ? c : '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::string ErrorTypeName(const std::exception& e) {
#define INTERP_CERT_TRY(Name) \
  if (dynamic_cast<const Name*>(&e)) return #Name
  INTERP_CERT_TRY(ZeroBaselineError);
  INTERP_CERT_TRY(LossMismatchError);
  INTERP_CERT_TRY(EmptyInputError);
  INTERP_CERT_TRY(ContextMismatchError);
  INTERP_CERT_TRY(RankDeficientError);
  INTERP_CERT_TRY(DimensionMismatchError);
  INTERP_CERT_TRY(InvalidTargetError);
  INTERP_CERT_TRY(RepresentationError);
  INTERP_CERT_TRY(EmptyPrototypeError);
  INTERP_CERT_TRY(SingleClassError);
  INTERP_CERT_TRY(EmptyTrainingError);
  INTERP_CERT_TRY(IncompatibleLossError);
  INTERP_CERT_TRY(InvalidInformationError);
  INTERP_CERT_TRY(InvalidCountError);
  INTERP_CERT_TRY(InsufficientClassError);
  INTERP_CERT_TRY(InvalidEpsilonError);
  INTERP_CERT_TRY(EmptyPartError);
  INTERP_CERT_TRY(InvalidDatasetError);
  INTERP_CERT_TRY(IoError);
  INTERP_CERT_TRY(std::invalid_argument);
#undef INTERP_CERT_TRY
  return "Error";
}

std::string UtcNow() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

LabeledDataset Head(const LabeledDataset& data, std::optional<int> limit) {
  if (!limit || *limit >= data.rows()) return data;
  std::vector<int> rows(*limit);
  std::iota(rows.begin(), rows.end(), 0);
  return data.Subset(rows);
}

// Loads file-backed datasets once; generated ones are redrawn per seed.
std::optional<LabeledDataset> LoadFixedDataset(const DatasetSpec& d) {
  try {
    switch (d.type) {
      case DatasetType::kIdx:
        return Head(LoadIdx(d.images, d.labels), d.limit);
      case DatasetType::kCsv:
        return Head(LoadCsv(d.csv, d.schema), d.limit);
      default:
        return std::nullopt;
    }
  } catch (const std::exception& e) {
    throw SpecValidationError("dataset", e.what());
  }
}

LabeledDataset DatasetForSeed(const DatasetSpec& d,
                              const std::optional<LabeledDataset>& fixed,
                              std::uint64_t seed) {
  if (fixed) return *fixed;
  const std::uint64_t key = DeriveKey(seed, "data");
  if (d.type == DatasetType::kSyntheticLinear) {
    SyntheticLinearSpec s = d.synthetic;
    s.seed = key;
    return Head(SynthLinear(s), d.limit);
  }
  return Head(SampleFiniteDomain(d.domain, d.domain_rows, key), d.limit);
}

struct TrainTest {
  LabeledDataset train;
  LabeledDataset test;
};

TrainTest MakeSplit(const LabeledDataset& data, const SplitSpec& split,
                    std::uint64_t seed, int fold) {
  const std::uint64_t key = DeriveKey(seed, "split");
  const int n = data.rows();
  if (split.folds) {
    const auto folds = FoldIndices(n, *split.folds, key);
    std::vector<int> train;
    for (int f = 0; f < *split.folds; ++f) {
      if (f == fold) continue;
      train.insert(train.end(), folds[f].begin(), folds[f].end());
    }
    return {data.Subset(train), data.Subset(folds[fold])};
  }
  if (split.train_size) {
    const int test = split.test_size ? *split.test_size : n - *split.train_size;
    if (test < 1 || *split.train_size + test > n) {
      throw EmptyPartError("split sizes exceed the " + std::to_string(n) +
                           " available rows");
    }
    const std::vector<int> sizes = {*split.train_size, test};
    const auto parts = SplitIndicesBySize(n, sizes, key);
    return {data.Subset(parts[0]), data.Subset(parts[1])};
  }
  const std::vector<double> fractions = {*split.train_fraction,
                                         1.0 - *split.train_fraction};
  const auto parts = SplitIndices(n, fractions, key);
  return {data.Subset(parts[0]), data.Subset(parts[1])};
}

TargetModel FitBaseline(const TargetModelSpec& spec, const LabeledDataset& train,
                        const std::string& loss_id, std::uint64_t key) {
  Rng rng(key);
  if (spec.kind == ModelKind::kNearestPrototypeClassifier) {
    const int k = spec.initial_prototypes.value_or(train.rows());
    if (k > train.rows()) {
      throw InvalidCountError("initial_prototypes " + std::to_string(k) +
                              " exceeds the " + std::to_string(train.rows()) +
                              " training rows");
    }
    return MakeNearestPrototypeClassifier(
               train, rng.SampleWithoutReplacement(train.rows(), k))
        .WithLossId(loss_id);
  }
  std::optional<std::vector<int>> subset;
  if (spec.initial_features) {
    if (*spec.initial_features > train.cols()) {
      throw InvalidCountError("initial_features exceeds the feature count");
    }
    subset = rng.SampleWithoutReplacement(train.cols(), *spec.initial_features);
    std::sort(subset->begin(), subset->end());
  }
  TargetModel tm = spec.kind == ModelKind::kLinearRegressor
                       ? FitOls(train, subset)
                       : FitLogistic(train, subset);
  return tm.WithLossId(loss_id);
}

struct Job {
  int procedure = 0;
  int robustness = 0;
  std::uint64_t seed = 0;
  std::optional<int> fold;
};

struct Outcome {
  std::optional<InterpretabilityCertificate> certificate;
  std::optional<RunFailure> failure;
};

InterpretabilityCertificate RunTask(const RunSpec& spec, const Job& task,
                                    const std::optional<LabeledDataset>& fixed) {
  const int fold = task.fold.value_or(0);
  const LabeledDataset data = DatasetForSeed(spec.dataset, fixed, task.seed);
  const TrainTest tt = MakeSplit(data, spec.split, task.seed, fold);

  LossFunction loss = spec.loss;
  if (loss.kind == LossKind::kFeatureRecallComplement && loss.truth.empty()) {
    loss.truth = data.provenance().at("truth").get<std::vector<int>>();
  }

  const TargetModel tm =
      FitBaseline(spec.target_model, tt.train, loss.id(),
                  DeriveKey(DeriveKey(task.seed, "baseline"),
                            static_cast<std::uint64_t>(fold)));

  const RobustnessSpec& rspec = spec.robustness[task.robustness];
  int count = rspec.count.value_or(1);
  if (!rspec.count && std::holds_alternative<ClassSkewGenerator>(rspec.generator) &&
      !std::get<ClassSkewGenerator>(rspec.generator).label) {
    count = static_cast<int>(tt.test.ClassLabels().size());
  }
  const std::uint64_t robust_key = DeriveKey(
      DeriveKey(DeriveKey(task.seed, "robustness"),
                static_cast<std::uint64_t>(task.robustness)),
      static_cast<std::uint64_t>(fold));
  const RobustSets robust = GenerateRobustSets(
      WithSeed(rspec.generator, robust_key), tt.test, count);

  ProcedureSpec procedure = spec.procedures[task.procedure];
  procedure.seed = DeriveKey(
      DeriveKey(DeriveKey(task.seed, "procedure:" + procedure.display_id()),
                procedure.seed),
      static_cast<std::uint64_t>(fold));

  PipelineContext context;
  context.target_model_id = TargetModelId(spec.target_model.kind);
  context.robustness_id = RobustnessId(rspec.generator);
  context.seed = task.seed;
  context.aggregation = spec.aggregation;
  context.robust_sampled_with_replacement = robust.sampled_with_replacement;

  InterpretabilityCertificate cert = RunPipeline(
      procedure, tm, tt.train, tt.test, robust.sets, loss, context);
  json audit = cert.audit();
  audit["train_rows"] = tt.train.rows();
  audit["test_rows"] = tt.test.rows();
  audit["robust_sets"] = count;
  if (task.fold) audit["fold"] = *task.fold;
  return InterpretabilityCertificate(
      cert.delta(), cert.gamma(), cert.base_t(), cert.new_t(), cert.base_r(),
      cert.new_r(), cert.ids(), cert.seed(), std::move(audit));
}

std::string FileStem(const RunSpec& spec, const Job& task) {
  std::string stem =
      Sanitize(spec.procedures[task.procedure].display_id()) + "__" +
      Sanitize(RobustnessId(spec.robustness[task.robustness].generator)) +
      "__seed" + std::to_string(task.seed);
  if (task.fold) stem += "__fold" + std::to_string(*task.fold);
  return stem;
}

Spread SpreadOf(const std::vector<double>& v) {
  Spread s;
  s.count = static_cast<int>(v.size());
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  if (v.size() > 1) {
    double ss = 0.0;
    for (const double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (v.size() - 1));
  }
  return s;
}

}  // namespace

std::vector<fs::path> DataSearchRoots(const fs::path& spec_path) {
  std::vector<fs::path> roots;
  if (const char* env = std::getenv("INTERP_CERT_DATA_DIR"); env && *env) {
    roots.emplace_back(env);
  }
  roots.push_back(spec_path.has_parent_path() ? spec_path.parent_path()
                                              : fs::path("."));
  return roots;
}

std::string TargetModelId(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinearRegressor:
      return "OLS";
    case ModelKind::kNearestPrototypeClassifier:
      return "NPC";
    case ModelKind::kLogisticClassifier:
      return "SLR";
  }
  return "unknown";
}

RunSpec ParseRunSpec(const json& document,
                     const std::vector<fs::path>& data_roots) {
  if (!document.is_object()) {
    throw SpecValidationError("", "run spec must be a JSON object");
  }
  RunSpec spec;
  spec.document = document;
  if (auto name = Optional<std::string>(document, "name", "")) spec.name = *name;
  spec.dataset = ParseDataset(Require(document, "dataset", ""), data_roots);
  spec.split = ParseSplit(Require(document, "split", ""));
  spec.target_model = ParseTargetModel(Require(document, "target_model", ""));
  spec.procedures =
      ParseProcedures(Require(document, "procedures", ""), spec.target_model.kind);
  if (document.contains("robustness")) {
    spec.robustness = ParseRobustness(document["robustness"]);
  } else {
    spec.robustness.push_back({IdentityGenerator{}, std::nullopt});
  }
  spec.loss = ParseLoss(Require(document, "loss", ""));
  if (document.contains("seeds")) {
    const json& seeds = document["seeds"];
    if (!seeds.is_array() || seeds.empty()) {
      throw SpecValidationError("seeds", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (!seeds[i].is_number_unsigned()) {
        throw SpecValidationError("seeds/" + std::to_string(i),
                                  "expected a non-negative integer");
      }
      spec.seeds.push_back(seeds[i].get<std::uint64_t>());
    }
  } else {
    spec.seeds = {0};
  }
  if (auto alpha = Optional<double>(document, "alpha", "")) {
    if (!(*alpha >= 0.0) || !std::isfinite(*alpha)) {
      throw SpecValidationError("alpha", "must be a finite number >= 0");
    }
    spec.alpha = *alpha;
  }
  if (auto agg = Optional<std::string>(document, "aggregation", "")) {
    spec.aggregation = AtPath("aggregation", [&] { return ParseAggregation(*agg); });
  }
  CheckCompatibility(spec);
  return spec;
}

RunSpec LoadRunSpec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read run spec " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecValidationError("", std::string("invalid JSON: ") + e.what());
  }
  return ParseRunSpec(document, DataSearchRoots(path));
}

Report Execute(const RunSpec& spec, const ExecuteOptions& options) {
  const std::optional<LabeledDataset> fixed = LoadFixedDataset(spec.dataset);
  if (fixed) {
    AtPath("split", [&] { return MakeSplit(*fixed, spec.split, 0, 0); });
  }
  std::vector<std::uint64_t> seeds = spec.seeds;
  if (options.seed_override) seeds = {*options.seed_override};

  Report report;
  report.name = spec.name;
  report.generated_at = UtcNow();
  report.run_spec = spec.document;
  report.loss_id = spec.loss.id();
  report.metric_name = spec.loss.metric_name();
  report.target_model_id = TargetModelId(spec.target_model.kind);
  report.alpha = spec.alpha;
  report.aggregation = spec.aggregation;
  report.seeds = seeds;
  for (const ProcedureSpec& p : spec.procedures) {
    report.procedure_ids.push_back(p.display_id());
  }
  for (const RobustnessSpec& r : spec.robustness) {
    report.robustness_ids.push_back(RobustnessId(r.generator));
    report.robustness_names.push_back(RobustnessDisplayName(r.generator));
  }

  std::vector<Job> tasks;
  for (int p = 0; p < static_cast<int>(spec.procedures.size()); ++p) {
    for (int r = 0; r < static_cast<int>(spec.robustness.size()); ++r) {
      for (const std::uint64_t seed : seeds) {
        if (spec.split.folds) {
          for (int f = 0; f < *spec.split.folds; ++f) tasks.push_back({p, r, seed, f});
        } else {
          tasks.push_back({p, r, seed, std::nullopt});
        }
      }
    }
  }

  std::vector<Outcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Job& task = tasks[i];
      try {
        outcomes[i].certificate.emplace(RunTask(spec, task, fixed));
      } catch (const std::exception& e) {
        outcomes[i].failure = RunFailure{
            spec.procedures[task.procedure].display_id(),
            report.robustness_ids[task.robustness],
            task.seed,
            task.fold,
            ErrorTypeName(e),
            e.what()};
      }
    }
  };
  const int jobs = std::max(
      1, std::min(options.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (outcomes[i].certificate) {
      report.certificates.push_back(std::move(*outcomes[i].certificate));
      report.certificate_files.push_back(FileStem(spec, tasks[i]));
    } else {
      report.failures.push_back(std::move(*outcomes[i].failure));
    }
  }
  Summarize(report);
  return report;
}

void Summarize(Report& report) {
  report.aggregated.clear();
  report.multi_distribution.clear();
  // Run failures stay; aggregate failures are re-derived.
  std::erase_if(report.failures, [](const RunFailure& f) {
    return f.error_type == "AggregateError";
  });

  for (const std::string& proc : report.procedure_ids) {
    for (const std::string& rob : report.robustness_ids) {
      std::vector<ErrorEstimate> bt, nt, br, nr;
      std::vector<double> deltas, gammas;
      std::vector<std::string> members;
      int undefined = 0;
      for (std::size_t i = 0; i < report.certificates.size(); ++i) {
        const InterpretabilityCertificate& c = report.certificates[i];
        if (c.procedure_id() != proc || c.robustness_id() != rob) continue;
        bt.push_back(c.base_t());
        nt.push_back(c.new_t());
        br.push_back(c.base_r());
        nr.push_back(c.new_r());
        deltas.push_back(c.delta());
        if (c.gamma()) {
          gammas.push_back(*c.gamma());
        } else {
          ++undefined;
        }
        members.push_back(report.certificate_files[i]);
      }
      if (members.empty()) continue;
      try {
        const ErrorEstimate mbt = CvError(bt), mnt = CvError(nt),
                            mbr = CvError(br), mnr = CvError(nr);
        InterpretabilityCertificate agg = Certify(
            mbt, mbr, mnt, mnr,
            CertificateIds{proc, report.target_model_id, rob}, 0,
            json{{"members", members.size()}});
        AggregatedCertificate entry{std::move(agg), members, SpreadOf(deltas),
                                    std::nullopt, undefined};
        if (!gammas.empty()) entry.gamma_spread = SpreadOf(gammas);
        report.aggregated.push_back(std::move(entry));
      } catch (const std::exception& e) {
        report.failures.push_back(
            RunFailure{proc, rob, 0, std::nullopt, "AggregateError",
                       ErrorTypeName(e) + ": " + e.what()});
      }
    }
  }

  if (report.robustness_ids.size() > 1) {
    for (const std::string& proc : report.procedure_ids) {
      std::vector<double> deltas;
      std::vector<Gamma> gammas;
      std::vector<std::string> ids;
      for (const AggregatedCertificate& a : report.aggregated) {
        if (a.certificate.procedure_id() != proc) continue;
        deltas.push_back(a.certificate.delta());
        gammas.push_back(a.certificate.gamma());
        ids.push_back(a.certificate.robustness_id());
      }
      if (deltas.size() != report.robustness_ids.size()) continue;
      report.multi_distribution.push_back(
          {proc, AggregateMultiDistribution(deltas),
           AggregateMultiDistributionGamma(gammas), ids});
    }
  }
  ComputeStructure(report, report.alpha);
}

void ComputeStructure(Report& report, double alpha) {
  report.alpha = alpha;
  report.structure.clear();
  for (const std::string& rob : report.robustness_ids) {
    OrderStructure s;
    s.robustness_id = rob;
    CertificateSet set;
    set.alpha = alpha;
    for (const AggregatedCertificate& a : report.aggregated) {
      if (a.certificate.robustness_id() != rob) continue;
      s.procedure_ids.push_back(a.certificate.procedure_id());
      set.certificates.push_back(a.certificate);
    }
    if (set.certificates.empty()) continue;
    s.edges = HasseEdges(set.certificates);
    s.classes = EquivalenceClasses(set);
    report.structure.push_back(std::move(s));
  }
}

}  // namespace interp_cert

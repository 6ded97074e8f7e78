#pragma once

// Candidate scorers: per-label kernel SVMs, local kernel Perceptrons and the
// global averaged kernel Perceptron trained through inference.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "srlcomb/corpus_io.hpp"
#include "srlcomb/defaults.hpp"
#include "srlcomb/infer_cs.hpp"
#include "srlcomb/model.hpp"
#include "srlcomb/pool.hpp"

namespace srlcomb {

/// (u.v + 1)^d.
double kernel(const FeatureVector& u, const FeatureVector& v, int degree);

/// sum_k coeff_k K(s_k, x) over deduplicated support vectors, evaluated
/// through an inverted index.
class KernelExpansion {
 public:
  explicit KernelExpansion(int degree = defaults::kKernelDegree) : degree_(degree) {}

  int degree() const { return degree_; }
  std::size_t size() const { return support_.size(); }
  const FeatureVector& support(std::size_t k) const { return support_[k]; }

  /// Index of x, inserting it when new.
  std::size_t insert(const FeatureVector& x);

  /// Shared-feature count between x and every support vector.
  std::vector<int> dots(const FeatureVector& x) const;

  double evaluate(const FeatureVector& x, std::span<const double> coefficients) const;

 private:
  int degree_;
  std::vector<FeatureVector> support_;
  std::map<std::vector<std::uint32_t>, std::size_t> lookup_;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> postings_;
};

enum class ScorerKind { Svm, PerceptronLocal, PerceptronGlobal };
std::string_view to_string(ScorerKind kind);
ScorerKind parse_scorer_kind(std::string_view text);

/// Dual-form scorer of one label. `averaged` and `final_coef` share the
/// support vectors; SVMs store the same coefficients in both.
struct LabelScorer {
  KernelExpansion expansion;
  std::vector<double> averaged;
  std::vector<double> final_coef;
  double bias_averaged = 0.0;
  double bias_final = 0.0;
  bool degenerate = false;  // trained on a single class

  double score(const FeatureVector& x, bool use_average) const;
};

class ScoreModel {
 public:
  ScorerKind kind = ScorerKind::Svm;
  int degree = defaults::kKernelDegree;
  std::uint64_t fingerprint = 0;
  std::string features;  // feature group list the model was trained with
  std::map<std::string, LabelScorer> labels;
  int selected_epoch = 0;  // perceptrons: epoch whose averaged predictor is kept

  /// 0 for labels the model has never seen.
  double score(const std::string& label, const FeatureVector& x, bool use_average = true) const;

  /// Line-oriented text, header `SRLCOMB-MODEL v1`.
  std::string serialize() const;
  static ScoreModel parse(std::string_view text);
};

/// Per-label binary data sets: y = +1 for gold candidates, -1 otherwise.
struct LabelData {
  std::vector<FeatureVector> x;
  std::vector<int> y;
};
/// Candidates need features and gold flags.
std::map<std::string, LabelData> local_datasets(const CandidatePool& pool);

struct SvmOptions {
  int degree = defaults::kKernelDegree;
  double C = defaults::kSvmC;
  double tolerance = defaults::kSvmTolerance;
  std::size_t max_iterations = 10'000'000;
  std::size_t cache_rows = 4096;
};

struct SvmResult {
  LabelScorer scorer;
  double dual_objective = 0.0;  // 1/2 a'Qa - sum a at the returned a
  std::vector<double> alpha;    // one per training point
  std::size_t iterations = 0;
  bool converged = true;
};

/// Soft-margin dual solved by sequential pairwise optimization with
/// second-order working-set selection.
SvmResult train_svm(const LabelData& data, const SvmOptions& options = {});

ScoreModel train_local_svm(const std::map<std::string, LabelData>& data, const SvmOptions& options = {});

/// One promotion or demotion of a support vector.
struct Update {
  std::string label;
  FeatureVector x;
  double delta = 0.0;
  int epoch = 0;
};

struct PerceptronOptions {
  int degree = defaults::kKernelDegree;
  int epochs = defaults::kEpochs;
};

/// Kernel Perceptron per label, updated on every sign error (score <= 0
/// counts as negative). `log`, when given, receives every update in order.
ScoreModel train_local_perceptron(const std::map<std::string, LabelData>& data,
                                  const PerceptronOptions& options = {}, std::vector<Update>* log = nullptr);

struct GlobalOptions {
  int degree = defaults::kKernelDegree;
  int epochs = defaults::kEpochs;
  Scope scope = Scope::PredByPred;
  bool shuffle = false;
  std::uint64_t seed = defaults::kSeed;
  int jobs = 1;
};

/// Bookkeeping for one training example.
struct ExampleRecord {
  int epoch = 0;
  int sentence = 0;
  int missed = 0;      // |y \ y_hat|
  int spurious = 0;    // |y_hat \ y|
  int promotions = 0;
  int demotions = 0;
};

struct EpochRecord {
  int epoch = 0;
  int updates = 0;
  std::optional<double> validation_f1;
  double training_f1 = 0.0;  // of the predictions made while training
};

struct GlobalTrainingLog {
  std::vector<ExampleRecord> examples;
  std::vector<EpochRecord> epochs;
  std::vector<Update> updates;
};

/// Validation data for epoch selection.
struct Validation {
  const CandidatePool* pool = nullptr;
  const PropsDocument* gold = nullptr;
};

/// Perceptron trained through inference: y_hat = Inference(A, W); every
/// a in y \ y_hat is promoted and every a in y_hat \ y demoted. Gold
/// arguments missing from the pool cannot be promoted. The averaged
/// predictor of the best validation epoch is kept (the last epoch without
/// validation data).
ScoreModel train_global_perceptron(const CandidatePool& train, const GlobalOptions& options = {},
                                   const Validation& validation = {}, GlobalTrainingLog* log = nullptr);

/// Confidence of every pooled candidate. Throws ModelMismatchError when the
/// fingerprint of the features differs from the model's.
std::vector<std::vector<double>> score_pool(const ScoreModel& model, const CandidatePool& pool,
                                            std::uint64_t fingerprint, bool use_average = true, int jobs = 1);

/// Same without the fingerprint check (training-time use).
std::vector<std::vector<double>> score_pool_unchecked(const ScoreModel& model, const CandidatePool& pool,
                                                      bool use_average = true, int jobs = 1);

}  // namespace srlcomb

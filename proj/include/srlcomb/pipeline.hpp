#pragma once

// End-to-end plumbing shared by the command-line tool and the tests:
// pooling, featurization, scorer training and the inference engines.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srlcomb/calibrate.hpp"
#include "srlcomb/features.hpp"
#include "srlcomb/infer_cs.hpp"
#include "srlcomb/learn.hpp"
#include "srlcomb/pool.hpp"
#include "srlcomb/synthetic.hpp"

namespace srlcomb {

std::vector<SystemOutput> system_outputs(const SyntheticCorpus& corpus);

enum class Engine { Cs, Dp };
enum class Scorer { ProbSum, Svm, PerceptronLocal, PerceptronGlobal };

std::string_view to_string(Engine engine);
Engine parse_engine(std::string_view text);
std::string_view to_string(Scorer scorer);
Scorer parse_scorer(std::string_view text);

/// A trained scorer together with everything needed to featurize new pools
/// the same way.
struct TrainedScorer {
  ScoreModel model;
  Vocabulary vocab;
  IntervalTable intervals;
  FeatureConfig features;
};

struct TrainOptions {
  Scorer scorer = Scorer::Svm;
  FeatureConfig features;
  SvmOptions svm;
  PerceptronOptions perceptron;
  GlobalOptions global;
};

/// A pool with its syntax, gold-aligned when gold is known.
struct Dataset {
  CandidatePool pool;
  std::vector<Sentence> sentences;  // empty when no syntax is available
  std::optional<PropsDocument> gold;
};

Dataset make_dataset(std::span<const SystemOutput> systems, std::vector<Sentence> sentences,
                     std::optional<PropsDocument> gold, const CalibrationConfig& calibration = {});
Dataset make_dataset(const SyntheticCorpus& corpus, const CalibrationConfig& calibration = {});

/// Builds the vocabulary and interval table on `train`, then trains. The
/// optional validation set selects the global Perceptron's epoch.
TrainedScorer train_scorer(Dataset& train, const TrainOptions& options, Dataset* validation = nullptr);

/// Featurizes `data` with the scorer's frozen vocabulary and returns the
/// per-candidate confidences. Throws ModelMismatchError when the model and
/// its vocabulary or feature groups disagree.
std::vector<std::vector<double>> apply_scorer(const TrainedScorer& scorer, Dataset& data, int jobs = 1);

/// `path` holds the model; `path.vocab` and `path.intervals` sit next to it.
void save_scorer(const TrainedScorer& scorer, const std::filesystem::path& path);
TrainedScorer load_scorer(const std::filesystem::path& path);

struct EngineConfig {
  Engine engine = Engine::Cs;
  Scope scope = Scope::PredByPred;
  CsConfig cs;  // engine = cs
  int jobs = 1;
  std::uint64_t node_budget = defaults::kNodeBudget;
};

/// cs: probability sums against O. dp: `confidences` (required).
std::vector<Solution> run_engine(const CandidatePool& pool, const EngineConfig& cfg,
                                 const std::vector<std::vector<double>>* confidences = nullptr,
                                 SolveStats* stats = nullptr);

}  // namespace srlcomb

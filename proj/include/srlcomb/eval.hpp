#pragma once

// Scoring with srl-eval semantics, bootstrap intervals, oracle upper bounds
// and the two voting baselines.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srlcomb/corpus_io.hpp"
#include "srlcomb/defaults.hpp"
#include "srlcomb/model.hpp"
#include "srlcomb/pool.hpp"

namespace srlcomb {

/// Relabels, within one proposition, each C-X that has no X starting before
/// it as X. Arguments are returned in canonical order.
std::vector<Argument> repair_continuations(std::vector<Argument> arguments);

/// Precision convention: no predicted arguments gives P = 100; no gold
/// arguments gives R = 100. F1 = 0 when P + R = 0.
struct Prf {
  long correct = 0;
  long predicted = 0;
  long gold = 0;

  double precision() const;
  double recall() const;
  double f1() const;
  Prf& operator+=(const Prf& other);
};

struct LabelScore {
  std::string label;
  Prf counts;
};

struct ScoreReport {
  Prf totals;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double pprops = 0.0;
  long propositions = 0;
  long exact_propositions = 0;
  std::vector<LabelScore> per_label;                      // sorted by label
  std::map<std::pair<std::string, std::string>, long> confusion;  // (gold, predicted) on the same span

  /// Aligned text table.
  std::string table() const;
  /// `label,correct,predicted,gold,precision,recall,f1` with an `overall` row.
  std::string csv() const;
};

/// Throws AlignmentError when the two documents have different skeletons.
ScoreReport score(const PropsDocument& predicted, const PropsDocument& gold);

/// Per-sentence counts, the unit of bootstrap resampling.
std::vector<Prf> sentence_counts(const PropsDocument& predicted, const PropsDocument& gold);

struct BootstrapResult {
  double f1 = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double half_width = 0.0;  // max(f1 - lower, upper - f1)
  int samples = 0;
  double level = 0.0;

  /// "75.47 ±0.8"
  std::string format() const;
};

/// Sentence-level percentile bootstrap of F1. Resample b uses its own seed
/// derived from `seed`, so the result does not depend on `jobs`.
BootstrapResult bootstrap(const PropsDocument& predicted, const PropsDocument& gold,
                          int samples = defaults::kBootstrapSamples, double level = defaults::kBootstrapLevel,
                          std::uint64_t seed = defaults::kSeed, int jobs = 1);

/// Selects exactly the gold-aligned candidates.
std::vector<Solution> oracle_combination(const CandidatePool& pool);

struct RerankResult {
  PropsDocument props;
  std::vector<std::vector<int>> chosen;  // per sentence, per predicate: system index
};

/// Per predicate, the complete frame of the system with the best frame F1
/// (after the continuation repair); ties go to the lower system index.
RerankResult oracle_rerank(std::span<const PropsDocument> systems, const PropsDocument& gold);

/// Hard 1+2+5: the conflicts the greedy baselines avoid.
ConstraintSet baseline_constraints();

/// Candidates sorted by (votes desc, token length desc, priority of the
/// best voting system), then appended greedily when they break no baseline
/// constraint. `priority` lists system indices best first; empty means
/// index order.
std::vector<Solution> baseline_recall(const CandidatePool& pool, std::span<const int> priority = {});

/// Same greedy pass restricted to candidates proposed by every system.
std::vector<Solution> baseline_precision(const CandidatePool& pool, std::span<const int> priority = {});

}  // namespace srlcomb

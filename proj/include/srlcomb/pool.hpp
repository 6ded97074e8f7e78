#pragma once

// Candidate generation: merges the outputs of several SRL systems into one
// deduplicated pool of argument candidates per sentence.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srlcomb/calibrate.hpp"
#include "srlcomb/corpus_io.hpp"
#include "srlcomb/model.hpp"

namespace srlcomb {

struct SystemOutput {
  std::string name;
  PropsDocument props;
  std::optional<ScoreTable> scores;
};

struct SentencePool {
  int sentence = 0;
  int n_tokens = 0;
  std::vector<Predicate> predicates;
  std::vector<Candidate> candidates;  // sorted by (predicate, start, end desc, label)

  friend bool operator==(const SentencePool&, const SentencePool&) = default;
};

struct CandidatePool {
  std::vector<std::string> systems;
  std::vector<SentencePool> sentences;

  int system_count() const { return static_cast<int>(systems.size()); }

  friend bool operator==(const CandidatePool&, const CandidatePool&) = default;
};

/// Deduplicates on (predicate, label, span), merging votes and scores. V
/// arguments stay out of the pool. Probabilities come from the raw scores via
/// the two-class softmax; a vote without a score has no probability.
/// Throws AlignmentError when the documents disagree on the predicate skeleton.
CandidatePool build_pool(std::span<const SystemOutput> systems, const CalibrationConfig& calibration = {});

/// Marks every candidate whose (predicate, label, span) appears in gold.
CandidatePool align_gold(CandidatePool pool, const PropsDocument& gold);

/// Gold arguments (V excluded) that no system proposed, per sentence.
std::vector<int> unreachable_gold(const CandidatePool& pool, const PropsDocument& gold);

/// Distribution of correct candidates by agreement pattern, per label.
struct AgreementTable {
  std::vector<std::string> columns;  // "∩ of M" ... "∩ of 2", then one column per system
  struct Row {
    std::string label;
    std::size_t correct = 0;
    std::vector<double> percent;  // one entry per column, sums to 100
  };
  std::vector<Row> rows;  // sorted by label

  std::string format() const;
};

/// Throws std::invalid_argument when gold has not been aligned.
AgreementTable pool_stats(const CandidatePool& pool);

/// Sentence with the pooled sentence's id, token count and predicates, for
/// validating solutions when no syntax was loaded.
Sentence skeleton_sentence(const SentencePool& sp);

/// Per-system documents and score tables that rebuild the same pool.
std::vector<SystemOutput> system_views(const CandidatePool& pool);

/// Selected candidates of every sentence as a props document (V re-added).
PropsDocument solutions_to_props(const CandidatePool& pool, std::span<const Solution> solutions);

/// Text dump of a pool; parse_pool(emit_pool(p)) == p apart from features.
std::string emit_pool(const CandidatePool& pool);
CandidatePool parse_pool(std::string_view text);

}  // namespace srlcomb

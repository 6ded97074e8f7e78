#pragma once

// Exact constraint-satisfaction inference: choose the subset of candidates
// maximizing  sum_i [ s_i l_i + O (1 - l_i) ] - soft penalties  subject to the
// hard constraints, with s_i the sum of the per-system probabilities.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "srlcomb/corpus_io.hpp"
#include "srlcomb/defaults.hpp"
#include "srlcomb/model.hpp"
#include "srlcomb/pool.hpp"

namespace srlcomb {

enum class Scope { PredByPred, FullSentence };

std::string_view to_string(Scope scope);
/// "pred" or "sentence".
Scope parse_scope(std::string_view text);

/// Hard 1+2 for PredByPred, hard 1+2+5+6 for FullSentence.
ConstraintSet default_constraints(Scope scope);

struct CsConfig {
  double O = defaults::kBias;
  Scope scope = Scope::PredByPred;
  ConstraintSet constraints = ConstraintSet::hard({1, 2});
  std::uint64_t node_budget = defaults::kNodeBudget;

  /// Throws std::invalid_argument for a non-finite O or cross-predicate
  /// constraints in PredByPred scope.
  void validate() const;
};

struct SolveStats {
  std::uint64_t nodes = 0;
  bool optimal = true;
};

/// The node budget ran out. `best` is the best solution found so far.
class SolveTimeout : public std::runtime_error {
 public:
  SolveTimeout(Solution best, std::uint64_t nodes)
      : std::runtime_error("search budget exhausted after " + std::to_string(nodes) + " nodes"),
        best_(std::move(best)),
        nodes_(nodes) {}

  const Solution& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }
  bool optimal() const { return false; }

 private:
  Solution best_;
  std::uint64_t nodes_;
};

/// Branch-and-bound over the candidates of one sentence: maximizes
/// sum_i weights_i l_i - soft penalties under the hard constraints.
/// `Solution::objective` is that value. Independent components of the
/// constraint graph are searched separately; in PredByPred scope every
/// predicate is its own problem. Among equal optima the search keeps the first
/// one found, exploring higher-weight, higher-vote, earlier candidates first.
Solution solve_weighted(std::span<const Candidate> candidates, std::span<const double> weights,
                        const ConstraintSet& constraints, Scope scope, std::uint64_t node_budget,
                        SolveStats* stats = nullptr);

/// Full objective with s_i = prob_sum(); reported including the O terms.
Solution solve(std::span<const Candidate> candidates, const CsConfig& cfg, SolveStats* stats = nullptr);

/// sum_i [s_i l_i + O (1 - l_i)] - soft penalties, or -inf when a hard
/// constraint is violated. Evaluated directly from `validate`.
double cs_objective(std::span<const Candidate> candidates, std::span<const std::size_t> selected, double O,
                    const ConstraintSet& constraints);

/// Solves every sentence; `jobs` threads.
std::vector<Solution> solve_pool(const CandidatePool& pool, const CsConfig& cfg, int jobs = 1,
                                 SolveStats* stats = nullptr);

struct SweepRow {
  double O = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool recall_monotone = true;     // recall never increases as O grows
  bool precision_monotone = true;  // precision never decreases as O grows
  std::vector<double> recall_increases;  // O values at which recall went up

  std::string csv() const;
  std::string diagnostics() const;
};

/// 0, 0.05, ..., 1.0.
std::vector<double> default_sweep_grid();

SweepResult sweep_O(const CandidatePool& pool, const PropsDocument& gold, CsConfig cfg,
                    std::span<const double> grid, int jobs = 1);

}  // namespace srlcomb

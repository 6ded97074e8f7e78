#pragma once

// Learning-based inference: keep the maximum-confidence consistent subset of
// scored candidates.

#include <cstdint>
#include <span>
#include <vector>

#include "srlcomb/defaults.hpp"
#include "srlcomb/infer_cs.hpp"
#include "srlcomb/model.hpp"
#include "srlcomb/pool.hpp"

namespace srlcomb {

/// Candidates of a single predicate. Maximizes the summed confidence over
/// pairwise disjoint spans, with at most one of each core label when
/// `no_duplicate_core` is set. Candidates with confidence <= 0 are never
/// selected. The result does not depend on input order.
///
/// Left-to-right max-plus over the distinct span boundaries; the state is the
/// set of core labels already used (64 masks).
Solution dp_predicate(std::span<const Candidate> candidates, std::span<const double> confidences,
                      bool no_duplicate_core = true);

/// All predicates of a sentence: same-predicate spans disjoint, no duplicate
/// core label per predicate, and no crossing spans across predicates
/// (embedding allowed). Solved exactly by the branch-and-bound optimizer.
Solution dp_sentence(std::span<const Candidate> candidates, std::span<const double> confidences,
                     std::uint64_t node_budget = defaults::kNodeBudget, SolveStats* stats = nullptr);

/// Runs the engine on every sentence. `confidences[s][i]` scores candidate i
/// of sentence s. Budget overruns keep the best-so-far solution and clear
/// `stats->optimal`.
std::vector<Solution> dp_pool(const CandidatePool& pool, const std::vector<std::vector<double>>& confidences,
                              Scope scope, int jobs = 1, SolveStats* stats = nullptr,
                              std::uint64_t node_budget = defaults::kNodeBudget);

}  // namespace srlcomb

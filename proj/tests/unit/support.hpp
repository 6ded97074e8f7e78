#pragma once

// Random instances and brute-force references shared by the unit and
// acceptance tests.

#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "srlcomb/infer_cs.hpp"
#include "srlcomb/model.hpp"
#include "srlcomb/rng.hpp"

namespace testsupport {

using namespace srlcomb;

inline const std::vector<std::string>& label_inventory() {
  static const std::vector<std::string> labels = {"A0",     "A1",   "A2",     "A3",       "AM-TMP",  "AM-LOC",
                                                  "AM-MNR", "R-A0", "R-A1",   "C-A1",     "C-A0",    "R-AM-TMP",
                                                  "C-AM-LOC", "AM-NEG", "AA"};
  return labels;
}

inline Sentence fake_sentence(int n_tokens, int n_predicates) {
  Sentence s;
  for (int i = 0; i < n_tokens; ++i) {
    Token t;
    t.index = i;
    t.form = "w" + std::to_string(i);
    t.pos = "NN";
    s.tokens.push_back(t);
  }
  for (int p = 0; p < n_predicates; ++p) s.predicates.push_back({std::min(n_tokens - 1, 2 * p + 1), "v"});
  return s;
}

struct Instance {
  int n_tokens = 0;
  int n_predicates = 0;
  std::vector<Candidate> candidates;
};

/// Unique (predicate, label, span) keys with probabilities from `systems`
/// voters. `max_span` bounds span length.
inline Instance random_instance(Rng& rng, int n, int n_predicates, int n_tokens, int systems = 3,
                                int max_span = 6) {
  Instance inst;
  inst.n_tokens = n_tokens;
  inst.n_predicates = n_predicates;
  std::set<std::tuple<int, std::string, int, int>> seen;
  const auto& labels = label_inventory();
  int guard = 0;
  while (static_cast<int>(inst.candidates.size()) < n && ++guard < 10000) {
    Candidate c;
    c.argument.predicate = rng.range(0, n_predicates - 1);
    const int start = rng.range(0, n_tokens - 1);
    const int end = std::min(n_tokens - 1, start + rng.range(0, max_span - 1));
    c.argument.span = {start, end};
    c.argument.label = RoleLabel::parse(labels[rng.index(labels.size())]);
    if (!seen.insert({c.predicate(), c.label().text(), start, end}).second) continue;
    c.raw_scores.assign(static_cast<std::size_t>(systems), std::nullopt);
    c.probs.assign(static_cast<std::size_t>(systems), std::nullopt);
    for (int j = 0; j < systems; ++j) {
      if (j == 0 || rng.bernoulli(0.5)) {
        c.votes.push_back(j);
        c.probs[static_cast<std::size_t>(j)] = rng.uniform();
      }
    }
    inst.candidates.push_back(std::move(c));
  }
  return inst;
}

inline ConstraintSet random_constraints(Rng& rng, bool allow_cross_predicate) {
  ConstraintSet cs;
  for (int id = 1; id <= kConstraintCount; ++id) {
    if (!allow_cross_predicate && (id == 5 || id == 6)) continue;
    const double u = rng.uniform();
    if (u < 0.35) continue;
    if (u < 0.7)
      cs.set(id, {ConstraintMode::Hard, 0.0});
    else
      cs.set(id, {ConstraintMode::Soft, 0.05 + 0.9 * rng.uniform()});
  }
  return cs;
}

inline std::vector<std::size_t> subset(std::uint32_t mask, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (1u << i)) out.push_back(i);
  return out;
}

/// max over all subsets of cs_objective.
inline double brute_cs(std::span<const Candidate> cands, double O, const ConstraintSet& cs) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << cands.size()); ++mask) {
    const auto sel = subset(mask, cands.size());
    best = std::max(best, cs_objective(cands, sel, O, cs));
  }
  return best;
}

/// max over subsets valid under hard `cs` of the summed weights.
inline double brute_weighted(std::span<const Candidate> cands, std::span<const double> weights,
                             const ConstraintSet& cs, const Sentence& sentence) {
  double best = 0.0;  // the empty set is always valid
  for (std::uint32_t mask = 1; mask < (1u << cands.size()); ++mask) {
    Solution sol;
    sol.sentence = sentence.id;
    sol.selected = subset(mask, cands.size());
    double value = 0.0;
    for (auto i : sol.selected) value += weights[i];
    if (value <= best) continue;
    if (validate(sol, cands, cs, sentence).valid()) best = value;
  }
  return best;
}

inline double weight_of(std::span<const double> weights, const Solution& sol) {
  double v = 0.0;
  for (auto i : sol.selected) v += weights[i];
  return v;
}

}  // namespace testsupport

#include <cmath>

#include "doctest.h"
#include "srlcomb/eval.hpp"
#include "srlcomb/infer_cs.hpp"
#include "srlcomb/pipeline.hpp"
#include "support.hpp"

using namespace srlcomb;
using testsupport::brute_cs;

namespace {

Candidate cand(int pred, const char* label, int s, int e, std::vector<double> probs) {
  Candidate c;
  c.argument = {pred, RoleLabel::parse(label), {s, e}};
  for (std::size_t j = 0; j < probs.size(); ++j) {
    c.votes.push_back(static_cast<int>(j));
    c.probs.push_back(probs[j]);
    c.raw_scores.push_back(std::nullopt);
  }
  return c;
}

CsConfig config(double O, Scope scope, const ConstraintSet& cs) {
  CsConfig cfg;
  cfg.O = O;
  cfg.scope = scope;
  cfg.constraints = cs;
  return cfg;
}

}  // namespace

TEST_CASE("scope defaults and validation") {
  CHECK(default_constraints(Scope::PredByPred) == ConstraintSet::hard({1, 2}));
  CHECK(default_constraints(Scope::FullSentence) == ConstraintSet::hard({1, 2, 5, 6}));
  CHECK(parse_scope("pred") == Scope::PredByPred);
  CHECK(parse_scope("sentence") == Scope::FullSentence);
  CHECK_THROWS_AS(parse_scope("doc"), std::invalid_argument);
  CHECK_THROWS_AS(config(0.3, Scope::PredByPred, ConstraintSet::hard({1, 5})).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(NAN, Scope::PredByPred, ConstraintSet::hard({1})).validate(), std::invalid_argument);
  CHECK_NOTHROW(config(0.3, Scope::FullSentence, ConstraintSet::hard({1, 5})).validate());
  CsConfig defaults;
  CHECK(defaults.O == 0.30);
  CHECK(defaults.constraints == ConstraintSet::hard({1, 2}));
}

TEST_CASE("hand example: overlap resolved by score") {
  std::vector<Candidate> cands = {cand(0, "A0", 0, 2, {0.9, 0.8}), cand(0, "A0", 1, 2, {0.6}),
                                  cand(0, "A1", 4, 5, {0.2}), cand(0, "A1", 4, 4, {0.5, 0.4})};
  auto sol = solve(cands, config(0.3, Scope::PredByPred, ConstraintSet::hard({1, 2})));
  CHECK(sol.selected == std::vector<std::size_t>{0, 3});
  CHECK(sol.objective == doctest::Approx(1.7 + 0.9 + 0.3 + 0.3));
  CHECK(sol.objective == doctest::Approx(brute_cs(cands, 0.3, ConstraintSet::hard({1, 2}))));
}

TEST_CASE("cs_objective follows the formula") {
  std::vector<Candidate> cands = {cand(0, "A0", 0, 0, {0.5}), cand(0, "A0", 2, 2, {0.7}), cand(0, "R-A1", 4, 4, {0.9})};
  std::vector<std::size_t> sel = {0, 1, 2};
  CHECK(cs_objective(cands, sel, 0.3, ConstraintSet::parse("2:soft=0.25+3:soft=0.5")) ==
        doctest::Approx(2.1 - 0.25 - 0.5));
  CHECK(std::isinf(cs_objective(cands, sel, 0.3, ConstraintSet::hard({2}))));
  std::vector<std::size_t> none;
  CHECK(cs_objective(cands, none, 0.3, ConstraintSet{}) == doctest::Approx(0.9));
}

TEST_CASE("solve equals enumeration on random instances") {
  Rng rng(101);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = rng.range(1, 12);
    auto inst = testsupport::random_instance(rng, n, rng.range(1, 3), rng.range(4, 14));
    const bool full = rng.bernoulli(0.5);
    auto cs = testsupport::random_constraints(rng, full);
    const double O = rng.uniform() * 1.5;
    auto cfg = config(O, full ? Scope::FullSentence : Scope::PredByPred, cs);
    auto sol = solve(inst.candidates, cfg);
    const double expected = brute_cs(inst.candidates, O, cs);
    CAPTURE(cs.to_string());
    CHECK(sol.objective == doctest::Approx(expected).epsilon(1e-9));
    CHECK(cs_objective(inst.candidates, sol.selected, O, cs) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("threshold law on disjoint candidates") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Candidate> cands;
    const int n = rng.range(1, 10);
    for (int i = 0; i < n; ++i)
      cands.push_back(cand(0, i % 2 ? "AM-TMP" : "AM-LOC", 2 * i, 2 * i, {rng.uniform(), rng.uniform()}));
    std::vector<std::size_t> previous;
    bool first = true;
    for (double O : default_sweep_grid()) {
      auto sol = solve(cands, config(O, Scope::PredByPred, ConstraintSet::hard({1, 2})));
      std::vector<std::size_t> expected;
      for (std::size_t i = 0; i < cands.size(); ++i)
        if (cands[i].prob_sum() > O) expected.push_back(i);
      CHECK(sol.selected == expected);
      if (!first) CHECK(std::includes(previous.begin(), previous.end(), sol.selected.begin(), sol.selected.end()));
      previous = sol.selected;
      first = false;
    }
  }
}

TEST_CASE("node budget: best-so-far with a timeout") {
  Rng rng(9);
  auto inst = testsupport::random_instance(rng, 16, 1, 20, 3, 3);
  SolveStats stats;
  auto cfg = config(0.0, Scope::PredByPred, ConstraintSet::hard({1, 2}));
  cfg.node_budget = 2;
  try {
    solve(inst.candidates, cfg, &stats);
    FAIL("budget of 2 nodes was enough");
  } catch (const SolveTimeout& e) {
    CHECK_FALSE(e.optimal());
    CHECK(validate(e.best(), inst.candidates, cfg.constraints, testsupport::fake_sentence(20, 1)).valid());
  }
}

TEST_CASE("solve_pool: every sentence valid, pool-level timeout flag") {
  SyntheticConfig sc;
  sc.n_sentences = 60;
  auto data = make_dataset(generate_synthetic(sc));
  for (Scope scope : {Scope::PredByPred, Scope::FullSentence}) {
    CsConfig cfg;
    cfg.scope = scope;
    cfg.constraints = default_constraints(scope);
    SolveStats stats;
    auto one = solve_pool(data.pool, cfg, 1, &stats);
    CHECK(stats.optimal);
    auto four = solve_pool(data.pool, cfg, 4);
    CHECK(one == four);
    for (std::size_t s = 0; s < one.size(); ++s)
      CHECK(validate(one[s], data.pool.sentences[s].candidates, cfg.constraints,
                     skeleton_sentence(data.pool.sentences[s]))
                .valid());
  }
  CsConfig tiny;
  tiny.node_budget = 1;
  SolveStats stats;
  auto partial = solve_pool(data.pool, tiny, 1, &stats);
  CHECK_FALSE(stats.optimal);
  CHECK(partial.size() == data.pool.sentences.size());
}

TEST_CASE("sweep over O") {
  SyntheticConfig sc;
  sc.n_sentences = 80;
  auto data = make_dataset(generate_synthetic(sc));
  CsConfig cfg;
  auto grid = default_sweep_grid();
  REQUIRE(grid.size() == 21);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(1.0));
  auto result = sweep_O(data.pool, *data.gold, cfg, grid);
  REQUIRE(result.rows.size() == 21);
  CHECK(result.rows.front().recall >= result.rows.back().recall);
  CHECK(result.rows.front().precision <= result.rows.back().precision);
  auto csv = result.csv();
  CHECK(csv.rfind("O,precision,recall,f1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 22);
  CHECK_FALSE(result.diagnostics().empty());
}

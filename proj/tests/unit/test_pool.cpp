#include <numeric>

#include "doctest.h"
#include "srlcomb/calibrate.hpp"
#include "srlcomb/corpus_io.hpp"
#include "srlcomb/errors.hpp"
#include "srlcomb/eval.hpp"
#include "srlcomb/pool.hpp"
#include "srlcomb/synthetic.hpp"

using namespace srlcomb;

namespace {

const char* kGold =
    "-\t(A0*\n"
    "-\t*)\n"
    "sell\t(V*)\n"
    "-\t(A1*)\n"
    "-\t(AM-TMP*)\n"
    "\n";
const char* kSysA =
    "-\t(A0*\n"
    "-\t*)\n"
    "sell\t(V*)\n"
    "-\t(A1*)\n"
    "-\t*\n"
    "\n";
const char* kSysB =
    "-\t(A0*)\n"
    "-\t*\n"
    "sell\t(V*)\n"
    "-\t(A1*)\n"
    "-\t(AM-LOC*)\n"
    "\n";

std::vector<SystemOutput> two_systems() {
  SystemOutput a{"A", parse_props(kSysA), parse_scores("0 0 A0 0 1 4\n0 0 A1 3 3 2\n")};
  SystemOutput b{"B", parse_props(kSysB), std::nullopt};
  return {a, b};
}

std::vector<SystemOutput> synthetic_systems(const SyntheticCorpus& corpus) {
  std::vector<SystemOutput> out;
  for (const auto& s : corpus.systems) out.push_back({s.name, s.props, s.scores});
  return out;
}

}  // namespace

TEST_CASE("pool merges identical arguments") {
  auto pool = build_pool(two_systems());
  REQUIRE(pool.sentences.size() == 1);
  const auto& cands = pool.sentences[0].candidates;
  REQUIRE(cands.size() == 4);  // A0[0,1], A0[0,0], A1[3,3], AM-LOC[4,4]
  CHECK(cands[0].argument.span == Span{0, 1});
  CHECK(cands[0].votes == std::vector<int>{0});
  CHECK(cands[1].argument.span == Span{0, 0});
  const auto& a1 = cands[2];
  CHECK(a1.label().text() == "A1");
  CHECK(a1.votes == std::vector<int>{0, 1});
  CHECK(a1.raw_scores[0] == 2.0);
  CHECK_FALSE(a1.raw_scores[1].has_value());
  CHECK(*a1.probs[0] == doctest::Approx(argument_probability(2.0, {})));
  CHECK_FALSE(a1.probs[1].has_value());
  CHECK(a1.prob_sum() == doctest::Approx(argument_probability(2.0, {})));
  for (const auto& c : cands) CHECK_FALSE(c.label().is_verb());
}

TEST_CASE("pool rejects mismatched skeletons") {
  auto systems = two_systems();
  systems[1].props = parse_props("-\t(A0*)\nsell\t(V*)\n-\t*\n-\t*\n-\t*\n\n");
  CHECK_THROWS_AS(build_pool(systems), AlignmentError);
  systems[1].props = parse_props("-\n\n");
  CHECK_THROWS_AS(build_pool(systems), AlignmentError);
}

TEST_CASE("gold alignment and unreachable gold") {
  auto gold = parse_props(kGold);
  auto pool = align_gold(build_pool(two_systems()), gold);
  int marked = 0;
  for (const auto& c : pool.sentences[0].candidates) marked += *c.is_gold;
  CHECK(marked == 2);
  CHECK(unreachable_gold(pool, gold) == std::vector<int>{1});  // AM-TMP
}

TEST_CASE("agreement table") {
  auto pool = align_gold(build_pool(two_systems()), parse_props(kGold));
  auto table = pool_stats(pool);
  CHECK(table.columns == std::vector<std::string>{"∩ of 2", "A", "B"});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].label == "A0");
  CHECK(table.rows[0].percent == std::vector<double>{0.0, 100.0, 0.0});
  CHECK(table.rows[1].percent == std::vector<double>{100.0, 0.0, 0.0});
  CHECK(table.format().find("∩ of 2") != std::string::npos);
  CHECK_THROWS_AS(pool_stats(build_pool(two_systems())), std::invalid_argument);

  auto one = align_gold(build_pool(std::vector<SystemOutput>{two_systems()[0]}), parse_props(kGold));
  auto single = pool_stats(one);
  CHECK(single.columns == std::vector<std::string>{"A"});
  for (const auto& row : single.rows) CHECK(row.percent == std::vector<double>{100.0});
}

TEST_CASE("agreement rows sum to 100") {
  SyntheticConfig cfg;
  cfg.n_sentences = 100;
  auto corpus = generate_synthetic(cfg);
  auto pool = align_gold(build_pool(synthetic_systems(corpus)), corpus.gold);
  auto table = pool_stats(pool);
  CHECK(table.columns.front() == "∩ of 3");
  for (const auto& row : table.rows)
    CHECK(std::accumulate(row.percent.begin(), row.percent.end(), 0.0) == doctest::Approx(100.0));
}

TEST_CASE("pool dump round trips") {
  SyntheticConfig cfg;
  cfg.n_sentences = 50;
  cfg.seed = 12;
  auto corpus = generate_synthetic(cfg);
  auto pool = align_gold(build_pool(synthetic_systems(corpus)), corpus.gold);
  auto text = emit_pool(pool);
  CHECK(parse_pool(text) == pool);
  CHECK(emit_pool(parse_pool(text)) == text);
  CHECK_THROWS_AS(parse_pool("garbage\n"), ParseError);
  auto unscored = build_pool(two_systems());
  CHECK(parse_pool(emit_pool(unscored)) == unscored);
}

TEST_CASE("system views rebuild the pool") {
  SyntheticConfig cfg;
  cfg.n_sentences = 40;
  auto corpus = generate_synthetic(cfg);
  auto systems = synthetic_systems(corpus);
  auto pool = build_pool(systems);
  auto views = system_views(pool);
  REQUIRE(views.size() == systems.size());
  for (std::size_t j = 0; j < views.size(); ++j) {
    CHECK(views[j].props == systems[j].props);
    CHECK(*views[j].scores == *systems[j].scores);
  }
  CHECK(build_pool(views) == pool);
}

TEST_CASE("selecting the gold-aligned candidates recovers reachable gold") {
  SyntheticConfig cfg;
  cfg.n_sentences = 60;
  auto corpus = generate_synthetic(cfg);
  auto pool = align_gold(build_pool(synthetic_systems(corpus)), corpus.gold);
  std::vector<Solution> solutions;
  for (const auto& sp : pool.sentences) {
    Solution sol;
    sol.sentence = sp.sentence;
    for (std::size_t i = 0; i < sp.candidates.size(); ++i)
      if (*sp.candidates[i].is_gold) sol.selected.push_back(i);
    solutions.push_back(sol);
  }
  auto props = solutions_to_props(pool, solutions);
  auto r = score(props, corpus.gold);
  CHECK(r.precision == 100.0);
  const auto missing = unreachable_gold(pool, corpus.gold);
  const long lost = std::accumulate(missing.begin(), missing.end(), 0L);
  CHECK(r.totals.gold - r.totals.correct == lost);
}

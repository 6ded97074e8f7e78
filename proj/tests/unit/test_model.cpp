#include <set>

#include "doctest.h"
#include "srlcomb/errors.hpp"
#include "srlcomb/model.hpp"
#include "srlcomb/rng.hpp"
#include "support.hpp"

using namespace srlcomb;

namespace {

Argument arg(int pred, const char* label, int s, int e) { return {pred, RoleLabel::parse(label), {s, e}}; }

Candidate cand(int pred, const char* label, int s, int e) {
  Candidate c;
  c.argument = arg(pred, label, s, e);
  c.votes = {0};
  c.probs = {0.5};
  c.raw_scores = {std::nullopt};
  return c;
}

// relation from token sets
SpanRelation relation_by_sets(Span a, Span b) {
  std::set<int> ta, tb;
  for (int i = a.start; i <= a.end; ++i) ta.insert(i);
  for (int i = b.start; i <= b.end; ++i) tb.insert(i);
  int shared = 0;
  for (int t : ta) shared += tb.count(t);
  if (ta == tb) return SpanRelation::Equal;
  if (shared == 0) return SpanRelation::Disjoint;
  if (shared == static_cast<int>(tb.size())) return SpanRelation::AContainsB;
  if (shared == static_cast<int>(ta.size())) return SpanRelation::BContainsA;
  return SpanRelation::Crossing;
}

}  // namespace

TEST_CASE("span relation agrees with token sets") {
  for (int a0 = 0; a0 < 7; ++a0)
    for (int a1 = a0; a1 < 7; ++a1)
      for (int b0 = 0; b0 < 7; ++b0)
        for (int b1 = b0; b1 < 7; ++b1)
          CHECK(span_relation({a0, a1}, {b0, b1}) == relation_by_sets({a0, a1}, {b0, b1}));
}

TEST_CASE("role label grammar") {
  CHECK(RoleLabel::parse("A0").is_core());
  CHECK(RoleLabel::parse("A5").core_index() == 5);
  CHECK(RoleLabel::parse("V").is_verb());
  CHECK(RoleLabel::parse("AM-TMP").kind() == RoleLabel::Kind::Adjunct);
  CHECK(RoleLabel::parse("R-A1").kind() == RoleLabel::Kind::Reference);
  CHECK(RoleLabel::parse("R-A1").base() == RoleLabel::parse("A1"));
  CHECK(RoleLabel::parse("C-AM-LOC").base() == RoleLabel::parse("AM-LOC"));
  CHECK(RoleLabel::parse("AA").kind() == RoleLabel::Kind::Other);
  CHECK(RoleLabel::parse("C-V").kind() == RoleLabel::Kind::Continuation);
  CHECK(RoleLabel::parse("AM-TMP").is_shareable_restricted());
  CHECK(RoleLabel::parse("R-AM-TMP").is_shareable_restricted());
  CHECK(RoleLabel::parse("C-A1").is_shareable_restricted());
  CHECK_FALSE(RoleLabel::parse("A1").is_shareable_restricted());
  CHECK_FALSE(RoleLabel::parse("R-A1").is_shareable_restricted());
  for (const char* bad : {"", "A6", "B0", "AM-", "R-", "R-R-A0", "a0", "AM-tmp x"})
    CHECK_FALSE(RoleLabel::try_parse(bad).has_value());
  CHECK_THROWS_AS(RoleLabel::parse("A9"), std::invalid_argument);
}

TEST_CASE("canonical order: start, longer first, label") {
  std::vector<Argument> args = {arg(0, "A1", 3, 4), arg(0, "A0", 0, 1), arg(0, "AM-TMP", 3, 6), arg(0, "A0", 3, 4)};
  std::sort(args.begin(), args.end(), canonical_less);
  CHECK(args[0].span == Span{0, 1});
  CHECK(args[1].span == Span{3, 6});
  CHECK(args[2].label.text() == "A0");
  CHECK(args[3].label.text() == "A1");
}

TEST_CASE("feature vectors") {
  auto x = FeatureVector::from_unsorted({5, 1, 3, 1});
  CHECK(x.ids == std::vector<std::uint32_t>{1, 3, 5});
  auto y = FeatureVector::from_unsorted({3, 4, 5});
  CHECK(x.dot(y) == 2);
  CHECK(y.dot(x) == 2);
  CHECK(x.dot(FeatureVector{}) == 0);
}

TEST_CASE("constraint set text round trips") {
  for (const char* text : {"1+2", "1+2+5+6", "3:soft=0.5", "1+2+3:soft=0.25+4:soft=1", "none"}) {
    auto cs = ConstraintSet::parse(text);
    CHECK(cs.to_string() == text);
    CHECK(ConstraintSet::parse(cs.to_string()) == cs);
  }
  CHECK(ConstraintSet::parse("1:hard+2") == ConstraintSet::hard({1, 2}));
  CHECK(ConstraintSet::parse("") == ConstraintSet{});
  for (const char* bad : {"1++2", "7", "0", "x", "1:soft=", "1:soft=abc", "1:maybe", "+"})
    CHECK_THROWS_AS(ConstraintSet::parse(bad), std::invalid_argument);
  auto mixed = ConstraintSet::parse("1+3:soft=0.5");
  CHECK(mixed.hard_subset() == ConstraintSet::hard({1}));
}

TEST_CASE("pairwise constraints") {
  using constraints::pair_violates;
  CHECK(pair_violates(1, arg(0, "A0", 0, 2), arg(0, "A1", 2, 3)));
  CHECK_FALSE(pair_violates(1, arg(0, "A0", 0, 2), arg(0, "A1", 3, 3)));
  CHECK_FALSE(pair_violates(1, arg(0, "A0", 0, 2), arg(1, "A1", 1, 3)));
  CHECK(pair_violates(2, arg(0, "A0", 0, 0), arg(0, "A0", 4, 5)));
  CHECK_FALSE(pair_violates(2, arg(0, "AM-TMP", 0, 0), arg(0, "AM-TMP", 4, 5)));
  CHECK_FALSE(pair_violates(2, arg(0, "A0", 0, 0), arg(1, "A0", 4, 5)));
  CHECK(pair_violates(5, arg(0, "A0", 0, 2), arg(1, "A1", 1, 3)));
  CHECK_FALSE(pair_violates(5, arg(0, "A0", 0, 3), arg(1, "A1", 1, 2)));
  CHECK_FALSE(pair_violates(5, arg(0, "A0", 0, 2), arg(0, "A1", 1, 3)));
  CHECK(pair_violates(6, arg(0, "AM-TMP", 0, 2), arg(1, "AM-TMP", 0, 2)));
  CHECK(pair_violates(6, arg(0, "C-A1", 0, 2), arg(1, "C-A1", 0, 2)));
  CHECK_FALSE(pair_violates(6, arg(0, "A1", 0, 2), arg(1, "A1", 0, 2)));
  CHECK_FALSE(pair_violates(6, arg(0, "AM-TMP", 0, 2), arg(1, "AM-TMP", 0, 3)));
}

TEST_CASE("requirement constraints") {
  using constraints::supports;
  CHECK(constraints::needs_support(3, arg(0, "R-A0", 5, 5)));
  CHECK_FALSE(constraints::needs_support(3, arg(0, "A0", 5, 5)));
  CHECK(supports(3, arg(0, "R-A0", 5, 5), arg(0, "A0", 7, 8)));
  CHECK_FALSE(supports(3, arg(0, "R-A0", 5, 5), arg(1, "A0", 0, 1)));
  CHECK(supports(4, arg(0, "C-A1", 5, 6), arg(0, "A1", 0, 2)));
  CHECK_FALSE(supports(4, arg(0, "C-A1", 5, 6), arg(0, "A1", 8, 9)));
  CHECK(supports(3, arg(0, "R-AM-TMP", 5, 5), arg(0, "AM-TMP", 0, 0)));
}

TEST_CASE("validate: hard and soft") {
  Sentence s = testsupport::fake_sentence(10, 2);
  std::vector<Candidate> cands = {cand(0, "A0", 0, 1), cand(0, "A0", 3, 4), cand(0, "R-A1", 6, 6),
                                  cand(1, "AM-TMP", 8, 9), cand(0, "AM-TMP", 8, 9)};
  Solution sol{0, {0, 1, 2}, 0.0};
  auto report = validate(sol, cands, ConstraintSet::hard({1, 2, 3}), s);
  CHECK_FALSE(report.valid());
  CHECK(report.hard_violations().size() == 2);

  auto soft = validate(sol, cands, ConstraintSet::parse("2:soft=0.5+3:soft=0.25"), s);
  CHECK(soft.valid());
  CHECK(soft.soft_penalty() == doctest::Approx(0.75));

  Solution shared{0, {3, 4}, 0.0};
  CHECK_FALSE(validate(shared, cands, ConstraintSet::hard({6}), s).valid());
  CHECK(validate(shared, cands, ConstraintSet::hard({1, 2, 5}), s).valid());

  Solution foreign{0, {7}, 0.0};
  CHECK_THROWS_AS(validate(foreign, cands, ConstraintSet::hard({1}), s), StructuralError);
}

TEST_CASE("validate: soft c2 penalties count pairs") {
  Sentence s = testsupport::fake_sentence(10, 1);
  std::vector<Candidate> cands = {cand(0, "A0", 0, 0), cand(0, "A0", 2, 2), cand(0, "A0", 4, 4)};
  Solution all{0, {0, 1, 2}, 0.0};
  auto report = validate(all, cands, ConstraintSet::parse("2:soft=1"), s);
  CHECK(report.soft_penalty() == doctest::Approx(3.0));
}

TEST_CASE("validate agrees with a direct pairwise check") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = testsupport::random_instance(rng, 8, 2, 12);
    Sentence s = testsupport::fake_sentence(inst.n_tokens, inst.n_predicates);
    const std::uint32_t mask = static_cast<std::uint32_t>(rng.next() & 0xff);
    Solution sol{0, testsupport::subset(mask, inst.candidates.size()), 0.0};
    for (int id : {1, 2, 5, 6}) {
      int expected = 0;
      for (std::size_t a = 0; a < sol.selected.size(); ++a)
        for (std::size_t b = a + 1; b < sol.selected.size(); ++b) {
          const auto& x = inst.candidates[sol.selected[a]].argument;
          const auto& y = inst.candidates[sol.selected[b]].argument;
          const bool same = x.predicate == y.predicate;
          const auto rel = span_relation(x.span, y.span);
          bool bad = false;
          if (id == 1) bad = same && rel != SpanRelation::Disjoint;
          if (id == 2) bad = same && x.label.is_core() && x.label == y.label;
          if (id == 5) bad = !same && rel == SpanRelation::Crossing;
          if (id == 6) bad = !same && rel == SpanRelation::Equal && x.label == y.label && x.label.is_shareable_restricted();
          expected += bad;
        }
      auto report = validate(sol, inst.candidates, ConstraintSet::hard({id}), s);
      CHECK(static_cast<int>(report.hard_violations().size()) == expected);
    }
  }
}

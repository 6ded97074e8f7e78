#include <filesystem>

#include "doctest.h"
#include "srlcomb/corpus_io.hpp"
#include "srlcomb/errors.hpp"
#include "srlcomb/rng.hpp"
#include "srlcomb/synthetic.hpp"

using namespace srlcomb;

namespace {

const char* kProps =
    "-\t(A0*\t*\n"
    "-\t*)\t*\n"
    "say\t(V*)\t*\n"
    "-\t(A1*\t(A0*)\n"
    "go\t*\t(V*)\n"
    "-\t*)\t(AM-TMP*)\n"
    "\n"
    "-\n"
    "\n";

}  // namespace

TEST_CASE("props parse") {
  auto doc = parse_props(kProps);
  REQUIRE(doc.sentences.size() == 2);
  const auto& s0 = doc.sentences[0];
  CHECK(s0.n_tokens == 6);
  REQUIRE(s0.propositions.size() == 2);
  CHECK(s0.propositions[0].predicate == Predicate{2, "say"});
  CHECK(s0.propositions[1].predicate == Predicate{4, "go"});
  const auto& args = s0.propositions[0].arguments;
  REQUIRE(args.size() == 3);
  CHECK(args[0].label.text() == "A0");
  CHECK(args[0].span == Span{0, 1});
  CHECK(args[1].label.is_verb());
  CHECK(args[2].span == Span{3, 5});
  CHECK(doc.sentences[1].n_tokens == 1);
  CHECK(doc.sentences[1].propositions.empty());
}

TEST_CASE("props emit is a fixed point") {
  auto doc = parse_props(kProps);
  auto text = emit_props(doc);
  CHECK(parse_props(text) == doc);
  CHECK(emit_props(parse_props(text)) == text);
}

TEST_CASE("props errors carry positions") {
  auto expect_line = [](const std::string& text, int line) {
    try {
      parse_props(text);
      FAIL("accepted: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("go\t(V*)\n-\t(A0*\n-\t*\n\n", 2);  // never closed
  expect_line("go\t(V*)\n-\t*)\n\n", 2);         // closes nothing
  expect_line("go\t(V*)\n-\t(Q9*)\n\n", 2);      // unknown label
  expect_line("go\t(V*)\n-\n\n", 2);              // column count
  expect_line("-\t(V*)\n\n", 1);                   // column without a predicate
}

TEST_CASE("props edge cases") {
  CHECK(emit_props(PropsDocument{}).empty());
  auto nested = parse_props("go\t(V*)\n-\t(A1*\n-\t(AM-TMP*)\n-\t*)\n\n");
  CHECK(nested.sentences[0].propositions[0].arguments.size() == 3);
}

TEST_CASE("emit rejects crossing arguments") {
  PropsDocument doc;
  PropsSentence s;
  s.n_tokens = 4;
  Proposition p;
  p.predicate = {0, "go"};
  p.arguments = {{0, RoleLabel::parse("V"), {0, 0}},
                 {0, RoleLabel::parse("A0"), {1, 2}},
                 {0, RoleLabel::parse("A1"), {2, 3}}};
  s.propositions.push_back(p);
  doc.sentences.push_back(s);
  CHECK_THROWS_AS(emit_props(doc), SerializationError);
}

TEST_CASE("syntax parse") {
  const char* text =
      "The DT B-NP (S* O (S(NP*\n"
      "cat NN I-NP * O *)\n"
      "sat VBD B-VP * O (VP*\n"
      "down RB O *S) O *))\n"
      "\n";
  auto sentences = parse_syntax(text);
  REQUIRE(sentences.size() == 1);
  const auto& s = sentences[0];
  CHECK(s.size() == 4);
  CHECK(s.tokens[2].pos == "VBD");
  CHECK(s.tokens[0].chunk == "B-NP");
  REQUIRE(s.parse.has_value());
  CHECK(s.parse->label == "S");
  CHECK(s.parse->span == Span{0, 3});
  REQUIRE(s.parse->children.size() == 2);
  CHECK(s.parse->children[0].label == "NP");
  CHECK(s.parse->children[0].span == Span{0, 1});
  CHECK(s.parse->children[0].children[0].is_preterminal());
  CHECK(s.parse->children[0].children[0].label == "DT");
  CHECK(emit_syntax(sentences) == text);
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_AS(parse_syntax("a DT I-NP * O\n\n"), ParseError);   // I- without B-
  CHECK_THROWS_AS(parse_syntax("a DT B-NP (S* O\n\n"), ParseError);  // clause never closed
  CHECK_THROWS_AS(parse_syntax("a DT B-NP * O (S*\n\n"), ParseError);
  CHECK_THROWS_AS(parse_syntax("a DT B-NP *\n\n"), ParseError);
}

TEST_CASE("scores parse and emit") {
  const char* text = "0 0 A0 0 1 1.5\n0 1 AM-TMP 5 5 -2.25\n3 0 A1 2 7 0.1\n";
  auto table = parse_scores(text);
  CHECK(table.size() == 3);
  CHECK(table.at({0, 1, "AM-TMP", {5, 5}}) == -2.25);
  CHECK(parse_scores(emit_scores(table)) == table);
  CHECK_THROWS_AS(parse_scores("0 0 A0 0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_scores("0 0 A0 3 1 1.0\n"), ParseError);
  CHECK_THROWS_AS(parse_scores("0 0 A0 0 1 x\n"), ParseError);
  CHECK_THROWS_AS(parse_scores("0 0 A0 0 1 1\n0 0 A0 0 1 2\n"), ParseError);
  CHECK(parse_scores("").empty());
}

TEST_CASE("format_double round trips") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal(0.0, 100.0);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("generated corpora round trip byte-identically") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticConfig cfg;
    cfg.n_sentences = 15;
    cfg.seed = seed;
    auto corpus = generate_synthetic(cfg);
    const auto props = emit_props(corpus.gold);
    CHECK(emit_props(parse_props(props)) == props);
    const auto syntax = emit_syntax(corpus.sentences);
    CHECK(emit_syntax(parse_syntax(syntax)) == syntax);
    for (const auto& sys : corpus.systems) {
      const auto scores = emit_scores(sys.scores);
      CHECK(emit_scores(parse_scores(scores)) == scores);
      const auto sp = emit_props(sys.props);
      CHECK(emit_props(parse_props(sp)) == sp);
    }
  }
}

TEST_CASE("attach predicates") {
  auto doc = parse_props(kProps);
  std::vector<Sentence> sentences(2);
  sentences[0].tokens.resize(6);
  sentences[1].tokens.resize(1);
  attach_predicates(sentences, doc);
  CHECK(sentences[0].predicates.size() == 2);
  sentences[1].tokens.resize(2);
  CHECK_THROWS_AS(attach_predicates(sentences, doc), AlignmentError);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "srlcomb_io_test";
  write_file(dir / "x" / "a.txt", "hello\n");
  CHECK(read_file(dir / "x" / "a.txt") == "hello\n");
  CHECK_THROWS(read_file(dir / "missing.txt"));
  std::filesystem::remove_all(dir);
}

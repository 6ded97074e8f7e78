#include "srlcomb/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "srlcomb/rng.hpp"

namespace srlcomb {

void SyntheticConfig::validate() const {
  auto prob = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must be in [0,1]");
  };
  if (n_sentences < 0) throw std::invalid_argument("n_sentences must be non-negative");
  if (min_tokens < 4 || min_tokens > max_tokens) throw std::invalid_argument("token range must be [>=4, >=min]");
  if (min_predicates < 0 || min_predicates > max_predicates) throw std::invalid_argument("bad predicate range");
  if (min_args < 0 || min_args > max_args) throw std::invalid_argument("bad argument range");
  if (systems.empty()) throw std::invalid_argument("at least one system required");
  for (const auto& s : systems) {
    prob(s.precision, "precision");
    prob(s.recall, "recall");
  }
  prob(label_noise, "label_noise");
  prob(boundary_noise, "boundary_noise");
  if (label_noise + boundary_noise > 1.0) throw std::invalid_argument("label_noise + boundary_noise > 1");
  if (!(score_stddev >= 0.0)) throw std::invalid_argument("score_stddev must be non-negative");
}

namespace {

struct Word {
  const char* form;
  const char* lemma;
};

constexpr std::array<const char*, 4> kDeterminers = {"the", "a", "this", "some"};
constexpr std::array<const char*, 5> kAdjectives = {"big", "new", "local", "strong", "early"};
constexpr std::array<const char*, 10> kNouns = {"company", "market", "share", "price", "fund",
                                                "report", "plan",    "deal",  "year",  "bank"};
constexpr std::array<const char*, 4> kPluralNouns = {"shares", "prices", "funds", "investors"};
constexpr std::array<const char*, 6> kPrepositions = {"in", "of", "for", "with", "on", "at"};
constexpr std::array<const char*, 3> kAdverbs = {"also", "quickly", "recently"};
constexpr std::array<Word, 10> kVerbs = {{{"sold", "sell"},
                                          {"bought", "buy"},
                                          {"said", "say"},
                                          {"expected", "expect"},
                                          {"reported", "report"},
                                          {"raised", "raise"},
                                          {"made", "make"},
                                          {"took", "take"},
                                          {"announced", "announce"},
                                          {"gave", "give"}}};
struct Entity {
  const char* form;
  const char* type;
};
constexpr std::array<Entity, 8> kEntities = {{{"Smith", "PER"},
                                              {"Mary", "PER"},
                                              {"IBM", "ORG"},
                                              {"Reuters", "ORG"},
                                              {"Apple", "ORG"},
                                              {"Boston", "LOC"},
                                              {"Chicago", "LOC"},
                                              {"Friday", "MISC"}}};

constexpr std::array<const char*, 10> kNoiseLabels = {"A0",     "A1",     "A2",     "A3",     "AM-TMP",
                                                      "AM-LOC", "AM-MNR", "AM-ADV", "AM-DIS", "AM-NEG"};

template <typename T, std::size_t N>
const T& pick(Rng& rng, const std::array<T, N>& items) {
  return items[rng.index(N)];
}

struct Complement {
  std::string kind;  // NP, PP, SBAR, ADVP
  Span span;
  std::optional<Span> head;  // NP -> NP PP: the inner NP
  std::optional<Span> tail;  // NP -> NP PP: the PP
};

struct Frame {
  int verb = 0;
  std::string lemma;
  std::optional<Span> subject;
  std::optional<Span> adverbial;  // sentence-initial ADVP of the main clause
  std::vector<Complement> complements;
};

class SentenceBuilder {
 public:
  explicit SentenceBuilder(Rng& rng) : rng_(rng) {}

  Sentence build(int n) {
    ParseNode root{"S", {}, {}};
    int body = n - 1;
    std::optional<Span> adverbial;
    if (n >= 7 && rng_.bernoulli(0.25)) {
      ParseNode advp = phrase("ADVP", {leaf("RB", pick(rng_, kAdverbs))});
      adverbial = advp.span;
      root.children.push_back(std::move(advp));
      root.children.push_back(leaf(",", ","));
      body -= 2;
    }
    const int subject_len = rng_.range(1, std::min(3, body - 1));
    ParseNode subject = np(subject_len);
    const Span subject_span = subject.span;
    root.children.push_back(std::move(subject));
    auto [vp_node, frame] = vp(body - subject_len);
    frames_[frame].subject = subject_span;
    frames_[frame].adverbial = adverbial;
    root.children.push_back(std::move(vp_node));
    root.children.push_back(leaf(".", "."));
    root.span = {0, static_cast<int>(tokens_.size()) - 1};

    Sentence sentence;
    sentence.tokens = std::move(tokens_);
    assign_chunks(root, nullptr, sentence.tokens);
    assign_clauses(root, sentence.tokens);
    sentence.parse = std::move(root);
    return sentence;
  }

  const std::vector<Frame>& frames() const { return frames_; }

 private:
  ParseNode leaf(const std::string& pos, const std::string& form, const std::string& ne = "O") {
    Token token;
    token.index = static_cast<int>(tokens_.size());
    token.form = form;
    token.pos = pos;
    token.ne = ne;
    tokens_.push_back(std::move(token));
    return ParseNode{pos, {tokens_.back().index, tokens_.back().index}, {}};
  }

  static ParseNode phrase(const std::string& label, std::vector<ParseNode> children) {
    Span span{children.front().span.start, children.back().span.end};
    return ParseNode{label, span, std::move(children)};
  }

  ParseNode flat_np(int len) {
    std::vector<ParseNode> kids;
    if (len <= 3 && rng_.bernoulli(0.25)) {
      const Entity& first = pick(rng_, kEntities);
      kids.push_back(leaf("NNP", first.form, std::string("B-") + first.type));
      for (int i = 1; i < len; ++i)
        kids.push_back(leaf("NNP", pick(rng_, kEntities).form, std::string("I-") + first.type));
      return phrase("NP", std::move(kids));
    }
    if (len == 3 && rng_.bernoulli(0.15)) {
      kids.push_back(leaf("NN", pick(rng_, kNouns)));
      kids.push_back(leaf("CC", rng_.bernoulli(0.5) ? "and" : "or"));
      kids.push_back(leaf("NN", pick(rng_, kNouns)));
      return phrase("NP", std::move(kids));
    }
    if (len == 1) {
      kids.push_back(rng_.bernoulli(0.5) ? leaf("NNS", pick(rng_, kPluralNouns)) : leaf("NN", pick(rng_, kNouns)));
      return phrase("NP", std::move(kids));
    }
    kids.push_back(leaf("DT", pick(rng_, kDeterminers)));
    const int nouns = len >= 5 ? 2 : 1;
    for (int i = 1; i < len - nouns; ++i) kids.push_back(leaf("JJ", pick(rng_, kAdjectives)));
    for (int i = 0; i < nouns; ++i) kids.push_back(leaf("NN", pick(rng_, kNouns)));
    return phrase("NP", std::move(kids));
  }

  ParseNode np(int len) {
    if (len <= 3 || (len <= 5 && rng_.bernoulli(0.4))) return flat_np(len);
    const int head = rng_.range(1, std::min(3, len - 2));
    ParseNode inner = flat_np(head);
    ParseNode tail = pp(len - head);
    return phrase("NP", {std::move(inner), std::move(tail)});
  }

  ParseNode pp(int len) {
    ParseNode prep = leaf("IN", pick(rng_, kPrepositions));
    return phrase("PP", {std::move(prep), np(len - 1)});
  }

  ParseNode s_inner(int m) {
    const int a = rng_.range(1, std::min(3, m - 1));
    ParseNode subject = np(a);
    const Span subject_span = subject.span;
    auto [vp_node, frame] = vp(m - a);
    frames_[frame].subject = subject_span;
    return phrase("S", {std::move(subject), std::move(vp_node)});
  }

  std::pair<ParseNode, std::size_t> vp(int len) {
    const Word& verb = pick(rng_, kVerbs);
    std::vector<ParseNode> kids;
    kids.push_back(leaf("VBD", verb.form));
    const std::size_t frame = frames_.size();
    frames_.push_back(Frame{kids.front().span.start, verb.lemma, {}, {}, {}});

    const int rem = len - 1;
    auto add = [&](ParseNode node, const std::string& kind) {
      Complement c{kind, node.span, {}, {}};
      if (kind == "NP" && node.children.size() == 2 && !node.children[0].is_preterminal() &&
          node.children[1].label == "PP") {
        c.head = node.children[0].span;
        c.tail = node.children[1].span;
      }
      frames_[frame].complements.push_back(c);
      kids.push_back(std::move(node));
    };
    const double r = rng_.uniform();
    if (rem == 0) {
    } else if (rem >= 5 && r < 0.3) {
      ParseNode that = leaf("IN", "that");
      add(phrase("SBAR", {std::move(that), s_inner(rem - 1)}), "SBAR");
    } else if (rem >= 4 && r < 0.6) {
      const int k = rng_.range(1, rem - 2);
      add(np(k), "NP");
      add(pp(rem - k), "PP");
    } else if (rem >= 3 && r < 0.7) {
      add(np(rem - 1), "NP");
      add(phrase("ADVP", {leaf("RB", pick(rng_, kAdverbs))}), "ADVP");
    } else if (rem >= 2 && r < 0.8) {
      add(pp(rem), "PP");
    } else {
      add(np(rem), "NP");
    }
    return {phrase("VP", std::move(kids)), frame};
  }

  static void assign_chunks(const ParseNode& node, const ParseNode* parent, std::vector<Token>& tokens) {
    if (node.is_preterminal()) {
      Token& t = tokens[node.span.start];
      if (parent == nullptr || parent->label == "S")
        t.chunk = "O";
      else
        t.chunk = "B-" + parent->label;
      return;
    }
    const bool flat = std::all_of(node.children.begin(), node.children.end(),
                                  [](const ParseNode& c) { return c.is_preterminal(); });
    if (flat && node.label != "S") {
      for (int i = node.span.start; i <= node.span.end; ++i)
        tokens[i].chunk = (i == node.span.start ? "B-" : "I-") + node.label;
      return;
    }
    for (const auto& child : node.children) assign_chunks(child, &node, tokens);
  }

  static void assign_clauses(const ParseNode& root, std::vector<Token>& tokens) {
    std::vector<std::string> opens(tokens.size());
    std::vector<std::string> closes(tokens.size());
    auto visit = [&](auto&& self, const ParseNode& node) -> void {
      if (node.label == "S") {
        opens[node.span.start] += "(S";
        closes[node.span.end] += "S)";
      }
      for (const auto& c : node.children) self(self, c);
    };
    visit(visit, root);
    for (std::size_t i = 0; i < tokens.size(); ++i) tokens[i].clause = opens[i] + "*" + closes[i];
  }

  Rng& rng_;
  std::vector<Token> tokens_;
  std::vector<Frame> frames_;
};

void collect_spans(const ParseNode& node, std::vector<Span>& out) {
  out.push_back(node.span);
  for (const auto& c : node.children) collect_spans(c, out);
}

std::vector<Argument> label_frame(const Frame& frame, int predicate, int target, Rng& rng) {
  std::vector<Argument> args;
  std::set<std::string> used;
  auto push = [&](const std::string& label, Span span) {
    args.push_back({predicate, RoleLabel::parse(label), span});
    used.insert(label);
  };
  auto free_core = [&](const char* label) { return !used.count(label); };

  if (frame.subject) push("A0", *frame.subject);
  if (frame.adverbial) push(rng.bernoulli(0.5) ? "AM-DIS" : "AM-TMP", *frame.adverbial);
  static constexpr std::array<const char*, 3> kPpAdjuncts = {"AM-LOC", "AM-TMP", "AM-MNR"};
  for (const Complement& c : frame.complements) {
    if (c.kind == "NP") {
      if (free_core("A1")) {
        if (c.head && rng.bernoulli(0.1)) {
          push("A1", *c.head);
          push("C-A1", *c.tail);
        } else {
          push("A1", c.span);
        }
      } else {
        push(free_core("A2") ? "A2" : "AM-ADV", c.span);
      }
    } else if (c.kind == "PP") {
      if (free_core("A2") && rng.bernoulli(0.4))
        push("A2", c.span);
      else
        push(pick(rng, kPpAdjuncts), c.span);
    } else if (c.kind == "SBAR") {
      push(free_core("A1") ? "A1" : "AM-ADV", c.span);
    } else {
      push(rng.bernoulli(0.5) ? "AM-MNR" : "AM-TMP", c.span);
    }
  }
  // Trim to the target size; a continuation goes together with its base.
  while (static_cast<int>(args.size()) > std::max(target, 1)) {
    std::size_t victim = rng.index(args.size());
    RoleLabel label = args[victim].label;
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(victim));
    if (label.kind() == RoleLabel::Kind::Core) {
      std::erase_if(args, [&](const Argument& a) {
        return a.label.kind() == RoleLabel::Kind::Continuation && a.label.base() == label;
      });
    }
  }
  return args;
}

bool fits(const std::vector<Argument>& out, const Argument& arg, int verb, int n_tokens) {
  if (!arg.span.valid() || arg.span.end >= n_tokens || arg.span.contains(verb)) return false;
  for (const Argument& a : out) {
    if (span_relation(a.span, arg.span) != SpanRelation::Disjoint) return false;
    if (arg.label.is_core() && a.label == arg.label) return false;
  }
  return true;
}

bool in_gold(const std::vector<Argument>& gold, const Argument& arg) {
  return std::any_of(gold.begin(), gold.end(),
                     [&](const Argument& g) { return g.label == arg.label && g.span == arg.span; });
}

RoleLabel other_label(const RoleLabel& label, Rng& rng) {
  for (;;) {
    RoleLabel candidate = RoleLabel::parse(pick(rng, kNoiseLabels));
    if (candidate != label) return candidate;
  }
}

std::vector<Argument> corrupt(const std::vector<Argument>& gold, int predicate, int verb, int n_tokens,
                              const std::vector<Span>& node_spans, const SystemKnobs& knobs,
                              const SyntheticConfig& cfg, Rng& rng) {
  std::vector<Argument> kept;
  std::vector<Argument> noisy;
  for (const Argument& g : gold) {
    if (rng.uniform() < knobs.recall) {
      kept.push_back(g);
      continue;
    }
    const double v = rng.uniform();
    if (v < cfg.label_noise) {
      noisy.push_back({predicate, other_label(g.label, rng), g.span});
    } else if (v < cfg.label_noise + cfg.boundary_noise) {
      Argument a = g;
      const int delta = rng.bernoulli(0.5) ? 1 : -1;
      if (rng.bernoulli(0.5))
        a.span.start += delta;
      else
        a.span.end += delta;
      noisy.push_back(a);
    }
  }
  std::vector<Argument> out = kept;
  int incorrect = 0;
  for (const Argument& a : noisy) {
    if (fits(out, a, verb, n_tokens) && !in_gold(gold, a)) {
      out.push_back(a);
      ++incorrect;
    }
  }
  if (knobs.precision < 1.0) {
    const double wanted = knobs.precision > 0.0
                              ? static_cast<double>(kept.size()) * (1.0 - knobs.precision) / knobs.precision
                              : static_cast<double>(2 * cfg.max_args);
    double extra = std::max(0.0, wanted - incorrect);
    int count = static_cast<int>(std::floor(extra));
    if (rng.bernoulli(extra - count)) ++count;
    for (int i = 0; i < count; ++i) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        Span span;
        if (rng.bernoulli(0.7)) {
          span = node_spans[rng.index(node_spans.size())];
        } else {
          const int start = rng.range(0, n_tokens - 1);
          span = {start, std::min(n_tokens - 1, start + rng.range(0, 4))};
        }
        Argument a{predicate, RoleLabel::parse(pick(rng, kNoiseLabels)), span};
        if (fits(out, a, verb, n_tokens) && !in_gold(gold, a)) {
          out.push_back(a);
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  SyntheticCorpus corpus;
  Rng rng(derive_seed(cfg.seed, 0));
  std::vector<Rng> system_rngs;
  for (std::size_t j = 0; j < cfg.systems.size(); ++j) system_rngs.emplace_back(derive_seed(cfg.seed, 1000 + j));
  corpus.systems.resize(cfg.systems.size());
  for (std::size_t j = 0; j < cfg.systems.size(); ++j)
    corpus.systems[j].name = cfg.systems[j].name.empty() ? "M" + std::to_string(j + 1) : cfg.systems[j].name;

  for (int s = 0; s < cfg.n_sentences; ++s) {
    SentenceBuilder builder(rng);
    Sentence sentence = builder.build(rng.range(cfg.min_tokens, cfg.max_tokens));
    sentence.id = s;
    const int n = sentence.size();

    std::vector<std::size_t> order(builder.frames().size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const std::size_t k =
        std::min<std::size_t>(order.size(), static_cast<std::size_t>(rng.range(cfg.min_predicates, cfg.max_predicates)));
    order.resize(k);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return builder.frames()[a].verb < builder.frames()[b].verb; });

    std::vector<Span> node_spans;
    collect_spans(*sentence.parse, node_spans);

    PropsSentence gold_sentence{n, {}};
    std::vector<PropsSentence> system_sentences(cfg.systems.size(), PropsSentence{n, {}});
    for (std::size_t p = 0; p < order.size(); ++p) {
      const Frame& frame = builder.frames()[order[p]];
      const int pred = static_cast<int>(p);
      const Predicate predicate{frame.verb, frame.lemma};
      sentence.predicates.push_back(predicate);
      const Argument verb_arg{pred, RoleLabel::parse("V"), Span{frame.verb, frame.verb}};

      std::vector<Argument> gold = label_frame(frame, pred, rng.range(cfg.min_args, cfg.max_args), rng);
      Proposition gold_prop{predicate, gold};
      gold_prop.arguments.push_back(verb_arg);
      std::sort(gold_prop.arguments.begin(), gold_prop.arguments.end(), canonical_less);
      gold_sentence.propositions.push_back(std::move(gold_prop));

      for (std::size_t j = 0; j < cfg.systems.size(); ++j) {
        std::vector<Argument> out =
            corrupt(gold, pred, frame.verb, n, node_spans, cfg.systems[j], cfg, system_rngs[j]);
        std::sort(out.begin(), out.end(), canonical_less);
        for (const Argument& a : out) {
          const bool correct = in_gold(gold, a);
          const double score = system_rngs[j].normal(
              correct ? cfg.correct_score_mean : cfg.incorrect_score_mean, cfg.score_stddev);
          corpus.systems[j].scores[ScoreKey{s, pred, a.label.text(), a.span}] = score;
        }
        out.push_back(verb_arg);
        std::sort(out.begin(), out.end(), canonical_less);
        system_sentences[j].propositions.push_back({predicate, std::move(out)});
      }
    }
    corpus.gold.sentences.push_back(std::move(gold_sentence));
    for (std::size_t j = 0; j < cfg.systems.size(); ++j)
      corpus.systems[j].props.sentences.push_back(std::move(system_sentences[j]));
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

}  // namespace srlcomb

#include "srlcomb/features.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "srlcomb/errors.hpp"

namespace srlcomb {

// ---------------------------------------------------------------------------
// FeatureConfig

FeatureConfig FeatureConfig::cumulative(int k) {
  if (k < 1 || k > 6) throw std::invalid_argument("feature group count must be in 1..6");
  FeatureConfig cfg;
  for (int g = 1; g <= 6; ++g) cfg.groups[static_cast<std::size_t>(g - 1)] = g <= k;
  return cfg;
}

namespace {

int parse_group(std::string_view text) {
  if (text.size() != 3 || (text.substr(0, 2) != "FS" && text.substr(0, 2) != "fs") || text[2] < '1' || text[2] > '6')
    throw std::invalid_argument("unknown feature group '" + std::string(text) + "'");
  return text[2] - '0';
}

std::string bucket(long n) {
  if (n >= 5) return "5+";
  if (n <= -5) return "-5+";
  return std::to_string(n);
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

FeatureConfig FeatureConfig::parse(std::string_view text) {
  FeatureConfig cfg;
  if (text == "all") return cfg;
  cfg.groups.fill(false);
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    const int lo = parse_group(text.substr(0, dots));
    const int hi = parse_group(text.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("empty feature group range");
    for (int g = lo; g <= hi; ++g) cfg.groups[static_cast<std::size_t>(g - 1)] = true;
    return cfg;
  }
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto comma = text.find(',', begin);
    if (comma == std::string_view::npos) comma = text.size();
    cfg.groups[static_cast<std::size_t>(parse_group(text.substr(begin, comma - begin)) - 1)] = true;
    begin = comma + 1;
  }
  return cfg;
}

std::string FeatureConfig::to_string() const {
  std::vector<std::string> names;
  for (int g = 1; g <= 6; ++g)
    if (enabled(g)) names.push_back("FS" + std::to_string(g));
  return join(names, ",");
}

void FeatureConfig::validate() const {
  if (std::none_of(groups.begin(), groups.end(), [](bool b) { return b; }))
    throw std::invalid_argument("at least one feature group must be enabled");
  if (ngram_cap < 1) throw std::invalid_argument("n-gram cap must be positive");
  if (path_threshold < 1) throw std::invalid_argument("path threshold must be positive");
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary(const Vocabulary& other) {
  std::lock_guard lock(other.mutex_);
  names_ = other.names_;
  ids_ = other.ids_;
  frozen_ = other.frozen_;
}

Vocabulary& Vocabulary::operator=(const Vocabulary& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  names_ = other.names_;
  ids_ = other.ids_;
  frozen_ = other.frozen_;
  return *this;
}

std::optional<std::uint32_t> Vocabulary::intern(const std::string& feature) {
  std::lock_guard lock(mutex_);
  if (auto it = ids_.find(feature); it != ids_.end()) return it->second;
  if (frozen_) return std::nullopt;
  const auto id = static_cast<std::uint32_t>(names_.size());
  names_.push_back(feature);
  ids_.emplace(feature, id);
  return id;
}

std::optional<std::uint32_t> Vocabulary::find(const std::string& feature) const {
  std::lock_guard lock(mutex_);
  if (auto it = ids_.find(feature); it != ids_.end()) return it->second;
  return std::nullopt;
}

const std::string& Vocabulary::name(std::uint32_t id) const {
  std::lock_guard lock(mutex_);
  return names_.at(id);
}

std::size_t Vocabulary::size() const {
  std::lock_guard lock(mutex_);
  return names_.size();
}

std::string Vocabulary::dump() const {
  std::lock_guard lock(mutex_);
  std::string out;
  for (std::size_t i = 0; i < names_.size(); ++i) out += std::to_string(i) + '\t' + names_[i] + '\n';
  return out;
}

Vocabulary Vocabulary::parse(std::string_view text) {
  Vocabulary vocab;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("vocabulary line needs id<TAB>feature", number);
    std::uint32_t id = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, id);
    if (ec != std::errc() || ptr != line.data() + tab || id != vocab.names_.size())
      throw ParseError("vocabulary ids must be consecutive from 0", number);
    std::string feature = line.substr(tab + 1);
    if (!vocab.ids_.emplace(feature, id).second) throw ParseError("duplicate feature '" + feature + "'", number);
    vocab.names_.push_back(std::move(feature));
  }
  return vocab;
}

std::uint64_t feature_fingerprint(const FeatureConfig& cfg, const Vocabulary& vocab) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mix(cfg.to_string());
  mix("|" + std::to_string(cfg.ngram_cap) + "|" + std::to_string(cfg.path_threshold) + "|");
  mix(vocab.dump());
  return h;
}

// ---------------------------------------------------------------------------
// Syntax helpers

namespace syntax {

namespace {

struct FlatNode {
  const ParseNode* node;
  int parent;
  int depth;
};

void flatten(const ParseNode& node, int parent, int depth, std::vector<FlatNode>& out) {
  out.push_back({&node, parent, depth});
  const int self = static_cast<int>(out.size()) - 1;
  for (const auto& child : node.children) flatten(child, self, depth + 1, out);
}

int index_of(const std::vector<FlatNode>& flat, const ParseNode* node) {
  for (std::size_t i = 0; i < flat.size(); ++i)
    if (flat[i].node == node) return static_cast<int>(i);
  return -1;
}

}  // namespace

MappedNode map_constituent(const ParseNode& root, Span span) {
  std::vector<FlatNode> flat;
  flatten(root, -1, 0, flat);
  // flatten is pre-order, so the first exact match is the highest one
  for (const auto& f : flat)
    if (f.node->span == span) return {f.node, true};
  const ParseNode* best = nullptr;
  for (const auto& f : flat) {
    const Span s = f.node->span;
    if (s.start != span.start || s.end > span.end) continue;
    if (!best || s.length() > best->span.length()) best = f.node;
  }
  return {best, false};
}

std::string TreePath::text() const {
  std::string out;
  for (const auto& label : up) out += label + "^";
  out += ancestor;
  for (const auto& label : down) out += "!" + label;
  return out;
}

std::optional<TreePath> tree_path(const ParseNode& root, const ParseNode* from, const ParseNode* to) {
  std::vector<FlatNode> flat;
  flatten(root, -1, 0, flat);
  int a = index_of(flat, from);
  int b = index_of(flat, to);
  if (a < 0 || b < 0) return std::nullopt;
  std::vector<int> up_chain, down_chain;
  while (flat[a].depth > flat[b].depth) {
    up_chain.push_back(a);
    a = flat[a].parent;
  }
  while (flat[b].depth > flat[a].depth) {
    down_chain.push_back(b);
    b = flat[b].parent;
  }
  while (a != b) {
    up_chain.push_back(a);
    down_chain.push_back(b);
    a = flat[a].parent;
    b = flat[b].parent;
  }
  TreePath path;
  for (int i : up_chain) path.up.push_back(flat[i].node->label);
  path.ancestor = flat[a].node->label;
  for (auto it = down_chain.rbegin(); it != down_chain.rend(); ++it) path.down.push_back(flat[*it].node->label);
  return path;
}

std::vector<std::string> generalized_paths(const TreePath& path, int threshold) {
  std::vector<std::string> out;
  if (static_cast<int>(path.length()) <= threshold) return out;
  const std::string arg = path.up.empty() ? path.ancestor : path.up.front();
  const std::string pred = path.down.empty() ? path.ancestor : path.down.back();
  const std::string head = path.up.empty() ? path.ancestor : arg + "^" + path.ancestor;
  // (a) intermediate labels between the ancestor and the predicate
  for (std::size_t i = 0; i + 1 < path.down.size(); ++i) out.push_back("a:" + head + "!" + path.down[i] + "!" + pred);
  // (b) intermediate labels between the argument and the ancestor
  const std::string tail = path.down.empty() ? path.ancestor : path.ancestor + "!" + pred;
  for (std::size_t i = 1; i < path.up.size(); ++i) out.push_back("b:" + arg + "^" + path.up[i] + "^" + tail);
  return out;
}

}  // namespace syntax

// ---------------------------------------------------------------------------
// Extraction

namespace {

struct Chunk {
  std::string type;
  Span span;
};

std::vector<Chunk> chunks_of(const Sentence& sentence) {
  std::vector<Chunk> out;
  bool open = false;
  for (const auto& tok : sentence.tokens) {
    const std::string& tag = tok.chunk;
    if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
      const std::string type = tag.substr(2);
      if (tag[0] == 'I' && open && out.back().type == type) {
        out.back().span.end = tok.index;
      } else {
        out.push_back({type, {tok.index, tok.index}});
        open = true;
      }
    } else {
      open = false;
    }
  }
  return out;
}

std::vector<Span> clauses_of(const Sentence& sentence) {
  std::vector<Span> out;
  std::vector<int> stack;
  for (const auto& tok : sentence.tokens) {
    for (char c : tok.clause) {
      if (c == '(') {
        stack.push_back(tok.index);
      } else if (c == ')' && !stack.empty()) {
        out.push_back({stack.back(), tok.index});
        stack.pop_back();
      }
    }
  }
  return out;
}

int clause_depth(const std::vector<Span>& clauses, Span span) {
  int depth = 0;
  for (const auto& c : clauses)
    if (c.start <= span.start && span.end <= c.end) ++depth;
  return depth;
}

std::string clause_marks(const Sentence& sentence, int from, int to) {
  std::vector<std::string> marks;
  for (int t = std::max(from, 0); t <= to && t < sentence.size(); ++t) {
    std::string tag;
    for (char c : sentence.tokens[static_cast<std::size_t>(t)].clause)
      if (c != '*') tag += c;
    if (!tag.empty()) marks.push_back(tag);
  }
  return marks.empty() ? "none" : join(marks, "|");
}

void sequence_features(std::vector<std::string>& out, const std::string& prefix, const std::vector<std::string>& seq,
                       int cap) {
  if (seq.empty()) {
    out.push_back(prefix + "=none");
  } else if (static_cast<int>(seq.size()) <= cap) {
    out.push_back(prefix + "=" + join(seq, "-"));
  } else {
    const std::vector<std::string> head(seq.begin(), seq.begin() + cap);
    const std::vector<std::string> tail(seq.end() - cap, seq.end());
    out.push_back(prefix + "_start=" + join(head, "-"));
    out.push_back(prefix + "_end=" + join(tail, "-"));
  }
}

std::string system_set(const std::set<int>& ids, std::span<const std::string> systems) {
  std::vector<std::string> names;
  for (int j : ids) names.push_back(systems[static_cast<std::size_t>(j)]);
  return join(names, "+");
}

void fs1(std::vector<std::string>& out, const SentencePool& sp, const Candidate& c,
         std::span<const std::string> systems) {
  out.push_back("fs1:label=" + c.label().text());
  out.push_back("fs1:numsys=" + std::to_string(c.vote_count()));
  out.push_back("fs1:sys=" + system_set(std::set<int>(c.votes.begin(), c.votes.end()), systems));
  const int pred_pos = sp.predicates[static_cast<std::size_t>(c.predicate())].position;
  for (int j : c.votes) {
    std::vector<const Candidate*> frame;
    for (const auto& o : sp.candidates)
      if (o.predicate() == c.predicate() && std::binary_search(o.votes.begin(), o.votes.end(), j)) frame.push_back(&o);
    std::stable_sort(frame.begin(), frame.end(),
                     [](const Candidate* a, const Candidate* b) { return canonical_less(a->argument, b->argument); });
    std::vector<std::string> seq;
    bool verb_done = false;
    for (const Candidate* o : frame) {
      if (!verb_done && o->span().start > pred_pos) {
        seq.push_back("V");
        verb_done = true;
      }
      seq.push_back(o->label().text());
    }
    if (!verb_done) seq.push_back("V");
    out.push_back("fs1:seq:" + systems[static_cast<std::size_t>(j)] + "=" + join(seq, "-"));
  }
}

void overlap_group(std::vector<std::string>& out, const std::string& group, const SentencePool& sp,
                   std::size_t index, bool same_predicate, std::span<const std::string> systems) {
  const Candidate& c = sp.candidates[index];
  static const char* const kNames[] = {"samespan", "inside", "outside", "crossing"};
  std::array<int, 4> counts{};
  std::array<std::set<int>, 4> voters;
  for (std::size_t k = 0; k < sp.candidates.size(); ++k) {
    if (k == index) continue;
    const Candidate& o = sp.candidates[k];
    if ((o.predicate() == c.predicate()) != same_predicate) continue;
    int slot = -1;
    switch (span_relation(c.span(), o.span())) {
      case SpanRelation::Equal:
        // same predicate: a different label; other predicates: any label
        slot = 0;
        break;
      case SpanRelation::AContainsB:
        slot = 1;
        break;
      case SpanRelation::BContainsA:
        slot = 2;
        break;
      case SpanRelation::Crossing:
        slot = 3;
        break;
      case SpanRelation::Disjoint:
        break;
    }
    if (slot < 0) continue;
    ++counts[static_cast<std::size_t>(slot)];
    voters[static_cast<std::size_t>(slot)].insert(o.votes.begin(), o.votes.end());
  }
  for (std::size_t s = 0; s < 4; ++s) {
    out.push_back(group + ":" + kNames[s] + "=" + bucket(counts[s]));
    if (!voters[s].empty()) out.push_back(group + ":" + kNames[s] + "_sys=" + system_set(voters[s], systems));
  }
}

void fs4(std::vector<std::string>& out, const Candidate& c, int pred_pos, const Sentence& sentence, int cap) {
  const Span span = c.span();
  const auto chunks = chunks_of(sentence);
  const auto clauses = clauses_of(sentence);

  std::vector<std::string> inside;
  for (const auto& ch : chunks)
    if (span.start <= ch.span.start && ch.span.end <= span.end) inside.push_back(ch.type);
  out.push_back("fs4:tokens=" + bucket(span.length()));
  out.push_back("fs4:chunks=" + bucket(static_cast<long>(inside.size())));
  sequence_features(out, "fs4:chunkseq", inside, cap);
  out.push_back("fs4:clauses_in=" + clause_marks(sentence, span.start, span.end));

  std::set<std::string> ne_types;
  for (int t = span.start; t <= span.end && t < sentence.size(); ++t) {
    const std::string& ne = sentence.tokens[static_cast<std::size_t>(t)].ne;
    if (ne.size() > 2 && ne[1] == '-') ne_types.insert(ne.substr(2));
  }
  if (ne_types.empty()) out.push_back("fs4:ne=none");
  for (const auto& type : ne_types) out.push_back("fs4:ne=" + type);

  std::string position = "covers";
  int gap_from = 0, gap_to = -1;
  if (span.end < pred_pos) {
    position = "before";
    gap_from = span.end + 1;
    gap_to = pred_pos - 1;
  } else if (span.start > pred_pos) {
    position = "after";
    gap_from = pred_pos + 1;
    gap_to = span.start - 1;
  }
  out.push_back("fs4:position=" + position);
  out.push_back(std::string("fs4:adjacent=") + (position != "covers" && gap_to < gap_from ? "1" : "0"));

  std::vector<std::string> between;
  for (const auto& ch : chunks)
    if (gap_from <= ch.span.start && ch.span.end <= gap_to) between.push_back(ch.type);
  sequence_features(out, "fs4:chunks_between", between, cap);
  out.push_back("fs4:nchunks_between=" + bucket(static_cast<long>(between.size())));
  out.push_back("fs4:clauses_between=" + (gap_to < gap_from ? std::string("none") : clause_marks(sentence, gap_from, gap_to)));
  out.push_back("fs4:clause_depth_diff=" +
                bucket(clause_depth(clauses, {pred_pos, pred_pos}) - clause_depth(clauses, span)));
}

const ParseNode* preterminal_parent(const ParseNode& node, int token, const ParseNode* parent) {
  if (!node.span.contains(token)) return nullptr;
  if (node.is_preterminal()) return parent ? parent : &node;
  for (const auto& child : node.children)
    if (const ParseNode* found = preterminal_parent(child, token, &node)) return found;
  return nullptr;
}

int depth_of(const ParseNode& node, const ParseNode* target, int depth) {
  if (&node == target) return depth;
  for (const auto& child : node.children)
    if (int d = depth_of(child, target, depth + 1); d >= 0) return d;
  return -1;
}

const ParseNode* parent_of(const ParseNode& node, const ParseNode* target) {
  for (const auto& child : node.children) {
    if (&child == target) return &node;
    if (const ParseNode* found = parent_of(child, target)) return found;
  }
  return nullptr;
}

bool is_clause(const std::string& label) { return !label.empty() && label[0] == 'S'; }

void fs5(std::vector<std::string>& out, const Candidate& c, int pred_pos, const Sentence& sentence, int threshold) {
  if (!sentence.parse) {
    out.push_back("fs5:parse_absent");
    return;
  }
  const ParseNode& root = *sentence.parse;
  const auto mapped = syntax::map_constituent(root, c.span());
  const ParseNode* pred_node = preterminal_parent(root, pred_pos, nullptr);
  if (!mapped.node || !pred_node) {
    out.push_back("fs5:unmapped");
    return;
  }
  out.push_back(std::string("fs5:match=") + (mapped.exact ? "exact" : "approx"));
  out.push_back("fs5:const=" + mapped.node->label);

  if (auto path = syntax::tree_path(root, mapped.node, pred_node)) {
    out.push_back("fs5:path=" + path->text());
    out.push_back("fs5:pathlen=" + bucket(static_cast<long>(path->length())));
    auto count = [](const std::vector<std::string>& labels, bool (*pred)(const std::string&)) {
      return static_cast<long>(std::count_if(labels.begin(), labels.end(), pred));
    };
    auto is_vp = [](const std::string& l) { return l == "VP"; };
    const long s_up = count(path->up, is_clause), s_down = count(path->down, is_clause);
    const long v_up = count(path->up, is_vp), v_down = count(path->down, is_vp);
    const long s_anc = is_clause(path->ancestor) ? 1 : 0, v_anc = path->ancestor == "VP" ? 1 : 0;
    out.push_back("fs5:clauses=" + bucket(s_up + s_down + s_anc));
    out.push_back("fs5:clauses_up=" + bucket(s_up));
    out.push_back("fs5:clauses_down=" + bucket(s_down));
    out.push_back("fs5:vps=" + bucket(v_up + v_down + v_anc));
    out.push_back("fs5:vps_up=" + bucket(v_up));
    out.push_back("fs5:vps_down=" + bucket(v_down));
    for (const auto& g : syntax::generalized_paths(*path, threshold)) out.push_back("fs5:gpath" + g.substr(0, 1) + "=" + g.substr(2));
  }

  out.push_back("fs5:subsumption=" + bucket(depth_of(root, mapped.node, 0) - depth_of(root, pred_node, 0)));

  if (mapped.node->label == "NP") {
    std::string gov = "none";
    for (const ParseNode* p = parent_of(root, mapped.node); p; p = parent_of(root, p)) {
      if (is_clause(p->label) || p->label == "VP") {
        gov = is_clause(p->label) ? "S" : "VP";
        break;
      }
    }
    out.push_back("fs5:gov=" + gov);
  }

  const Span span = mapped.node->span;
  int from = 0, to = -1;
  if (span.end < pred_pos) {
    from = span.end + 1;
    to = pred_pos - 1;
  } else if (span.start > pred_pos) {
    from = pred_pos + 1;
    to = span.start - 1;
  }
  long verbs = 0, commas = 0, ccs = 0;
  for (int t = from; t <= to; ++t) {
    const std::string& pos = sentence.tokens[static_cast<std::size_t>(t)].pos;
    if (pos.rfind("VB", 0) == 0) ++verbs;
    if (pos == "," || sentence.tokens[static_cast<std::size_t>(t)].form == ",") ++commas;
    if (pos == "CC") ++ccs;
  }
  out.push_back("fs5:dist_tokens=" + bucket(std::max(0, to - from + 1)));
  out.push_back("fs5:dist_verbs=" + bucket(verbs));
  out.push_back("fs5:dist_commas=" + bucket(commas));
  out.push_back("fs5:dist_cc=" + bucket(ccs));
  out.push_back(std::string("fs5:dist_adjacent=") + (!span.contains(pred_pos) && to < from ? "1" : "0"));
}

void fs6(std::vector<std::string>& out, const Candidate& c, std::span<const std::string> systems,
         const IntervalTable& intervals) {
  for (std::size_t j = 0; j < systems.size(); ++j) {
    const auto interval = intervals.discretize(c.probs[j], systems[j], c.label().text());
    out.push_back("fs6:" + systems[j] + "=" + (interval ? std::to_string(*interval) : "none"));
  }
}

}  // namespace

std::vector<std::string> feature_strings(const SentencePool& sp, std::size_t index,
                                         std::span<const std::string> systems, const Sentence* sentence,
                                         const IntervalTable& intervals, const FeatureConfig& cfg) {
  const Candidate& c = sp.candidates.at(index);
  const int pred_pos = sp.predicates.at(static_cast<std::size_t>(c.predicate())).position;
  std::vector<std::string> out;
  if (cfg.enabled(1)) fs1(out, sp, c, systems);
  if (cfg.enabled(2)) overlap_group(out, "fs2", sp, index, true, systems);
  if (cfg.enabled(3)) overlap_group(out, "fs3", sp, index, false, systems);
  if (cfg.enabled(4)) {
    if (sentence)
      fs4(out, c, pred_pos, *sentence, cfg.ngram_cap);
    else
      out.push_back("fs4:syntax_absent");
  }
  if (cfg.enabled(5)) {
    if (sentence)
      fs5(out, c, pred_pos, *sentence, cfg.path_threshold);
    else
      out.push_back("fs5:parse_absent");
  }
  if (cfg.enabled(6)) fs6(out, c, systems, intervals);
  return out;
}

void extract_pool(CandidatePool& pool, std::span<const Sentence> sentences, const IntervalTable& intervals,
                  const FeatureConfig& cfg, Vocabulary& vocab, int jobs) {
  cfg.validate();
  if (!sentences.empty() && sentences.size() != pool.sentences.size())
    throw AlignmentError("syntax has " + std::to_string(sentences.size()) + " sentences, pool has " +
                             std::to_string(pool.sentences.size()),
                         static_cast<int>(std::min(sentences.size(), pool.sentences.size())));
  for (std::size_t s = 0; s < sentences.size(); ++s)
    if (sentences[s].size() != pool.sentences[s].n_tokens)
      throw AlignmentError("syntax token count differs from props", static_cast<int>(s));

  std::vector<std::vector<std::vector<std::string>>> strings(pool.sentences.size());
  auto work = [&](std::size_t s) {
    const auto& sp = pool.sentences[s];
    const Sentence* sentence = sentences.empty() ? nullptr : &sentences[s];
    strings[s].resize(sp.candidates.size());
    for (std::size_t i = 0; i < sp.candidates.size(); ++i)
      strings[s][i] = feature_strings(sp, i, pool.systems, sentence, intervals, cfg);
  };
  const std::size_t n_jobs = static_cast<std::size_t>(std::max(1, jobs));
  if (n_jobs == 1) {
    for (std::size_t s = 0; s < pool.sentences.size(); ++s) work(s);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n_jobs; ++t)
      threads.emplace_back([&, t] {
        for (std::size_t s = t; s < pool.sentences.size(); s += n_jobs) work(s);
      });
    for (auto& th : threads) th.join();
  }

  for (std::size_t s = 0; s < pool.sentences.size(); ++s) {
    for (std::size_t i = 0; i < pool.sentences[s].candidates.size(); ++i) {
      std::vector<std::uint32_t> ids;
      for (const auto& f : strings[s][i])
        if (auto id = vocab.intern(f)) ids.push_back(*id);
      pool.sentences[s].candidates[i].features = FeatureVector::from_unsorted(std::move(ids));
    }
  }
}

IntervalTable build_intervals(const CandidatePool& pool) {
  std::vector<IntervalTable::Observation> observations;
  for (const auto& sp : pool.sentences)
    for (const auto& c : sp.candidates)
      for (std::size_t j = 0; j < c.probs.size(); ++j)
        if (c.probs[j]) observations.push_back({pool.systems[j], c.label().text(), *c.probs[j]});
  return IntervalTable::build(observations);
}

}  // namespace srlcomb

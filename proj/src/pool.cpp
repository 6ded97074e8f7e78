#include "srlcomb/pool.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "srlcomb/errors.hpp"

namespace srlcomb {

namespace {

using ArgKey = std::tuple<int, int, int, std::string>;  // predicate, start, end, label

bool pool_order(const Candidate& a, const Candidate& b) {
  if (a.predicate() != b.predicate()) return a.predicate() < b.predicate();
  return canonical_less(a.argument, b.argument);
}

void check_skeleton(const PropsDocument& reference, const PropsDocument& other, const std::string& what) {
  if (reference.sentences.size() != other.sentences.size())
    throw AlignmentError(what + " has " + std::to_string(other.sentences.size()) + " sentences, expected " +
                             std::to_string(reference.sentences.size()),
                         static_cast<int>(std::min(reference.sentences.size(), other.sentences.size())));
  for (std::size_t s = 0; s < reference.sentences.size(); ++s) {
    const auto& a = reference.sentences[s];
    const auto& b = other.sentences[s];
    if (a.n_tokens != b.n_tokens)
      throw AlignmentError(what + " has " + std::to_string(b.n_tokens) + " tokens, expected " +
                               std::to_string(a.n_tokens),
                           static_cast<int>(s));
    if (a.propositions.size() != b.propositions.size())
      throw AlignmentError(what + " has a different number of predicates", static_cast<int>(s));
    for (std::size_t p = 0; p < a.propositions.size(); ++p)
      if (a.propositions[p].predicate.position != b.propositions[p].predicate.position)
        throw AlignmentError(what + " has a predicate at token " +
                                 std::to_string(b.propositions[p].predicate.position) + ", expected " +
                                 std::to_string(a.propositions[p].predicate.position),
                             static_cast<int>(s));
  }
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

CandidatePool build_pool(std::span<const SystemOutput> systems, const CalibrationConfig& calibration) {
  if (systems.empty()) throw std::invalid_argument("build_pool needs at least one system");
  const auto& reference = systems.front().props;
  for (const auto& sys : systems) check_skeleton(reference, sys.props, "system " + sys.name);

  CandidatePool pool;
  std::set<std::string> seen;
  for (const auto& sys : systems) {
    if (!seen.insert(sys.name).second) throw std::invalid_argument("duplicate system id " + sys.name);
    pool.systems.push_back(sys.name);
  }
  const std::size_t m = systems.size();

  for (std::size_t s = 0; s < reference.sentences.size(); ++s) {
    SentencePool sp;
    sp.sentence = static_cast<int>(s);
    sp.n_tokens = reference.sentences[s].n_tokens;
    for (const auto& prop : reference.sentences[s].propositions) sp.predicates.push_back(prop.predicate);

    std::map<ArgKey, Candidate> merged;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& props = systems[j].props.sentences[s].propositions;
      for (std::size_t p = 0; p < props.size(); ++p) {
        for (const auto& arg : props[p].arguments) {
          if (arg.label.is_verb()) continue;
          ArgKey key{static_cast<int>(p), arg.span.start, arg.span.end, arg.label.text()};
          auto [it, fresh] = merged.try_emplace(key);
          Candidate& c = it->second;
          if (fresh) {
            c.sentence = sp.sentence;
            c.argument = arg;
            c.argument.predicate = static_cast<int>(p);
            c.raw_scores.assign(m, std::nullopt);
            c.probs.assign(m, std::nullopt);
          }
          if (!c.votes.empty() && c.votes.back() == static_cast<int>(j)) continue;  // repeated within one frame
          c.votes.push_back(static_cast<int>(j));
          if (systems[j].scores) {
            auto found = systems[j].scores->find(
                ScoreKey{sp.sentence, static_cast<int>(p), arg.label.text(), arg.span});
            if (found != systems[j].scores->end()) {
              c.raw_scores[j] = found->second;
              c.probs[j] = argument_probability(found->second, calibration);
            }
          }
        }
      }
    }
    for (auto& [key, cand] : merged) sp.candidates.push_back(std::move(cand));
    std::sort(sp.candidates.begin(), sp.candidates.end(), pool_order);
    pool.sentences.push_back(std::move(sp));
  }
  return pool;
}

namespace {

void check_pool_skeleton(const CandidatePool& pool, const PropsDocument& gold) {
  if (pool.sentences.size() != gold.sentences.size())
    throw AlignmentError("gold has " + std::to_string(gold.sentences.size()) + " sentences, pool has " +
                             std::to_string(pool.sentences.size()),
                         static_cast<int>(std::min(pool.sentences.size(), gold.sentences.size())));
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const auto& g = gold.sentences[s];
    const auto& p = pool.sentences[s];
    if (g.n_tokens != p.n_tokens) throw AlignmentError("gold token count differs from pool", static_cast<int>(s));
    if (g.propositions.size() != p.predicates.size())
      throw AlignmentError("gold predicate count differs from pool", static_cast<int>(s));
    for (std::size_t k = 0; k < p.predicates.size(); ++k)
      if (g.propositions[k].predicate.position != p.predicates[k].position)
        throw AlignmentError("gold predicate position differs from pool", static_cast<int>(s));
  }
}

std::set<ArgKey> gold_keys(const PropsSentence& sentence) {
  std::set<ArgKey> keys;
  for (std::size_t p = 0; p < sentence.propositions.size(); ++p)
    for (const auto& arg : sentence.propositions[p].arguments)
      if (!arg.label.is_verb()) keys.insert({static_cast<int>(p), arg.span.start, arg.span.end, arg.label.text()});
  return keys;
}

}  // namespace

CandidatePool align_gold(CandidatePool pool, const PropsDocument& gold) {
  check_pool_skeleton(pool, gold);
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const auto keys = gold_keys(gold.sentences[s]);
    for (auto& c : pool.sentences[s].candidates)
      c.is_gold = keys.count({c.predicate(), c.span().start, c.span().end, c.label().text()}) > 0;
  }
  return pool;
}

std::vector<int> unreachable_gold(const CandidatePool& pool, const PropsDocument& gold) {
  check_pool_skeleton(pool, gold);
  std::vector<int> out;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    auto keys = gold_keys(gold.sentences[s]);
    for (const auto& c : pool.sentences[s].candidates)
      keys.erase({c.predicate(), c.span().start, c.span().end, c.label().text()});
    out.push_back(static_cast<int>(keys.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------

AgreementTable pool_stats(const CandidatePool& pool) {
  const int m = pool.system_count();
  AgreementTable table;
  for (int k = m; k >= 2; --k) table.columns.push_back("∩ of " + std::to_string(k));
  for (const auto& name : pool.systems) table.columns.push_back(name);

  std::map<std::string, std::vector<std::size_t>> counts;
  for (const auto& sp : pool.sentences) {
    for (const auto& c : sp.candidates) {
      if (!c.is_gold) throw std::invalid_argument("pool_stats needs gold-aligned candidates");
      if (!*c.is_gold) continue;
      auto& row = counts[c.label().text()];
      row.resize(table.columns.size(), 0);
      const int v = c.vote_count();
      if (v >= 2)
        ++row[static_cast<std::size_t>(m - v)];
      else
        ++row[static_cast<std::size_t>(m - 1 + c.votes.front())];
    }
  }
  for (const auto& [label, row] : counts) {
    AgreementTable::Row out;
    out.label = label;
    for (auto n : row) out.correct += n;
    for (auto n : row) out.percent.push_back(100.0 * static_cast<double>(n) / static_cast<double>(out.correct));
    table.rows.push_back(std::move(out));
  }
  return table;
}

std::string AgreementTable::format() const {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"label", "correct"};
  header.insert(header.end(), columns.begin(), columns.end());
  cells.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> line{row.label, std::to_string(row.correct)};
    for (double p : row.percent) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f%%", p);
      line.emplace_back(buf);
    }
    cells.push_back(std::move(line));
  }
  // "∩" is three bytes but one column wide
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) w += (c & 0xC0) != 0x80;
    return w;
  };
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], width(line[i]));
  std::string out;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const std::string pad(widths[i] - width(line[i]), ' ');
      if (i == 0)
        out += line[i] + pad;
      else
        out += "  " + pad + line[i];
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

PropsDocument skeleton_document(const CandidatePool& pool) {
  PropsDocument doc;
  for (const auto& sp : pool.sentences) {
    PropsSentence sentence;
    sentence.n_tokens = sp.n_tokens;
    for (std::size_t p = 0; p < sp.predicates.size(); ++p) {
      Proposition prop;
      prop.predicate = sp.predicates[p];
      Argument verb;
      verb.predicate = static_cast<int>(p);
      verb.span = {sp.predicates[p].position, sp.predicates[p].position};
      prop.arguments.push_back(verb);
      sentence.propositions.push_back(std::move(prop));
    }
    doc.sentences.push_back(std::move(sentence));
  }
  return doc;
}

void sort_arguments(PropsDocument& doc) {
  for (auto& s : doc.sentences)
    for (auto& p : s.propositions) std::sort(p.arguments.begin(), p.arguments.end(), canonical_less);
}

}  // namespace

Sentence skeleton_sentence(const SentencePool& sp) {
  Sentence sentence;
  sentence.id = sp.sentence;
  sentence.predicates = sp.predicates;
  for (int t = 0; t < sp.n_tokens; ++t) {
    Token tok;
    tok.index = t;
    tok.form = "_";
    tok.pos = "_";
    sentence.tokens.push_back(std::move(tok));
  }
  return sentence;
}

std::vector<SystemOutput> system_views(const CandidatePool& pool) {
  std::vector<SystemOutput> views;
  const PropsDocument skeleton = skeleton_document(pool);
  for (const auto& name : pool.systems) views.push_back({name, skeleton, ScoreTable{}});
  for (const auto& sp : pool.sentences) {
    for (const auto& c : sp.candidates) {
      for (int j : c.votes) {
        auto& view = views[static_cast<std::size_t>(j)];
        view.props.sentences[static_cast<std::size_t>(sp.sentence)]
            .propositions[static_cast<std::size_t>(c.predicate())]
            .arguments.push_back(c.argument);
        if (c.raw_scores[static_cast<std::size_t>(j)])
          (*view.scores)[ScoreKey{sp.sentence, c.predicate(), c.label().text(), c.span()}] =
              *c.raw_scores[static_cast<std::size_t>(j)];
      }
    }
  }
  for (auto& view : views) sort_arguments(view.props);
  return views;
}

PropsDocument solutions_to_props(const CandidatePool& pool, std::span<const Solution> solutions) {
  if (solutions.size() != pool.sentences.size())
    throw std::invalid_argument("one solution per pooled sentence expected");
  PropsDocument doc = skeleton_document(pool);
  for (std::size_t s = 0; s < solutions.size(); ++s) {
    const auto& candidates = pool.sentences[s].candidates;
    for (std::size_t index : solutions[s].selected) {
      if (index >= candidates.size()) throw StructuralError("solution selects a candidate outside its sentence");
      const auto& c = candidates[index];
      doc.sentences[s].propositions[static_cast<std::size_t>(c.predicate())].arguments.push_back(c.argument);
    }
  }
  sort_arguments(doc);
  return doc;
}

// ---------------------------------------------------------------------------
// Dump format
//
//   SRLCOMB-POOL v1
//   systems M1 M2 M3
//   sentence <id> <n_tokens> <pos>:<lemma> ...
//   cand <pred> <label> <start> <end> <votes> <raw,...> <prob,...> <gold>
//
// Absent values are written as "-"; gold is 1, 0 or "-".

namespace {

std::string optional_list(const std::vector<std::optional<double>>& values) {
  std::vector<std::string> parts;
  for (const auto& v : values) parts.push_back(v ? format_double(*v) : "-");
  return join(parts, ',');
}

double parse_number(const std::string& text, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("bad number '" + text + "'", line);
  return value;
}

int parse_int(const std::string& text, int line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("bad integer '" + text + "'", line);
  return value;
}

std::vector<std::optional<double>> parse_optional_list(const std::string& text, std::size_t m, int line) {
  auto parts = split(text, ',');
  if (parts.size() != m) throw ParseError("expected " + std::to_string(m) + " per-system values", line);
  std::vector<std::optional<double>> out;
  for (const auto& part : parts) {
    if (part == "-")
      out.push_back(std::nullopt);
    else
      out.push_back(parse_number(part, line));
  }
  return out;
}

}  // namespace

std::string emit_pool(const CandidatePool& pool) {
  std::string out = "SRLCOMB-POOL v1\nsystems";
  for (const auto& name : pool.systems) out += ' ' + name;
  out += '\n';
  for (const auto& sp : pool.sentences) {
    out += "sentence " + std::to_string(sp.sentence) + ' ' + std::to_string(sp.n_tokens);
    for (const auto& p : sp.predicates) out += ' ' + std::to_string(p.position) + ':' + p.lemma;
    out += '\n';
    for (const auto& c : sp.candidates) {
      std::vector<std::string> votes;
      for (int j : c.votes) votes.push_back(std::to_string(j));
      out += "cand " + std::to_string(c.predicate()) + ' ' + c.label().text() + ' ' + std::to_string(c.span().start) +
             ' ' + std::to_string(c.span().end) + ' ' + join(votes, ',') + ' ' + optional_list(c.raw_scores) + ' ' +
             optional_list(c.probs) + ' ' + (c.is_gold ? (*c.is_gold ? "1" : "0") : "-") + '\n';
    }
  }
  return out;
}

CandidatePool parse_pool(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next_line() || line != "SRLCOMB-POOL v1") throw ParseError("missing SRLCOMB-POOL v1 header", number);
  CandidatePool pool;
  if (!next_line()) throw ParseError("missing systems line", number);
  {
    std::istringstream fields(line);
    std::string tag, name;
    fields >> tag;
    if (tag != "systems") throw ParseError("expected systems line", number);
    while (fields >> name) pool.systems.push_back(name);
    if (pool.systems.empty()) throw ParseError("no systems listed", number);
  }
  const std::size_t m = pool.systems.size();
  while (next_line()) {
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string w; fields >> w;) f.push_back(w);
    if (f[0] == "sentence") {
      if (f.size() < 3) throw ParseError("malformed sentence line", number);
      SentencePool sp;
      sp.sentence = parse_int(f[1], number);
      sp.n_tokens = parse_int(f[2], number);
      if (sp.sentence != static_cast<int>(pool.sentences.size())) throw ParseError("sentence ids must be consecutive", number);
      for (std::size_t i = 3; i < f.size(); ++i) {
        auto colon = f[i].find(':');
        if (colon == std::string::npos) throw ParseError("predicate must be position:lemma", number);
        sp.predicates.push_back({parse_int(f[i].substr(0, colon), number), f[i].substr(colon + 1)});
      }
      pool.sentences.push_back(std::move(sp));
    } else if (f[0] == "cand") {
      if (pool.sentences.empty()) throw ParseError("candidate before any sentence", number);
      if (f.size() != 9) throw ParseError("candidate line needs 9 fields", number);
      auto& sp = pool.sentences.back();
      Candidate c;
      c.sentence = sp.sentence;
      c.argument.predicate = parse_int(f[1], number);
      if (c.argument.predicate < 0 || c.argument.predicate >= static_cast<int>(sp.predicates.size()))
        throw ParseError("candidate predicate out of range", number);
      auto label = RoleLabel::try_parse(f[2]);
      if (!label) throw ParseError("bad label '" + f[2] + "'", number);
      c.argument.label = *label;
      c.argument.span = {parse_int(f[3], number), parse_int(f[4], number)};
      if (!c.argument.span.valid() || c.argument.span.end >= sp.n_tokens)
        throw ParseError("candidate span out of range", number);
      for (const auto& v : split(f[5], ',')) {
        const int j = parse_int(v, number);
        if (j < 0 || j >= static_cast<int>(m)) throw ParseError("vote for unknown system", number);
        c.votes.push_back(j);
      }
      c.raw_scores = parse_optional_list(f[6], m, number);
      c.probs = parse_optional_list(f[7], m, number);
      if (f[8] == "1")
        c.is_gold = true;
      else if (f[8] == "0")
        c.is_gold = false;
      else if (f[8] != "-")
        throw ParseError("gold flag must be 1, 0 or -", number);
      sp.candidates.push_back(std::move(c));
    } else {
      throw ParseError("unknown record '" + f[0] + "'", number);
    }
  }
  return pool;
}

}  // namespace srlcomb

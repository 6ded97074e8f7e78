#include "srlcomb/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "srlcomb/errors.hpp"
#include "srlcomb/rng.hpp"

namespace srlcomb {

std::vector<Argument> repair_continuations(std::vector<Argument> arguments) {
  std::stable_sort(arguments.begin(), arguments.end(), canonical_less);
  std::set<std::string> seen;
  for (auto& arg : arguments) {
    if (arg.label.kind() == RoleLabel::Kind::Continuation && !seen.count(arg.label.base().text()))
      arg.label = arg.label.base();
    seen.insert(arg.label.text());
  }
  std::stable_sort(arguments.begin(), arguments.end(), canonical_less);
  return arguments;
}

double Prf::precision() const {
  return predicted == 0 ? 100.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(predicted);
}

double Prf::recall() const {
  return gold == 0 ? 100.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(gold);
}

double Prf::f1() const {
  const double p = precision(), r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

Prf& Prf::operator+=(const Prf& other) {
  correct += other.correct;
  predicted += other.predicted;
  gold += other.gold;
  return *this;
}

namespace {

void check_skeleton(const PropsDocument& predicted, const PropsDocument& gold) {
  if (predicted.sentences.size() != gold.sentences.size())
    throw AlignmentError("prediction has " + std::to_string(predicted.sentences.size()) + " sentences, gold has " +
                             std::to_string(gold.sentences.size()),
                         static_cast<int>(std::min(predicted.sentences.size(), gold.sentences.size())));
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const auto& p = predicted.sentences[s];
    const auto& g = gold.sentences[s];
    if (p.n_tokens != g.n_tokens || p.propositions.size() != g.propositions.size())
      throw AlignmentError("prediction and gold disagree on tokens or predicates", static_cast<int>(s));
    for (std::size_t k = 0; k < g.propositions.size(); ++k)
      if (p.propositions[k].predicate.position != g.propositions[k].predicate.position)
        throw AlignmentError("prediction and gold disagree on predicate positions", static_cast<int>(s));
  }
}

using Key = std::tuple<int, int, std::string>;  // start, end, label

std::vector<Key> scored_keys(const Proposition& prop) {
  std::vector<Argument> args;
  for (const auto& a : prop.arguments)
    if (!a.label.is_verb()) args.push_back(a);
  std::vector<Key> keys;
  for (const auto& a : repair_continuations(std::move(args))) keys.emplace_back(a.span.start, a.span.end, a.label.text());
  std::sort(keys.begin(), keys.end());
  return keys;
}

long intersection_size(const std::vector<Key>& a, const std::vector<Key>& b) {
  long n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

Prf frame_counts(const std::vector<Key>& pred, const std::vector<Key>& gold) {
  return {intersection_size(pred, gold), static_cast<long>(pred.size()), static_cast<long>(gold.size())};
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace

ScoreReport score(const PropsDocument& predicted, const PropsDocument& gold) {
  check_skeleton(predicted, gold);
  ScoreReport report;
  std::map<std::string, Prf> labels;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    for (std::size_t k = 0; k < gold.sentences[s].propositions.size(); ++k) {
      const auto p = scored_keys(predicted.sentences[s].propositions[k]);
      const auto g = scored_keys(gold.sentences[s].propositions[k]);
      report.totals += frame_counts(p, g);
      ++report.propositions;
      if (p == g) ++report.exact_propositions;

      std::map<std::string, std::vector<Key>> p_by, g_by;
      for (const auto& key : p) p_by[std::get<2>(key)].push_back(key);
      for (const auto& key : g) g_by[std::get<2>(key)].push_back(key);
      for (const auto& [label, keys] : p_by) labels[label].predicted += static_cast<long>(keys.size());
      for (const auto& [label, keys] : g_by) {
        labels[label].gold += static_cast<long>(keys.size());
        if (auto it = p_by.find(label); it != p_by.end()) labels[label].correct += intersection_size(it->second, keys);
      }
      for (const auto& gk : g)
        for (const auto& pk : p)
          if (std::get<0>(gk) == std::get<0>(pk) && std::get<1>(gk) == std::get<1>(pk))
            ++report.confusion[{std::get<2>(gk), std::get<2>(pk)}];
    }
  }
  report.precision = report.totals.precision();
  report.recall = report.totals.recall();
  report.f1 = report.totals.f1();
  report.pprops = report.propositions == 0
                      ? 100.0
                      : 100.0 * static_cast<double>(report.exact_propositions) / static_cast<double>(report.propositions);
  for (const auto& [label, counts] : labels) report.per_label.push_back({label, counts});
  return report;
}

std::vector<Prf> sentence_counts(const PropsDocument& predicted, const PropsDocument& gold) {
  check_skeleton(predicted, gold);
  std::vector<Prf> out(gold.sentences.size());
  for (std::size_t s = 0; s < gold.sentences.size(); ++s)
    for (std::size_t k = 0; k < gold.sentences[s].propositions.size(); ++k)
      out[s] += frame_counts(scored_keys(predicted.sentences[s].propositions[k]),
                             scored_keys(gold.sentences[s].propositions[k]));
  return out;
}

std::string ScoreReport::table() const {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"", "corr", "pred", "gold", "prec", "rec", "F1"});
  auto add = [&](const std::string& name, const Prf& c) {
    rows.push_back({name, std::to_string(c.correct), std::to_string(c.predicted), std::to_string(c.gold),
                    fixed(c.precision(), 2), fixed(c.recall(), 2), fixed(c.f1(), 2)});
  };
  add("Overall", totals);
  for (const auto& l : per_label) add(l.label, l.counts);
  std::vector<std::size_t> widths(7, 0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
  std::string out;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    for (std::size_t i = 0; i < rows[n].size(); ++i) {
      const std::string pad(widths[i] - rows[n][i].size(), ' ');
      out += i == 0 ? rows[n][i] + pad : "  " + pad + rows[n][i];
    }
    out += '\n';
    if (n == 1) out += '\n';
  }
  out += "PProps: " + fixed(pprops, 2) + "% (" + std::to_string(exact_propositions) + "/" +
         std::to_string(propositions) + ")\n";
  return out;
}

std::string ScoreReport::csv() const {
  std::string out = "label,correct,predicted,gold,precision,recall,f1\n";
  auto add = [&](const std::string& name, const Prf& c) {
    out += name + "," + std::to_string(c.correct) + "," + std::to_string(c.predicted) + "," + std::to_string(c.gold) +
           "," + fixed(c.precision(), 4) + "," + fixed(c.recall(), 4) + "," + fixed(c.f1(), 4) + "\n";
  };
  add("overall", totals);
  for (const auto& l : per_label) add(l.label, l.counts);
  return out;
}

// ---------------------------------------------------------------------------

std::string BootstrapResult::format() const { return fixed(f1, 2) + " ±" + fixed(half_width, 1); }

BootstrapResult bootstrap(const PropsDocument& predicted, const PropsDocument& gold, int samples, double level,
                          std::uint64_t seed, int jobs) {
  if (samples < 100) throw std::invalid_argument("bootstrap needs at least 100 resamples");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap level must be in (0,1)");
  const auto counts = sentence_counts(predicted, gold);
  Prf total;
  for (const auto& c : counts) total += c;

  BootstrapResult result;
  result.f1 = total.f1();
  result.samples = samples;
  result.level = level;
  if (counts.empty()) {
    result.lower = result.upper = result.f1;
    return result;
  }

  std::vector<double> f1s(static_cast<std::size_t>(samples));
  auto resample = [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    Prf sum;
    for (std::size_t i = 0; i < counts.size(); ++i) sum += counts[rng.index(counts.size())];
    f1s[b] = sum.f1();
  };
  const std::size_t n_jobs = static_cast<std::size_t>(std::max(1, jobs));
  if (n_jobs == 1) {
    for (std::size_t b = 0; b < f1s.size(); ++b) resample(b);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n_jobs; ++t)
      threads.emplace_back([&, t] {
        for (std::size_t b = t; b < f1s.size(); b += n_jobs) resample(b);
      });
    for (auto& th : threads) th.join();
  }
  std::sort(f1s.begin(), f1s.end());
  const double tail = (1.0 - level) / 2.0;
  const auto n = static_cast<double>(samples);
  auto lo_index = static_cast<std::size_t>(std::floor(tail * n));
  auto hi_index = static_cast<std::size_t>(std::ceil((1.0 - tail) * n)) - 1;
  lo_index = std::min(lo_index, f1s.size() - 1);
  hi_index = std::min(hi_index, f1s.size() - 1);
  result.lower = f1s[lo_index];
  result.upper = f1s[hi_index];
  result.half_width = std::max({0.0, result.f1 - result.lower, result.upper - result.f1});
  return result;
}

// ---------------------------------------------------------------------------

std::vector<Solution> oracle_combination(const CandidatePool& pool) {
  std::vector<Solution> out;
  for (const auto& sp : pool.sentences) {
    Solution sol;
    sol.sentence = sp.sentence;
    for (std::size_t i = 0; i < sp.candidates.size(); ++i) {
      const auto& flag = sp.candidates[i].is_gold;
      if (!flag) throw std::invalid_argument("oracle needs gold-aligned candidates");
      if (*flag) sol.selected.push_back(i);
    }
    sol.objective = static_cast<double>(sol.selected.size());
    out.push_back(std::move(sol));
  }
  return out;
}

RerankResult oracle_rerank(std::span<const PropsDocument> systems, const PropsDocument& gold) {
  if (systems.empty()) throw std::invalid_argument("re-ranking oracle needs at least one system");
  for (const auto& sys : systems) check_skeleton(sys, gold);
  RerankResult result;
  result.props = gold;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    std::vector<int> chosen;
    for (std::size_t k = 0; k < gold.sentences[s].propositions.size(); ++k) {
      const auto g = scored_keys(gold.sentences[s].propositions[k]);
      int best = 0;
      double best_f1 = -1.0;
      for (std::size_t j = 0; j < systems.size(); ++j) {
        const double f1 = frame_counts(scored_keys(systems[j].sentences[s].propositions[k]), g).f1();
        if (f1 > best_f1) {
          best_f1 = f1;
          best = static_cast<int>(j);
        }
      }
      chosen.push_back(best);
      result.props.sentences[s].propositions[k] =
          systems[static_cast<std::size_t>(best)].sentences[s].propositions[k];
    }
    result.chosen.push_back(std::move(chosen));
  }
  return result;
}

// ---------------------------------------------------------------------------

ConstraintSet baseline_constraints() { return ConstraintSet::hard({1, 2, 5}); }

namespace {

std::vector<Solution> greedy(const CandidatePool& pool, std::span<const int> priority, bool unanimous_only) {
  const int m = pool.system_count();
  std::vector<int> rank(static_cast<std::size_t>(m));
  if (priority.empty()) {
    std::iota(rank.begin(), rank.end(), 0);
  } else {
    if (static_cast<int>(priority.size()) != m) throw std::invalid_argument("priority must list every system once");
    std::fill(rank.begin(), rank.end(), -1);
    for (std::size_t r = 0; r < priority.size(); ++r) {
      const int j = priority[r];
      if (j < 0 || j >= m || rank[static_cast<std::size_t>(j)] >= 0)
        throw std::invalid_argument("priority must list every system once");
      rank[static_cast<std::size_t>(j)] = static_cast<int>(r);
    }
  }
  const ConstraintSet cs = baseline_constraints();
  std::vector<Solution> out;
  for (const auto& sp : pool.sentences) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < sp.candidates.size(); ++i)
      if (!unanimous_only || sp.candidates[i].vote_count() == m) order.push_back(i);
    auto best_rank = [&](const Candidate& c) {
      int r = m;
      for (int j : c.votes) r = std::min(r, rank[static_cast<std::size_t>(j)]);
      return r;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const auto& a = sp.candidates[x];
      const auto& b = sp.candidates[y];
      if (a.vote_count() != b.vote_count()) return a.vote_count() > b.vote_count();
      if (a.span().length() != b.span().length()) return a.span().length() > b.span().length();
      return best_rank(a) < best_rank(b);
    });
    Solution sol;
    sol.sentence = sp.sentence;
    for (std::size_t i : order) {
      const auto& arg = sp.candidates[i].argument;
      bool ok = true;
      for (std::size_t k : sol.selected) {
        for (int id : {1, 2, 5})
          if (cs.is_hard(id) && constraints::pair_violates(id, arg, sp.candidates[k].argument)) ok = false;
        if (!ok) break;
      }
      if (ok) sol.selected.push_back(i);
    }
    std::sort(sol.selected.begin(), sol.selected.end());
    sol.objective = static_cast<double>(sol.selected.size());
    out.push_back(std::move(sol));
  }
  return out;
}

}  // namespace

std::vector<Solution> baseline_recall(const CandidatePool& pool, std::span<const int> priority) {
  return greedy(pool, priority, false);
}

std::vector<Solution> baseline_precision(const CandidatePool& pool, std::span<const int> priority) {
  return greedy(pool, priority, true);
}

}  // namespace srlcomb

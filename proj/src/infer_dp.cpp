#include "srlcomb/infer_dp.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace srlcomb {

namespace {

constexpr int kMasks = 64;
constexpr double kNone = -std::numeric_limits<double>::infinity();

void check_inputs(std::span<const Candidate> candidates, std::span<const double> confidences) {
  if (candidates.size() != confidences.size()) throw std::invalid_argument("one confidence per candidate expected");
  for (double c : confidences)
    if (!std::isfinite(c)) throw std::invalid_argument("confidence is not finite");
}

}  // namespace

Solution dp_predicate(std::span<const Candidate> candidates, std::span<const double> confidences,
                      bool no_duplicate_core) {
  check_inputs(candidates, confidences);
  Solution solution;
  if (candidates.empty()) return solution;
  solution.sentence = candidates.front().sentence;
  for (const auto& c : candidates)
    if (c.predicate() != candidates.front().predicate())
      throw std::invalid_argument("dp_predicate needs candidates of one predicate");

  std::vector<std::size_t> items;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (confidences[i] > 0.0) items.push_back(i);
  std::sort(items.begin(), items.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = candidates[x].argument;
    const auto& b = candidates[y].argument;
    if (a.span.end != b.span.end) return a.span.end < b.span.end;
    if (a.span.start != b.span.start) return a.span.start < b.span.start;
    if (a.label != b.label) return a.label < b.label;
    return confidences[x] > confidences[y];
  });
  if (items.empty()) return solution;

  std::vector<int> bounds;
  for (std::size_t i : items) {
    bounds.push_back(candidates[i].span().start);
    bounds.push_back(candidates[i].span().end + 1);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  auto coord = [&](int token) {
    return static_cast<std::size_t>(std::lower_bound(bounds.begin(), bounds.end(), token) - bounds.begin());
  };

  const std::size_t k_max = bounds.size();
  // best[k][mask]: best total over candidates ending before bounds[k]
  std::vector<std::array<double, kMasks>> best(k_max);
  // back[k][mask]: item taken to reach (k, mask), or -1 for "carried over from k-1"
  std::vector<std::array<int, kMasks>> back(k_max);
  for (auto& row : best) row.fill(kNone);
  for (auto& row : back) row.fill(-1);
  best[0][0] = 0.0;

  std::size_t next = 0;
  for (std::size_t k = 1; k < k_max; ++k) {
    best[k] = best[k - 1];
    back[k].fill(-1);
    while (next < items.size() && coord(candidates[items[next]].span().end + 1) == k) {
      const std::size_t i = items[next];
      const auto& label = candidates[i].label();
      const int bit = no_duplicate_core && label.is_core() ? (1 << label.core_index()) : 0;
      const std::size_t from = coord(candidates[i].span().start);
      for (int mask = 0; mask < kMasks; ++mask) {
        if ((mask & bit) != bit) continue;
        const double prev = best[from][static_cast<std::size_t>(mask & ~bit)];
        if (prev == kNone) continue;
        const double value = prev + confidences[i];
        if (value > best[k][static_cast<std::size_t>(mask)] + 1e-12) {
          best[k][static_cast<std::size_t>(mask)] = value;
          back[k][static_cast<std::size_t>(mask)] = static_cast<int>(next);
        }
      }
      ++next;
    }
  }

  int mask = 0;
  for (int m = 1; m < kMasks; ++m)
    if (best[k_max - 1][static_cast<std::size_t>(m)] > best[k_max - 1][static_cast<std::size_t>(mask)] + 1e-12)
      mask = m;
  solution.objective = best[k_max - 1][static_cast<std::size_t>(mask)];
  for (std::size_t k = k_max - 1; k > 0;) {
    const int taken = back[k][static_cast<std::size_t>(mask)];
    if (taken < 0) {
      --k;
      continue;
    }
    const std::size_t i = items[static_cast<std::size_t>(taken)];
    solution.selected.push_back(i);
    const auto& label = candidates[i].label();
    if (no_duplicate_core && label.is_core()) mask &= ~(1 << label.core_index());
    k = coord(candidates[i].span().start);
  }
  std::sort(solution.selected.begin(), solution.selected.end());
  return solution;
}

Solution dp_sentence(std::span<const Candidate> candidates, std::span<const double> confidences,
                     std::uint64_t node_budget, SolveStats* stats) {
  check_inputs(candidates, confidences);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (confidences[i] > 0.0) keep.push_back(i);
  std::vector<Candidate> subset;
  std::vector<double> weights;
  for (std::size_t i : keep) {
    subset.push_back(candidates[i]);
    weights.push_back(confidences[i]);
  }
  auto remap = [&](Solution s) {
    for (auto& idx : s.selected) idx = keep[idx];
    if (!candidates.empty()) s.sentence = candidates.front().sentence;
    return s;
  };
  try {
    return remap(solve_weighted(subset, weights, ConstraintSet::hard({1, 2, 5}), Scope::FullSentence, node_budget,
                                stats));
  } catch (const SolveTimeout& timeout) {
    throw SolveTimeout(remap(timeout.best()), timeout.nodes());
  }
}

std::vector<Solution> dp_pool(const CandidatePool& pool, const std::vector<std::vector<double>>& confidences,
                              Scope scope, int jobs, SolveStats* stats, std::uint64_t node_budget) {
  if (confidences.size() != pool.sentences.size()) throw std::invalid_argument("one confidence list per sentence");
  std::vector<Solution> out(pool.sentences.size());
  std::vector<SolveStats> per(pool.sentences.size());
  auto work = [&](std::size_t s) {
    const auto& sp = pool.sentences[s];
    const auto& conf = confidences[s];
    if (conf.size() != sp.candidates.size()) throw std::invalid_argument("one confidence per candidate expected");
    Solution sol;
    sol.sentence = sp.sentence;
    if (scope == Scope::FullSentence) {
      try {
        sol = dp_sentence(sp.candidates, conf, node_budget, &per[s]);
      } catch (const SolveTimeout& timeout) {
        sol = timeout.best();
      }
    } else {
      // pool candidates are grouped by predicate
      std::size_t begin = 0;
      while (begin < sp.candidates.size()) {
        std::size_t end = begin;
        while (end < sp.candidates.size() && sp.candidates[end].predicate() == sp.candidates[begin].predicate()) ++end;
        const auto part = dp_predicate(std::span(sp.candidates).subspan(begin, end - begin),
                                       std::span(conf).subspan(begin, end - begin), true);
        for (std::size_t i : part.selected) sol.selected.push_back(begin + i);
        sol.objective += part.objective;
        begin = end;
      }
    }
    sol.sentence = sp.sentence;
    out[s] = std::move(sol);
  };
  const std::size_t n_jobs = static_cast<std::size_t>(std::max(1, jobs));
  if (n_jobs == 1) {
    for (std::size_t s = 0; s < out.size(); ++s) work(s);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(n_jobs);
    for (std::size_t t = 0; t < n_jobs; ++t)
      threads.emplace_back([&, t] {
        try {
          for (std::size_t s = t; s < out.size(); s += n_jobs) work(s);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : threads) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  if (stats)
    for (const auto& s : per) {
      stats->nodes += s.nodes;
      stats->optimal = stats->optimal && s.optimal;
    }
  return out;
}

}  // namespace srlcomb

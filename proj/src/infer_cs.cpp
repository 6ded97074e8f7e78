#include "srlcomb/infer_cs.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "srlcomb/eval.hpp"

namespace srlcomb {

std::string_view to_string(Scope scope) { return scope == Scope::PredByPred ? "pred" : "sentence"; }

Scope parse_scope(std::string_view text) {
  if (text == "pred") return Scope::PredByPred;
  if (text == "sentence") return Scope::FullSentence;
  throw std::invalid_argument("scope must be 'pred' or 'sentence', got '" + std::string(text) + "'");
}

ConstraintSet default_constraints(Scope scope) {
  return scope == Scope::PredByPred ? ConstraintSet::hard({1, 2}) : ConstraintSet::hard({1, 2, 5, 6});
}

namespace {

void check_scope(const ConstraintSet& cs, Scope scope) {
  if (scope == Scope::PredByPred && (cs.active(5) || cs.active(6)))
    throw std::invalid_argument("constraints 5 and 6 relate different predicates and need sentence scope");
}

}  // namespace

void CsConfig::validate() const {
  if (!std::isfinite(O)) throw std::invalid_argument("O must be finite");
  check_scope(constraints, scope);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kEps = 1e-12;

struct Requirement {
  bool hard = false;
  double penalty = 0.0;
  std::vector<int> supporters;
};

struct Problem {
  std::vector<double> weight;
  std::vector<std::vector<int>> conflicts;                     // hard pairwise
  std::vector<std::vector<std::pair<int, double>>> penalties;  // soft pairwise
  std::vector<std::vector<Requirement>> requirements;
  std::vector<std::vector<std::pair<int, int>>> dependents;  // (var, requirement index) this var supports
};

struct BudgetExceeded {};

class Search {
 public:
  Search(const Problem& problem, std::vector<int> order, std::uint64_t& nodes, std::uint64_t budget)
      : p_(problem), order_(std::move(order)), nodes_(nodes), budget_(budget) {
    const std::size_t n = p_.weight.size();
    assign_.assign(n, -1);
    blocked_.assign(n, 0);
  }

  void run() { dfs(0, 0.0); }

  bool found() const { return best_value_ > -std::numeric_limits<double>::infinity(); }
  double best_value() const { return best_value_; }
  const std::vector<int>& best() const { return best_; }

 private:
  // value of requirement r of var i once every supporter is decided out
  bool unsupported(int i, int r) const {
    for (int s : p_.requirements[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)].supporters)
      if (assign_[static_cast<std::size_t>(s)] != 0) return false;
    return true;
  }

  void dfs(std::size_t k, double value) {
    if (++nodes_ > budget_) throw BudgetExceeded{};
    if (k == order_.size()) {
      if (value > best_value_ + kEps) {
        best_value_ = value;
        best_.clear();
        for (std::size_t i = 0; i < assign_.size(); ++i)
          if (assign_[i] == 1) best_.push_back(static_cast<int>(i));
      }
      return;
    }
    double bound = value;
    for (std::size_t t = k; t < order_.size(); ++t) {
      const auto v = static_cast<std::size_t>(order_[t]);
      if (blocked_[v] == 0 && p_.weight[v] > 0.0) bound += p_.weight[v];
    }
    if (bound <= best_value_ + kEps) return;

    const int v = order_[k];
    if (p_.weight[static_cast<std::size_t>(v)] > 0.0) {
      include(k, v, value);
      exclude(k, v, value);
    } else {
      exclude(k, v, value);
      include(k, v, value);
    }
  }

  void include(std::size_t k, int v, double value) {
    const auto vi = static_cast<std::size_t>(v);
    if (blocked_[vi] > 0) return;
    double delta = p_.weight[vi];
    for (const auto& [u, pen] : p_.penalties[vi])
      if (assign_[static_cast<std::size_t>(u)] == 1) delta -= pen;
    assign_[vi] = 1;
    bool feasible = true;
    for (std::size_t r = 0; r < p_.requirements[vi].size(); ++r) {
      if (!unsupported(v, static_cast<int>(r))) continue;
      if (p_.requirements[vi][r].hard) feasible = false;
      delta -= p_.requirements[vi][r].penalty;
    }
    if (feasible) {
      for (int u : p_.conflicts[vi]) ++blocked_[static_cast<std::size_t>(u)];
      dfs(k + 1, value + delta);
      for (int u : p_.conflicts[vi]) --blocked_[static_cast<std::size_t>(u)];
    }
    assign_[vi] = -1;
  }

  void exclude(std::size_t k, int v, double value) {
    const auto vi = static_cast<std::size_t>(v);
    assign_[vi] = 0;
    double delta = 0.0;
    bool feasible = true;
    for (const auto& [i, r] : p_.dependents[vi]) {
      if (assign_[static_cast<std::size_t>(i)] != 1 || !unsupported(i, r)) continue;
      const auto& req = p_.requirements[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
      if (req.hard) feasible = false;
      delta -= req.penalty;
    }
    if (feasible) dfs(k + 1, value + delta);
    assign_[vi] = -1;
  }

  const Problem& p_;
  std::vector<int> order_;
  std::uint64_t& nodes_;
  std::uint64_t budget_;
  std::vector<int> assign_;
  std::vector<int> blocked_;
  double best_value_ = -std::numeric_limits<double>::infinity();
  std::vector<int> best_;
};

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

}  // namespace

Solution solve_weighted(std::span<const Candidate> candidates, std::span<const double> weights,
                        const ConstraintSet& constraints, Scope scope, std::uint64_t node_budget,
                        SolveStats* stats) {
  if (weights.size() != candidates.size()) throw std::invalid_argument("one weight per candidate expected");
  check_scope(constraints, scope);
  for (double w : weights)
    if (!std::isfinite(w)) throw std::invalid_argument("candidate weight is not finite");

  const int n = static_cast<int>(candidates.size());
  Solution solution;
  solution.sentence = candidates.empty() ? 0 : candidates.front().sentence;
  if (n == 0) {
    if (stats) stats->nodes += 1;
    return solution;
  }

  Problem p;
  p.weight.assign(weights.begin(), weights.end());
  p.conflicts.resize(static_cast<std::size_t>(n));
  p.penalties.resize(static_cast<std::size_t>(n));
  p.requirements.resize(static_cast<std::size_t>(n));
  p.dependents.resize(static_cast<std::size_t>(n));
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find_root(parent, a))] = find_root(parent, b); };

  for (int id = 1; id <= kConstraintCount; ++id) {
    if (!constraints.active(id)) continue;
    const auto& rule = constraints.rule(id);
    const bool hard = rule.mode == ConstraintMode::Hard;
    if (constraints::is_pairwise(id)) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const auto& a = candidates[static_cast<std::size_t>(i)].argument;
          const auto& b = candidates[static_cast<std::size_t>(j)].argument;
          if (!constraints::pair_violates(id, a, b)) continue;
          if (hard) {
            p.conflicts[static_cast<std::size_t>(i)].push_back(j);
            p.conflicts[static_cast<std::size_t>(j)].push_back(i);
          } else {
            p.penalties[static_cast<std::size_t>(i)].push_back({j, rule.penalty});
            p.penalties[static_cast<std::size_t>(j)].push_back({i, rule.penalty});
          }
          unite(i, j);
        }
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const auto& arg = candidates[static_cast<std::size_t>(i)].argument;
        if (!constraints::needs_support(id, arg)) continue;
        Requirement req{hard, hard ? 0.0 : rule.penalty, {}};
        for (int j = 0; j < n; ++j)
          if (j != i && constraints::supports(id, arg, candidates[static_cast<std::size_t>(j)].argument))
            req.supporters.push_back(j);
        const int r = static_cast<int>(p.requirements[static_cast<std::size_t>(i)].size());
        for (int j : req.supporters) {
          p.dependents[static_cast<std::size_t>(j)].push_back({i, r});
          unite(i, j);
        }
        p.requirements[static_cast<std::size_t>(i)].push_back(std::move(req));
      }
    }
  }
  if (scope == Scope::PredByPred) {
    // keep predicates apart even if a caller-supplied relation linked them
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (find_root(parent, i) == find_root(parent, j) &&
            candidates[static_cast<std::size_t>(i)].predicate() != candidates[static_cast<std::size_t>(j)].predicate())
          throw std::logic_error("cross-predicate interaction in predicate scope");
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    const auto& a = candidates[static_cast<std::size_t>(x)];
    const auto& b = candidates[static_cast<std::size_t>(y)];
    const double wa = weights[static_cast<std::size_t>(x)], wb = weights[static_cast<std::size_t>(y)];
    if (wa != wb) return wa > wb;
    if (a.vote_count() != b.vote_count()) return a.vote_count() > b.vote_count();
    if (a.span().start != b.span().start) return a.span().start < b.span().start;
    if (a.label() != b.label()) return a.label() < b.label();
    if (a.predicate() != b.predicate()) return a.predicate() < b.predicate();
    return a.span().end < b.span().end;
  });

  std::vector<std::vector<int>> components;
  std::vector<int> component_of(static_cast<std::size_t>(n), -1);
  for (int v : order) {
    const int root = find_root(parent, v);
    if (component_of[static_cast<std::size_t>(root)] < 0) {
      component_of[static_cast<std::size_t>(root)] = static_cast<int>(components.size());
      components.emplace_back();
    }
    components[static_cast<std::size_t>(component_of[static_cast<std::size_t>(root)])].push_back(v);
  }

  std::uint64_t nodes = 0;
  double objective = 0.0;
  std::vector<std::size_t> selected;
  for (const auto& component : components) {
    Search search(p, component, nodes, node_budget);
    try {
      search.run();
    } catch (const BudgetExceeded&) {
      if (search.found()) {
        for (int v : search.best()) selected.push_back(static_cast<std::size_t>(v));
        objective += search.best_value();
      }
      std::sort(selected.begin(), selected.end());
      solution.selected = std::move(selected);
      solution.objective = objective;
      if (stats) {
        stats->nodes += nodes;
        stats->optimal = false;
      }
      throw SolveTimeout(solution, nodes);
    }
    for (int v : search.best()) selected.push_back(static_cast<std::size_t>(v));
    objective += search.best_value();
  }
  std::sort(selected.begin(), selected.end());
  solution.selected = std::move(selected);
  solution.objective = objective;
  if (stats) stats->nodes += nodes;
  return solution;
}

Solution solve(std::span<const Candidate> candidates, const CsConfig& cfg, SolveStats* stats) {
  cfg.validate();
  std::vector<double> weights;
  weights.reserve(candidates.size());
  for (const auto& c : candidates) weights.push_back(c.prob_sum() - cfg.O);
  const double offset = cfg.O * static_cast<double>(candidates.size());
  try {
    Solution s = solve_weighted(candidates, weights, cfg.constraints, cfg.scope, cfg.node_budget, stats);
    s.objective += offset;
    return s;
  } catch (const SolveTimeout& timeout) {
    Solution s = timeout.best();
    s.objective += offset;
    throw SolveTimeout(s, timeout.nodes());
  }
}

double cs_objective(std::span<const Candidate> candidates, std::span<const std::size_t> selected, double O,
                    const ConstraintSet& constraints) {
  Sentence sentence;
  int max_pred = 0, max_end = 0;
  for (const auto& c : candidates) {
    max_pred = std::max(max_pred, c.predicate());
    max_end = std::max(max_end, c.span().end);
  }
  sentence.id = candidates.empty() ? 0 : candidates.front().sentence;
  sentence.predicates.resize(static_cast<std::size_t>(max_pred + 1));
  sentence.tokens.resize(static_cast<std::size_t>(max_end + 1));
  Solution solution{sentence.id, {selected.begin(), selected.end()}, 0.0};
  const auto report = validate(solution, candidates, constraints, sentence);
  if (!report.valid()) return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  std::vector<bool> chosen(candidates.size(), false);
  for (std::size_t i : selected) chosen[i] = true;
  for (std::size_t i = 0; i < candidates.size(); ++i) value += chosen[i] ? candidates[i].prob_sum() : O;
  return value - report.soft_penalty();
}

std::vector<Solution> solve_pool(const CandidatePool& pool, const CsConfig& cfg, int jobs, SolveStats* stats) {
  cfg.validate();
  std::vector<Solution> out(pool.sentences.size());
  std::vector<SolveStats> per(pool.sentences.size());
  auto work = [&](std::size_t s) {
    try {
      out[s] = solve(pool.sentences[s].candidates, cfg, &per[s]);
    } catch (const SolveTimeout& timeout) {
      out[s] = timeout.best();
    }
    out[s].sentence = pool.sentences[s].sentence;
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

// ---------------------------------------------------------------------------

std::vector<double> default_sweep_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(k * 0.05);
  return grid;
}

SweepResult sweep_O(const CandidatePool& pool, const PropsDocument& gold, CsConfig cfg, std::span<const double> grid,
                    int jobs) {
  SweepResult result;
  for (double o : grid) {
    cfg.O = o;
    const auto solutions = solve_pool(pool, cfg, jobs);
    const auto report = score(solutions_to_props(pool, solutions), gold);
    result.rows.push_back({o, report.precision, report.recall, report.f1});
  }
  std::vector<std::size_t> order(result.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return result.rows[a].O < result.rows[b].O; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = result.rows[order[k - 1]];
    const auto& cur = result.rows[order[k]];
    if (cur.recall > prev.recall + 1e-9) {
      result.recall_monotone = false;
      result.recall_increases.push_back(cur.O);
    }
    if (cur.precision < prev.precision - 1e-9) result.precision_monotone = false;
  }
  return result;
}

std::string SweepResult::csv() const {
  std::string out = "O,precision,recall,f1\n";
  for (const auto& row : rows)
    out += format_double(row.O) + "," + format_double(row.precision) + "," + format_double(row.recall) + "," +
           format_double(row.f1) + "\n";
  return out;
}

std::string SweepResult::diagnostics() const {
  std::string out = std::string("recall non-increasing in O: ") + (recall_monotone ? "yes" : "no") + "\n" +
                    "precision non-decreasing in O: " + (precision_monotone ? "yes" : "no") + "\n";
  if (!recall_increases.empty()) {
    out += "recall rose at O =";
    for (double o : recall_increases) out += " " + format_double(o);
    out += "\n";
  }
  return out;
}

}  // namespace srlcomb

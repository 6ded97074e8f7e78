#include "srlcomb/learn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <list>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "srlcomb/errors.hpp"
#include "srlcomb/eval.hpp"
#include "srlcomb/infer_dp.hpp"
#include "srlcomb/rng.hpp"

namespace srlcomb {

namespace {

double power(double base, int degree) {
  double out = 1.0;
  for (int i = 0; i < degree; ++i) out *= base;
  return out;
}

}  // namespace

double kernel(const FeatureVector& u, const FeatureVector& v, int degree) {
  if (degree < 1) throw std::invalid_argument("kernel degree must be at least 1");
  return power(static_cast<double>(u.dot(v)) + 1.0, degree);
}

// ---------------------------------------------------------------------------
// KernelExpansion

std::size_t KernelExpansion::insert(const FeatureVector& x) {
  auto [it, fresh] = lookup_.try_emplace(x.ids, support_.size());
  if (fresh) {
    const auto k = static_cast<std::uint32_t>(support_.size());
    support_.push_back(x);
    for (auto id : x.ids) postings_[id].push_back(k);
  }
  return it->second;
}

std::vector<int> KernelExpansion::dots(const FeatureVector& x) const {
  std::vector<int> out(support_.size(), 0);
  for (auto id : x.ids)
    if (auto it = postings_.find(id); it != postings_.end())
      for (auto k : it->second) ++out[k];
  return out;
}

double KernelExpansion::evaluate(const FeatureVector& x, std::span<const double> coefficients) const {
  if (support_.empty()) return 0.0;
  const auto d = dots(x);
  double total = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k)
    if (k < coefficients.size() && coefficients[k] != 0.0)
      total += coefficients[k] * power(static_cast<double>(d[k]) + 1.0, degree_);
  return total;
}

std::string_view to_string(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::Svm:
      return "svm";
    case ScorerKind::PerceptronLocal:
      return "perceptron-local";
    case ScorerKind::PerceptronGlobal:
      return "perceptron-global";
  }
  return "svm";
}

ScorerKind parse_scorer_kind(std::string_view text) {
  if (text == "svm") return ScorerKind::Svm;
  if (text == "perceptron-local") return ScorerKind::PerceptronLocal;
  if (text == "perceptron-global") return ScorerKind::PerceptronGlobal;
  throw std::invalid_argument("unknown scorer '" + std::string(text) + "'");
}

double LabelScorer::score(const FeatureVector& x, bool use_average) const {
  return use_average ? expansion.evaluate(x, averaged) + bias_averaged
                     : expansion.evaluate(x, final_coef) + bias_final;
}

double ScoreModel::score(const std::string& label, const FeatureVector& x, bool use_average) const {
  auto it = labels.find(label);
  return it == labels.end() ? 0.0 : it->second.score(x, use_average);
}

// ---------------------------------------------------------------------------
// Model file
//
//   SRLCOMB-MODEL v1
//   kind <svm|perceptron-local|perceptron-global>
//   fingerprint <hex>
//   features <groups>
//   degree <d>
//   epoch <selected epoch>
//   label <name> <rows> <bias averaged> <bias final> <degenerate>
//   <averaged> <final> <id> <id> ...

std::string ScoreModel::serialize() const {
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fingerprint));
  std::string out = "SRLCOMB-MODEL v1\n";
  out += "kind " + std::string(to_string(kind)) + "\n";
  out += std::string("fingerprint ") + hex + "\n";
  out += "features " + (features.empty() ? std::string("-") : features) + "\n";
  out += "degree " + std::to_string(degree) + "\n";
  out += "epoch " + std::to_string(selected_epoch) + "\n";
  for (const auto& [name, scorer] : labels) {
    out += "label " + name + " " + std::to_string(scorer.expansion.size()) + " " +
           format_double(scorer.bias_averaged) + " " + format_double(scorer.bias_final) + " " +
           (scorer.degenerate ? "1" : "0") + "\n";
    for (std::size_t k = 0; k < scorer.expansion.size(); ++k) {
      out += format_double(scorer.averaged[k]) + " " + format_double(scorer.final_coef[k]);
      for (auto id : scorer.expansion.support(k).ids) out += " " + std::to_string(id);
      out += "\n";
    }
  }
  return out;
}

namespace {

template <typename T>
T parse_value(const std::string& text, int line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("bad value '" + text + "'", line);
  return value;
}

}  // namespace

ScoreModel ScoreModel::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  auto next = [&](const char* what) -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++number;
      if (line.empty()) continue;
      std::istringstream fields(line);
      std::vector<std::string> f;
      for (std::string w; fields >> w;) f.push_back(w);
      return f;
    }
    throw ParseError(std::string("unexpected end of model file, expected ") + what, number);
  };
  auto keyed = [&](const char* key) {
    auto f = next(key);
    if (f.size() != 2 || f[0] != key) throw ParseError(std::string("expected '") + key + " <value>'", number);
    return f[1];
  };

  ScoreModel model;
  {
    auto f = next("header");
    if (f.size() != 2 || f[0] != "SRLCOMB-MODEL" || f[1] != "v1") throw ParseError("missing SRLCOMB-MODEL v1 header", number);
  }
  try {
    model.kind = parse_scorer_kind(keyed("kind"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), number);
  }
  {
    const std::string hex = keyed("fingerprint");
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
    if (ec != std::errc() || ptr != hex.data() + hex.size()) throw ParseError("bad fingerprint", number);
    model.fingerprint = value;
  }
  model.features = keyed("features");
  if (model.features == "-") model.features.clear();
  model.degree = parse_value<int>(keyed("degree"), number);
  if (model.degree < 1) throw ParseError("kernel degree must be at least 1", number);
  model.selected_epoch = parse_value<int>(keyed("epoch"), number);

  while (true) {
    std::vector<std::string> f;
    try {
      f = next("label");
    } catch (const ParseError&) {
      break;
    }
    if (f.size() != 6 || f[0] != "label") throw ParseError("expected label block", number);
    LabelScorer scorer;
    scorer.expansion = KernelExpansion(model.degree);
    const auto rows = parse_value<std::size_t>(f[2], number);
    scorer.bias_averaged = parse_value<double>(f[3], number);
    scorer.bias_final = parse_value<double>(f[4], number);
    scorer.degenerate = f[5] == "1";
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = next("coefficient row");
      if (row.size() < 2) throw ParseError("coefficient row needs two coefficients", number);
      std::vector<std::uint32_t> ids;
      for (std::size_t i = 2; i < row.size(); ++i) ids.push_back(parse_value<std::uint32_t>(row[i], number));
      if (!std::is_sorted(ids.begin(), ids.end()) || std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw ParseError("feature ids must be sorted and unique", number);
      const std::size_t k = scorer.expansion.insert(FeatureVector{ids});
      if (k != r) throw ParseError("duplicate support vector", number);
      scorer.averaged.push_back(parse_value<double>(row[0], number));
      scorer.final_coef.push_back(parse_value<double>(row[1], number));
    }
    if (!model.labels.emplace(f[1], std::move(scorer)).second) throw ParseError("duplicate label block", number);
  }
  return model;
}

// ---------------------------------------------------------------------------

std::map<std::string, LabelData> local_datasets(const CandidatePool& pool) {
  std::map<std::string, LabelData> out;
  for (const auto& sp : pool.sentences)
    for (const auto& c : sp.candidates) {
      if (!c.features) throw std::invalid_argument("candidate without features");
      if (!c.is_gold) throw std::invalid_argument("candidate without gold flag");
      auto& d = out[c.label().text()];
      d.x.push_back(*c.features);
      d.y.push_back(*c.is_gold ? 1 : -1);
    }
  return out;
}

// ---------------------------------------------------------------------------
// SVM

namespace {

class KernelRows {
 public:
  KernelRows(const LabelData& data, int degree, std::size_t capacity)
      : data_(data), degree_(degree), capacity_(std::max<std::size_t>(capacity, 2)), expansion_(degree) {
    for (const auto& x : data.x) slot_.push_back(expansion_.insert(x));
  }

  const std::vector<double>& row(std::size_t i) {
    if (auto it = cache_.find(i); it != cache_.end()) {
      order_.splice(order_.begin(), order_, it->second.second);
      return it->second.first;
    }
    if (cache_.size() >= capacity_) {
      cache_.erase(order_.back());
      order_.pop_back();
    }
    const auto d = expansion_.dots(data_.x[i]);
    std::vector<double> values(data_.x.size());
    for (std::size_t j = 0; j < values.size(); ++j) values[j] = power(static_cast<double>(d[slot_[j]]) + 1.0, degree_);
    order_.push_front(i);
    auto [it, _] = cache_.emplace(i, std::make_pair(std::move(values), order_.begin()));
    return it->second.first;
  }

  double diag(std::size_t i) const {
    return power(static_cast<double>(data_.x[i].size()) + 1.0, degree_);
  }

 private:
  const LabelData& data_;
  int degree_;
  std::size_t capacity_;
  KernelExpansion expansion_;
  std::vector<std::size_t> slot_;
  std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>> cache_;
  std::list<std::size_t> order_;
};

}  // namespace

SvmResult train_svm(const LabelData& data, const SvmOptions& options) {
  if (data.x.size() != data.y.size()) throw std::invalid_argument("one target per point expected");
  if (options.degree < 1) throw std::invalid_argument("kernel degree must be at least 1");
  if (!(options.C > 0.0)) throw std::invalid_argument("C must be positive");
  const std::size_t n = data.x.size();
  SvmResult result;
  result.scorer.expansion = KernelExpansion(options.degree);
  const bool has_pos = std::count(data.y.begin(), data.y.end(), 1) > 0;
  const bool has_neg = std::count(data.y.begin(), data.y.end(), -1) > 0;
  if (!has_pos || !has_neg) {
    result.scorer.degenerate = true;
    result.scorer.bias_final = result.scorer.bias_averaged = has_pos ? 1.0 : -1.0;
    result.alpha.assign(n, 0.0);
    return result;
  }

  const double C = options.C;
  constexpr double kTau = 1e-12;
  std::vector<double> alpha(n, 0.0), grad(n, -1.0);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = data.y[i] > 0 ? 1.0 : -1.0;
  KernelRows rows(data, options.degree, options.cache_rows);

  auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0); };
  auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C); };

  std::size_t iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t)
      if (in_up(t) && -y[t] * grad[t] >= gmax) {
        if (-y[t] * grad[t] > gmax || i == n) i = t;
        gmax = -y[t] * grad[t];
      }
    if (i == n) break;
    const auto& ki = rows.row(i);
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      gmax2 = std::max(gmax2, y[t] * grad[t]);
      const double diff = gmax + y[t] * grad[t];
      if (diff > 0) {
        double quad = rows.diag(i) + rows.diag(t) - 2.0 * ki[t];
        if (quad <= 0) quad = kTau;
        const double obj = -(diff * diff) / quad;
        if (obj < best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (gmax + gmax2 < options.tolerance || j == n) break;

    const std::vector<double> kj = rows.row(j);
    const std::vector<double>& kI = rows.row(i);
    const double old_i = alpha[i], old_j = alpha[j];
    const double kii = rows.diag(i), kjj = rows.diag(j), kij = kI[j];
    if (y[i] != y[j]) {
      double quad = kii + kjj + 2.0 * (y[i] * y[j] * kij);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = kii + kjj - 2.0 * kij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * (y[i] * kI[t] * di + y[j] * kj[t] * dj);
  }
  result.iterations = iter;
  result.converged = iter < options.max_iterations;

  // rho as in the standard dual solvers
  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= C) {
      if (y[t] < 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / n_free : (ub + lb) / 2.0;

  double objective = 0.0;
  for (std::size_t t = 0; t < n; ++t) objective += alpha[t] * (grad[t] - 1.0) / 2.0;
  result.dual_objective = objective;
  result.alpha = alpha;

  std::vector<double> coef;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] == 0.0) continue;
    const std::size_t k = result.scorer.expansion.insert(data.x[t]);
    if (k >= coef.size()) coef.resize(k + 1, 0.0);
    coef[k] += alpha[t] * y[t];
  }
  result.scorer.final_coef = coef;
  result.scorer.averaged = coef;
  result.scorer.bias_final = result.scorer.bias_averaged = -rho;
  return result;
}

ScoreModel train_local_svm(const std::map<std::string, LabelData>& data, const SvmOptions& options) {
  ScoreModel model;
  model.kind = ScorerKind::Svm;
  model.degree = options.degree;
  for (const auto& [label, d] : data) model.labels.emplace(label, train_svm(d, options).scorer);
  return model;
}

// ---------------------------------------------------------------------------
// Perceptrons

namespace {

// Kernel Perceptron coefficients with the bookkeeping needed for averaging:
// after U updates the averaged coefficient is (alpha (U + 1) - beta) / U,
// where beta sums delta * t over the updates t that touched it.
struct OnlineScorer {
  KernelExpansion expansion;
  std::vector<double> alpha;
  std::vector<double> beta;

  explicit OnlineScorer(int degree) : expansion(degree) {}

  double score(const FeatureVector& x) const { return expansion.evaluate(x, alpha); }

  void update(const FeatureVector& x, double delta, std::uint64_t t) {
    const std::size_t k = expansion.insert(x);
    if (k >= alpha.size()) {
      alpha.resize(k + 1, 0.0);
      beta.resize(k + 1, 0.0);
    }
    alpha[k] += delta;
    beta[k] += delta * static_cast<double>(t);
  }

  LabelScorer finalize(std::uint64_t updates) const {
    LabelScorer out;
    out.expansion = expansion;
    out.final_coef = alpha;
    out.averaged.resize(alpha.size(), 0.0);
    if (updates > 0) {
      const double u = static_cast<double>(updates);
      for (std::size_t k = 0; k < alpha.size(); ++k) out.averaged[k] = (alpha[k] * (u + 1.0) - beta[k]) / u;
    }
    return out;
  }
};

}  // namespace

ScoreModel train_local_perceptron(const std::map<std::string, LabelData>& data, const PerceptronOptions& options,
                                  std::vector<Update>* log) {
  if (options.degree < 1) throw std::invalid_argument("kernel degree must be at least 1");
  if (options.epochs < 1) throw std::invalid_argument("at least one epoch is needed");
  ScoreModel model;
  model.kind = ScorerKind::PerceptronLocal;
  model.degree = options.degree;
  model.selected_epoch = options.epochs;
  for (const auto& [label, d] : data) {
    OnlineScorer scorer(options.degree);
    std::uint64_t updates = 0;
    for (int epoch = 1; epoch <= options.epochs; ++epoch) {
      for (std::size_t i = 0; i < d.x.size(); ++i) {
        const double s = scorer.score(d.x[i]);
        const bool predicted_positive = s > 0.0;
        if (predicted_positive == (d.y[i] > 0)) continue;
        const double delta = d.y[i] > 0 ? 1.0 : -1.0;
        scorer.update(d.x[i], delta, ++updates);
        if (log) log->push_back({label, d.x[i], delta, epoch});
      }
    }
    LabelScorer out = scorer.finalize(updates);
    out.degenerate = std::count(d.y.begin(), d.y.end(), 1) == 0 ||
                     std::count(d.y.begin(), d.y.end(), -1) == 0;
    model.labels.emplace(label, std::move(out));
  }
  return model;
}

namespace {

ScoreModel snapshot(const std::map<std::string, OnlineScorer>& scorers, std::uint64_t updates, int degree) {
  ScoreModel model;
  model.kind = ScorerKind::PerceptronGlobal;
  model.degree = degree;
  for (const auto& [label, scorer] : scorers) model.labels.emplace(label, scorer.finalize(updates));
  return model;
}

}  // namespace

ScoreModel train_global_perceptron(const CandidatePool& train, const GlobalOptions& options,
                                   const Validation& validation, GlobalTrainingLog* log) {
  if (options.degree < 1) throw std::invalid_argument("kernel degree must be at least 1");
  if (options.epochs < 1) throw std::invalid_argument("at least one epoch is needed");
  for (const auto& sp : train.sentences)
    for (const auto& c : sp.candidates)
      if (!c.features || !c.is_gold) throw std::invalid_argument("training candidates need features and gold flags");

  std::map<std::string, OnlineScorer> scorers;
  std::uint64_t updates = 0;
  Rng rng(derive_seed(options.seed, 77));
  std::vector<std::size_t> order(train.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::optional<ScoreModel> best;
  double best_f1 = -1.0;

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    if (options.shuffle) rng.shuffle(order);
    EpochRecord record;
    record.epoch = epoch;
    Prf training;
    for (std::size_t s : order) {
      const auto& sp = train.sentences[s];
      std::vector<double> conf(sp.candidates.size(), 0.0);
      for (std::size_t i = 0; i < sp.candidates.size(); ++i) {
        const auto it = scorers.find(sp.candidates[i].label().text());
        if (it != scorers.end()) conf[i] = it->second.score(*sp.candidates[i].features);
      }
      Solution predicted;
      if (options.scope == Scope::FullSentence) {
        try {
          predicted = dp_sentence(sp.candidates, conf);
        } catch (const SolveTimeout& timeout) {
          predicted = timeout.best();
        }
      } else {
        CandidatePool single;
        single.systems = train.systems;
        single.sentences.push_back(sp);
        predicted = dp_pool(single, {conf}, Scope::PredByPred).front();
      }
      std::vector<bool> chosen(sp.candidates.size(), false);
      for (std::size_t i : predicted.selected) chosen[i] = true;

      ExampleRecord ex;
      ex.epoch = epoch;
      ex.sentence = sp.sentence;
      std::vector<std::pair<std::size_t, double>> pending;
      for (std::size_t i = 0; i < sp.candidates.size(); ++i) {
        const bool gold = *sp.candidates[i].is_gold;
        if (gold) ++training.gold;
        if (chosen[i]) ++training.predicted;
        if (gold && chosen[i]) ++training.correct;
        if (gold && !chosen[i]) {
          ++ex.missed;
          pending.push_back({i, 1.0});
        } else if (!gold && chosen[i]) {
          ++ex.spurious;
          pending.push_back({i, -1.0});
        }
      }
      // all updates of an example use the prediction made before any of them
      for (const auto& [i, delta] : pending) {
        const auto& c = sp.candidates[i];
        auto it = scorers.try_emplace(c.label().text(), options.degree).first;
        it->second.update(*c.features, delta, ++updates);
        (delta > 0 ? ex.promotions : ex.demotions) += 1;
        ++record.updates;
        if (log) log->updates.push_back({c.label().text(), *c.features, delta, epoch});
      }
      if (log) log->examples.push_back(ex);
    }
    record.training_f1 = training.f1();

    ScoreModel current = snapshot(scorers, updates, options.degree);
    current.selected_epoch = epoch;
    double f1 = 0.0;
    if (validation.pool && validation.gold) {
      const auto conf = score_pool_unchecked(current, *validation.pool, true, options.jobs);
      const auto solutions = dp_pool(*validation.pool, conf, options.scope, options.jobs);
      f1 = score(solutions_to_props(*validation.pool, solutions), *validation.gold).f1;
      record.validation_f1 = f1;
    }
    if (log) log->epochs.push_back(record);
    const bool has_validation = validation.pool && validation.gold;
    if (!best || (has_validation ? f1 > best_f1 : true)) {
      best = std::move(current);
      best_f1 = f1;
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> score_pool_unchecked(const ScoreModel& model, const CandidatePool& pool,
                                                      bool use_average, int jobs) {
  std::vector<std::vector<double>> out(pool.sentences.size());
  auto work = [&](std::size_t s) {
    const auto& sp = pool.sentences[s];
    out[s].resize(sp.candidates.size());
    for (std::size_t i = 0; i < sp.candidates.size(); ++i) {
      const auto& c = sp.candidates[i];
      if (!c.features) throw std::invalid_argument("candidate without features");
      out[s][i] = model.score(c.label().text(), *c.features, use_average);
    }
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
  return out;
}

std::vector<std::vector<double>> score_pool(const ScoreModel& model, const CandidatePool& pool,
                                            std::uint64_t fingerprint, bool use_average, int jobs) {
  if (model.fingerprint != fingerprint) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "model fingerprint %016llx does not match features %016llx",
                  static_cast<unsigned long long>(model.fingerprint), static_cast<unsigned long long>(fingerprint));
    throw ModelMismatchError(buf);
  }
  return score_pool_unchecked(model, pool, use_average, jobs);
}

}  // namespace srlcomb

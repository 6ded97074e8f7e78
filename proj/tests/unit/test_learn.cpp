#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "srlcomb/errors.hpp"
#include "srlcomb/eval.hpp"
#include "srlcomb/infer_dp.hpp"
#include "srlcomb/learn.hpp"
#include "srlcomb/pipeline.hpp"
#include "srlcomb/rng.hpp"

using namespace srlcomb;

namespace {

FeatureVector random_vector(Rng& rng, int vocab, int max_len) {
  std::vector<std::uint32_t> ids;
  const int n = rng.range(0, max_len);
  for (int i = 0; i < n; ++i) ids.push_back(static_cast<std::uint32_t>(rng.range(0, vocab - 1)));
  return FeatureVector::from_unsorted(ids);
}

double dense_kernel(const FeatureVector& a, const FeatureVector& b, int d) {
  int dot = 0;
  for (auto x : a.ids)
    for (auto y : b.ids) dot += x == y;
  return std::pow(dot + 1.0, d);
}

// Plain maximal-violating-pair SMO on the dense matrix, run far below the
// library tolerance.
double dense_dual_optimum(const LabelData& data, int degree, double C) {
  const std::size_t n = data.x.size();
  std::vector<std::vector<double>> Q(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) Q[i][j] = data.y[i] * data.y[j] * dense_kernel(data.x[i], data.x[j], degree);
  std::vector<double> a(n, 0.0), g(n, -1.0);
  for (int it = 0; it < 200000; ++it) {
    double up = -1e300, low = 1e300;
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double y = data.y[t];
      const double v = -y * g[t];
      if (((y > 0 && a[t] < C) || (y < 0 && a[t] > 0)) && v > up) up = v, i = t;
      if (((y > 0 && a[t] > 0) || (y < 0 && a[t] < C)) && v < low) low = v, j = t;
    }
    if (i == n || j == n || up - low < 1e-10) break;
    const double yi = data.y[i], yj = data.y[j];
    const double curv = std::max(Q[i][i] + Q[j][j] - 2 * yi * yj * Q[i][j], 1e-12);
    double step = (up - low) / curv;
    // move a_i by yi*step and a_j by -yj*step within the box
    step = std::min(step, yi > 0 ? C - a[i] : a[i]);
    step = std::min(step, yj > 0 ? a[j] : C - a[j]);
    const double di = yi * step, dj = -yj * step;
    a[i] += di;
    a[j] += dj;
    for (std::size_t t = 0; t < n; ++t) g[t] += Q[t][i] * di + Q[t][j] * dj;
  }
  double obj = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    obj -= a[i];
    for (std::size_t j = 0; j < n; ++j) obj += 0.5 * a[i] * a[j] * Q[i][j];
  }
  return obj;
}

LabelData toy_data(Rng& rng, std::size_t n, bool conflicts) {
  LabelData d;
  for (std::size_t i = 0; i < n; ++i) {
    d.x.push_back(random_vector(rng, 8, 4));
    d.y.push_back(rng.bernoulli(0.5) ? 1 : -1);
  }
  if (conflicts)
    for (std::size_t i = 0; i + 1 < n; i += 5) {
      d.x.push_back(d.x[i]);
      d.y.push_back(-d.y[i]);
    }
  d.y[0] = 1;
  d.y[1] = -1;
  return d;
}

// gold marked by feature 0, everything else by feature 1, plus noise
void mark_features(CandidatePool& pool, Rng& rng) {
  for (auto& sp : pool.sentences)
    for (auto& c : sp.candidates)
      c.features = FeatureVector::from_unsorted({*c.is_gold ? 0u : 1u, static_cast<std::uint32_t>(rng.range(2, 9))});
}

double pool_f1(const CandidatePool& pool, const std::vector<Solution>& solutions) {
  Prf prf;
  for (std::size_t s = 0; s < pool.sentences.size(); ++s) {
    const auto& cands = pool.sentences[s].candidates;
    for (const auto& c : cands) prf.gold += *c.is_gold;
    for (auto i : solutions[s].selected) {
      ++prf.predicted;
      prf.correct += *cands[i].is_gold;
    }
  }
  return prf.f1();
}

}  // namespace

TEST_CASE("kernel values") {
  CHECK(kernel(FeatureVector{}, FeatureVector{}, 2) == 1.0);
  auto u = FeatureVector::from_unsorted({1, 2, 3, 7});
  auto v = FeatureVector::from_unsorted({1, 2, 3, 9});
  CHECK(kernel(u, v, 2) == 16.0);
  CHECK(kernel(u, v, 1) == 4.0);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    auto a = random_vector(rng, 30, 10), b = random_vector(rng, 30, 10);
    CHECK(kernel(a, b, 2) == kernel(b, a, 2));
    CHECK(kernel(a, b, 3) == dense_kernel(a, b, 3));
  }
}

TEST_CASE("kernel expansion deduplicates and evaluates") {
  KernelExpansion e(2);
  auto a = FeatureVector::from_unsorted({1, 2});
  auto b = FeatureVector::from_unsorted({2, 3});
  CHECK(e.insert(a) == 0);
  CHECK(e.insert(b) == 1);
  CHECK(e.insert(a) == 0);
  CHECK(e.size() == 2);
  auto x = FeatureVector::from_unsorted({2, 3, 4});
  CHECK(e.dots(x) == std::vector<int>{1, 2});
  const std::vector<double> coef = {0.5, -1.0};
  CHECK(e.evaluate(x, coef) == doctest::Approx(0.5 * 4 - 9));
}

TEST_CASE("svm matches the dense dual optimum") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    auto data = toy_data(rng, static_cast<std::size_t>(rng.range(4, 16)), trial % 2 == 0);
    REQUIRE(data.x.size() <= 20);
    SvmOptions opts;
    opts.C = trial % 3 == 0 ? 10.0 : 1.0;
    opts.tolerance = 1e-8;
    auto r = train_svm(data, opts);
    CHECK(r.converged);
    const double oracle = dense_dual_optimum(data, opts.degree, opts.C);
    CHECK(r.dual_objective == doctest::Approx(oracle).epsilon(1e-4));
    double balance = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
      CHECK(r.alpha[i] >= -1e-12);
      CHECK(r.alpha[i] <= opts.C + 1e-12);
      balance += data.y[i] * r.alpha[i];
    }
    CHECK(std::abs(balance) < 1e-9);
  }
}

TEST_CASE("svm satisfies KKT at the default tolerance") {
  Rng rng(23);
  auto data = toy_data(rng, 60, false);
  auto r = train_svm(data);
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const double m = data.y[i] * r.scorer.score(data.x[i], false);
    if (r.alpha[i] < 1e-9) CHECK(m >= 1 - 2e-3);
    else if (r.alpha[i] > 1.0 - 1e-9) CHECK(m <= 1 + 2e-3);
    else CHECK(m == doctest::Approx(1.0).epsilon(2e-3));
  }
}

TEST_CASE("svm on separable data") {
  LabelData d;
  for (std::uint32_t i = 0; i < 20; ++i) {
    d.x.push_back(FeatureVector::from_unsorted({i % 2 == 0 ? 0u : 1u, 2 + i}));
    d.y.push_back(i % 2 == 0 ? 1 : -1);
  }
  auto soft = train_svm(d);
  SvmOptions hard;
  hard.C = 1e6;
  auto hard_r = train_svm(d, hard);
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    CHECK((soft.scorer.score(d.x[i], false) > 0) == (d.y[i] > 0));
    CHECK((hard_r.scorer.score(d.x[i], false) > 0) == (soft.scorer.score(d.x[i], false) > 0));
  }
}

TEST_CASE("single-class labels give a flagged constant model") {
  LabelData d;
  d.x = {FeatureVector::from_unsorted({1}), FeatureVector::from_unsorted({2})};
  d.y = {-1, -1};
  auto r = train_svm(d);
  CHECK(r.scorer.degenerate);
  CHECK(r.scorer.score(FeatureVector::from_unsorted({1}), false) < 0);
  CHECK_THROWS_AS(train_svm(d, SvmOptions{2, -1.0}), std::invalid_argument);
}

TEST_CASE("local perceptron: replay oracle") {
  Rng rng(31);
  std::map<std::string, LabelData> data;
  data["A0"] = toy_data(rng, 40, false);
  data["A1"] = toy_data(rng, 30, true);
  std::vector<Update> log;
  PerceptronOptions opts;
  opts.epochs = 4;
  auto model = train_local_perceptron(data, opts, &log);

  for (const auto& [label, d] : data) {
    // replay every update and average the score functions of all states
    std::vector<std::pair<FeatureVector, double>> history;
    for (const auto& u : log)
      if (u.label == label) history.push_back({u.x, u.delta});
    for (int probe = 0; probe < 50; ++probe) {
      auto x = random_vector(rng, 8, 5);
      double current = 0.0, summed = 0.0;
      for (const auto& [sv, delta] : history) {
        current += delta * dense_kernel(sv, x, opts.degree);
        summed += current;
      }
      CHECK(model.score(label, x, false) == doctest::Approx(current));
      if (!history.empty()) CHECK(model.score(label, x, true) == doctest::Approx(summed / history.size()));
    }
    // the log is exactly the sequence of sign errors
    std::vector<std::pair<FeatureVector, double>> sim;
    std::size_t k = 0;
    for (int epoch = 1; epoch <= opts.epochs; ++epoch)
      for (std::size_t i = 0; i < d.x.size(); ++i) {
        double s = 0.0;
        for (const auto& [sv, delta] : sim) s += delta * dense_kernel(sv, d.x[i], opts.degree);
        if ((s > 0) != (d.y[i] > 0)) {
          const double delta = d.y[i] > 0 ? 1.0 : -1.0;
          sim.push_back({d.x[i], delta});
          REQUIRE(k < history.size());
          CHECK(history[k].first == d.x[i]);
          CHECK(history[k].second == delta);
          ++k;
        }
      }
    CHECK(k == history.size());
  }
}

TEST_CASE("local perceptron separates separable data") {
  LabelData d;
  for (std::uint32_t i = 0; i < 30; ++i) {
    d.x.push_back(FeatureVector::from_unsorted({i % 3 == 0 ? 0u : 1u, 5 + i % 4}));
    d.y.push_back(i % 3 == 0 ? 1 : -1);
  }
  std::map<std::string, LabelData> data{{"A0", d}};
  auto model = train_local_perceptron(data, {2, 10});
  for (std::size_t i = 0; i < d.x.size(); ++i) CHECK((model.score("A0", d.x[i], false) > 0) == (d.y[i] > 0));
  ScoreModel empty;
  CHECK(empty.score("A0", d.x[0]) == 0.0);
}

TEST_CASE("global perceptron on a marked pool") {
  SyntheticConfig sc;
  sc.n_sentences = 120;
  sc.seed = 3;
  auto data = make_dataset(generate_synthetic(sc));
  Rng rng(4);
  mark_features(data.pool, rng);

  GlobalOptions opts;
  opts.epochs = 3;
  opts.degree = 1;
  GlobalTrainingLog log;
  auto model = train_global_perceptron(data.pool, opts, {}, &log);

  // the first example sees a zero model: nothing selected, all gold promoted
  const auto& first = log.examples.front();
  CHECK(first.spurious == 0);
  CHECK(first.demotions == 0);
  CHECK(first.promotions == first.missed);

  for (const auto& ex : log.examples) {
    CHECK(ex.promotions == ex.missed);
    CHECK(ex.demotions == ex.spurious);
  }
  const int total = std::accumulate(log.epochs.begin(), log.epochs.end(), 0,
                                    [](int acc, const EpochRecord& e) { return acc + e.updates; });
  CHECK(static_cast<std::size_t>(total) == log.updates.size());

  bool perfect = false;
  for (const auto& e : log.epochs) perfect |= e.training_f1 == 100.0;
  CHECK(perfect);
  auto conf = score_pool_unchecked(model, data.pool, false);
  auto solutions = dp_pool(data.pool, conf, Scope::PredByPred);
  CHECK(pool_f1(data.pool, solutions) == doctest::Approx(100.0));

  // Collins bound: u puts +1 on the gold marker and -1 on the other marker in
  // every label block, so the margin is 1/sqrt(2L); R bounds the norm of any
  // feature difference.
  std::set<std::string> labels;
  std::size_t widest = 0;
  for (const auto& sp : data.pool.sentences) {
    widest = std::max(widest, sp.candidates.size());
    for (const auto& c : sp.candidates) labels.insert(c.label().text());
  }
  const double r2 = 3.0 * static_cast<double>(widest * widest);
  const double bound = r2 * 2.0 * static_cast<double>(labels.size());
  std::size_t mistakes = 0;
  for (const auto& ex : log.examples) mistakes += (ex.missed + ex.spurious) > 0;
  CHECK(static_cast<double>(mistakes) <= bound);
}

TEST_CASE("global perceptron is deterministic and serializes exactly") {
  SyntheticConfig sc;
  sc.n_sentences = 60;
  auto data = make_dataset(generate_synthetic(sc));
  Rng rng(4);
  mark_features(data.pool, rng);
  GlobalOptions opts;
  opts.shuffle = true;
  opts.seed = 99;
  opts.scope = Scope::FullSentence;
  auto a = train_global_perceptron(data.pool, opts).serialize();
  auto b = train_global_perceptron(data.pool, opts).serialize();
  CHECK(a == b);
  CHECK(ScoreModel::parse(a).serialize() == a);
  opts.seed = 100;
  auto c = train_global_perceptron(data.pool, opts);
  CHECK(c.kind == ScorerKind::PerceptronGlobal);
}

TEST_CASE("validation picks the best epoch") {
  SyntheticConfig sc;
  sc.n_sentences = 80;
  auto corpus = generate_synthetic(sc);
  auto train = make_dataset(corpus);
  sc.seed = 2;
  auto dev = make_dataset(generate_synthetic(sc));
  Rng rng(5);
  mark_features(train.pool, rng);
  mark_features(dev.pool, rng);
  GlobalOptions opts;
  opts.epochs = 4;
  GlobalTrainingLog log;
  auto model = train_global_perceptron(train.pool, opts, {&dev.pool, &*dev.gold}, &log);
  REQUIRE(log.epochs.size() == 4);
  double best = -1;
  int best_epoch = 0;
  for (const auto& e : log.epochs) {
    REQUIRE(e.validation_f1.has_value());
    if (*e.validation_f1 > best) best = *e.validation_f1, best_epoch = e.epoch;
  }
  CHECK(model.selected_epoch == best_epoch);
}

TEST_CASE("averaged and final predictors differ mid-training") {
  Rng rng(8);
  std::map<std::string, LabelData> data{{"A0", toy_data(rng, 30, true)}};
  auto model = train_local_perceptron(data, {2, 1});
  bool differs = false;
  for (const auto& x : data["A0"].x) differs |= model.score("A0", x, true) != model.score("A0", x, false);
  CHECK(differs);
}

TEST_CASE("model file round trip and fingerprint check") {
  Rng rng(12);
  std::map<std::string, LabelData> data{{"A0", toy_data(rng, 20, false)}, {"AM-TMP", toy_data(rng, 15, false)}};
  auto model = train_local_svm(data);
  model.fingerprint = 0x1234abcdULL;
  model.features = "FS1,FS2";
  auto text = model.serialize();
  CHECK(text.rfind("SRLCOMB-MODEL v1\n", 0) == 0);
  auto back = ScoreModel::parse(text);
  CHECK(back.serialize() == text);
  for (const auto& x : data["A0"].x) CHECK(back.score("A0", x) == model.score("A0", x));
  CHECK_THROWS(ScoreModel::parse("SRLCOMB-MODEL v2\n"));

  CandidatePool pool;
  pool.systems = {"S"};
  SentencePool sp;
  Candidate c;
  c.argument = {0, RoleLabel::parse("A0"), {0, 0}};
  c.features = data["A0"].x[0];
  sp.candidates.push_back(c);
  pool.sentences.push_back(sp);
  CHECK_NOTHROW(score_pool(model, pool, 0x1234abcdULL));
  CHECK_THROWS_AS(score_pool(model, pool, 0x1234abceULL), ModelMismatchError);
}

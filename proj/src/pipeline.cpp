#include "srlcomb/pipeline.hpp"

#include <stdexcept>

#include "srlcomb/errors.hpp"
#include "srlcomb/infer_dp.hpp"

namespace srlcomb {

std::vector<SystemOutput> system_outputs(const SyntheticCorpus& corpus) {
  std::vector<SystemOutput> out;
  for (const auto& sys : corpus.systems) out.push_back({sys.name, sys.props, sys.scores});
  return out;
}

std::string_view to_string(Engine engine) { return engine == Engine::Cs ? "cs" : "dp"; }

Engine parse_engine(std::string_view text) {
  if (text == "cs") return Engine::Cs;
  if (text == "dp") return Engine::Dp;
  throw std::invalid_argument("engine must be 'cs' or 'dp', got '" + std::string(text) + "'");
}

std::string_view to_string(Scorer scorer) {
  switch (scorer) {
    case Scorer::ProbSum:
      return "probsum";
    case Scorer::Svm:
      return "svm";
    case Scorer::PerceptronLocal:
      return "perceptron-local";
    case Scorer::PerceptronGlobal:
      return "perceptron-global";
  }
  return "probsum";
}

Scorer parse_scorer(std::string_view text) {
  if (text == "probsum") return Scorer::ProbSum;
  if (text == "svm") return Scorer::Svm;
  if (text == "perceptron-local") return Scorer::PerceptronLocal;
  if (text == "perceptron-global") return Scorer::PerceptronGlobal;
  throw std::invalid_argument("unknown scorer '" + std::string(text) + "'");
}

Dataset make_dataset(std::span<const SystemOutput> systems, std::vector<Sentence> sentences,
                     std::optional<PropsDocument> gold, const CalibrationConfig& calibration) {
  Dataset data;
  data.pool = build_pool(systems, calibration);
  if (gold) data.pool = align_gold(std::move(data.pool), *gold);
  data.gold = std::move(gold);
  data.sentences = std::move(sentences);
  if (!data.sentences.empty()) {
    if (data.sentences.size() != data.pool.sentences.size())
      throw AlignmentError("syntax has " + std::to_string(data.sentences.size()) + " sentences, props have " +
                               std::to_string(data.pool.sentences.size()),
                           static_cast<int>(std::min(data.sentences.size(), data.pool.sentences.size())));
    for (std::size_t s = 0; s < data.sentences.size(); ++s) {
      auto& sentence = data.sentences[s];
      if (sentence.size() != data.pool.sentences[s].n_tokens)
        throw AlignmentError("syntax token count differs from props", static_cast<int>(s));
      sentence.id = static_cast<int>(s);
      sentence.predicates = data.pool.sentences[s].predicates;
    }
  }
  return data;
}

Dataset make_dataset(const SyntheticCorpus& corpus, const CalibrationConfig& calibration) {
  const auto systems = system_outputs(corpus);
  return make_dataset(systems, corpus.sentences, corpus.gold, calibration);
}

TrainedScorer train_scorer(Dataset& train, const TrainOptions& options, Dataset* validation) {
  if (options.scorer == Scorer::ProbSum) throw std::invalid_argument("the probability-sum scorer needs no training");
  if (!train.gold) throw std::invalid_argument("training needs gold annotations");
  options.features.validate();

  TrainedScorer out;
  out.features = options.features;
  out.intervals = build_intervals(train.pool);
  extract_pool(train.pool, train.sentences, out.intervals, out.features, out.vocab, options.global.jobs);
  out.vocab.freeze();
  const std::uint64_t fingerprint = feature_fingerprint(out.features, out.vocab);

  switch (options.scorer) {
    case Scorer::Svm:
      out.model = train_local_svm(local_datasets(train.pool), options.svm);
      break;
    case Scorer::PerceptronLocal:
      out.model = train_local_perceptron(local_datasets(train.pool), options.perceptron);
      break;
    case Scorer::PerceptronGlobal: {
      Validation val;
      if (validation && validation->gold) {
        extract_pool(validation->pool, validation->sentences, out.intervals, out.features, out.vocab,
                     options.global.jobs);
        val.pool = &validation->pool;
        val.gold = &*validation->gold;
      }
      out.model = train_global_perceptron(train.pool, options.global, val);
      break;
    }
    case Scorer::ProbSum:
      break;
  }
  out.model.fingerprint = fingerprint;
  out.model.features = out.features.to_string();
  return out;
}

std::vector<std::vector<double>> apply_scorer(const TrainedScorer& scorer, Dataset& data, int jobs) {
  Vocabulary vocab = scorer.vocab;
  vocab.freeze();
  const std::uint64_t fingerprint = feature_fingerprint(scorer.features, vocab);
  if (fingerprint != scorer.model.fingerprint || scorer.features.to_string() != scorer.model.features)
    throw ModelMismatchError("model was trained with a different feature vocabulary or feature groups");
  extract_pool(data.pool, data.sentences, scorer.intervals, scorer.features, vocab, jobs);
  return score_pool(scorer.model, data.pool, fingerprint, true, jobs);
}

void save_scorer(const TrainedScorer& scorer, const std::filesystem::path& path) {
  write_file(path, scorer.model.serialize());
  write_file(path.string() + ".vocab", scorer.vocab.dump());
  write_file(path.string() + ".intervals", scorer.intervals.serialize());
}

TrainedScorer load_scorer(const std::filesystem::path& path) {
  TrainedScorer out;
  out.model = ScoreModel::parse(read_file(path));
  out.vocab = Vocabulary::parse(read_file(path.string() + ".vocab"));
  out.vocab.freeze();
  out.intervals = IntervalTable::parse(read_file(path.string() + ".intervals"));
  try {
    out.features = FeatureConfig::parse(out.model.features);
  } catch (const std::invalid_argument& e) {
    throw ModelMismatchError(std::string("model lists unusable feature groups: ") + e.what());
  }
  return out;
}

std::vector<Solution> run_engine(const CandidatePool& pool, const EngineConfig& cfg,
                                 const std::vector<std::vector<double>>* confidences, SolveStats* stats) {
  if (cfg.engine == Engine::Cs) {
    CsConfig cs = cfg.cs;
    cs.scope = cfg.scope;
    cs.node_budget = cfg.node_budget;
    return solve_pool(pool, cs, cfg.jobs, stats);
  }
  if (!confidences) throw std::invalid_argument("the dp engine needs candidate confidences");
  return dp_pool(pool, *confidences, cfg.scope, cfg.jobs, stats, cfg.node_budget);
}

}  // namespace srlcomb

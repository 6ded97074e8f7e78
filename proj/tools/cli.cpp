#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "srlcomb/calibrate.hpp"
#include "srlcomb/corpus_io.hpp"
#include "srlcomb/errors.hpp"
#include "srlcomb/eval.hpp"
#include "srlcomb/features.hpp"
#include "srlcomb/infer_cs.hpp"
#include "srlcomb/pipeline.hpp"
#include "srlcomb/pool.hpp"
#include "srlcomb/synthetic.hpp"

namespace srlcomb::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Bad flag values detected after parsing; reported like format errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_jobs() {
  if (const char* env = std::getenv("SRLCOMB_JOBS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void add_inputs(CLI::App* cmd, Options& o, bool need_systems) {
  auto* sys = cmd->add_option("--system", o.systems, "System output as name=path (props format); repeatable");
  if (need_systems) sys->required();
  cmd->add_option("--scores", o.scores, "Score sidecar as name=path; repeatable");
  cmd->add_option("--syntax", o.syntax, "Syntax file (word POS chunk clause NE [parse])");
  cmd->add_option("--gamma", o.gamma, "Softmax temperature for raw scores")->default_str("0.1");
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Worker threads (default from SRLCOMB_JOBS, else 1)")->capture_default_str();
  cmd->add_option("--manifest", o.manifest, "Write the resolved parameters here (default: next to --out)");
}

void add_inference(CLI::App* cmd, Options& o) {
  cmd->add_option("--engine", o.engine, "Inference engine: cs | dp")->capture_default_str();
  cmd->add_option("--scorer", o.scorer, "Candidate scorer: probsum | svm | perceptron-local | perceptron-global")
      ->capture_default_str();
  cmd->add_option("--scope", o.scope, "Inference scope: pred | sentence")->capture_default_str();
  cmd->add_option("--constraints", o.constraints,
                  "Constraint set, e.g. 1+2+5+6 or 1+2+3:soft=0.5 (default: 1+2 for pred, 1+2+5+6 for sentence)");
  cmd->add_option("-O,--bias", o.O, "Score O of an unselected candidate")->default_str("0.30");
  cmd->add_option("--node-budget", o.node_budget, "Branch-and-bound node budget per sentence")
      ->capture_default_str();
}

std::pair<std::string, std::string> split_pair(const std::string& text, const char* flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw UsageError(std::string(flag) + " expects name=path, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::string read_input(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("no such file: " + path);
  return read_file(path);
}

struct Loaded {
  std::vector<SystemOutput> systems;
  std::vector<Sentence> sentences;
  std::optional<PropsDocument> gold;
};

Loaded load_inputs(const std::vector<std::string>& system_args, const std::vector<std::string>& score_args,
                   const std::string& syntax, const std::string& gold, std::ostream& err) {
  Loaded out;
  std::map<std::string, std::string> score_paths;
  for (const auto& s : score_args) {
    auto [name, path] = split_pair(s, "--scores");
    if (!score_paths.emplace(name, path).second) throw UsageError("scores given twice for system " + name);
  }
  for (const auto& s : system_args) {
    auto [name, path] = split_pair(s, "--system");
    SystemOutput sys;
    sys.name = name;
    sys.props = parse_props(read_input(path));
    if (auto it = score_paths.find(name); it != score_paths.end()) {
      sys.scores = parse_scores(read_input(it->second));
      score_paths.erase(it);
    } else {
      err << "warning: system " << name << " has no scores; its probabilities count as 0\n";
    }
    out.systems.push_back(std::move(sys));
  }
  if (!score_paths.empty()) throw UsageError("scores given for unknown system " + score_paths.begin()->first);
  if (!syntax.empty()) out.sentences = parse_syntax(read_input(syntax));
  if (!gold.empty()) out.gold = parse_props(read_input(gold));
  return out;
}

Dataset dataset_from(Loaded loaded, double gamma) {
  CalibrationConfig calibration;
  calibration.gamma = gamma;
  return make_dataset(loaded.systems, std::move(loaded.sentences), std::move(loaded.gold), calibration);
}

Scope scope_of(const Options& o) {
  try {
    return parse_scope(o.scope);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ConstraintSet constraints_of(const Options& o, Scope scope) {
  if (o.constraints.empty()) return default_constraints(scope);
  try {
    return ConstraintSet::parse(o.constraints);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad --constraints: ") + e.what());
  }
}

json manifest_for(const Options& o) {
  json m;
  m["command"] = o.command;
  m["systems"] = o.systems;
  m["scores"] = o.scores;
  m["syntax"] = o.syntax;
  m["gold"] = o.gold;
  m["seed"] = o.seed;
  m["jobs"] = o.jobs;
  m["gamma"] = o.gamma;
  if (o.command == "infer" || o.command == "sweep") {
    const Scope scope = scope_of(o);
    m["engine"] = o.engine;
    m["scorer"] = o.scorer;
    m["scope"] = o.scope;
    m["constraints"] = constraints_of(o, scope).to_string();
    m["O"] = o.O;
    m["model"] = o.model;
    m["node_budget"] = o.node_budget;
  }
  if (o.command == "train") {
    m["scorer"] = o.scorer;
    m["scope"] = o.scope;
    m["features"] = FeatureConfig::parse(o.features).to_string();
    m["epochs"] = o.epochs;
    m["degree"] = o.degree;
    m["C"] = o.C;
    m["tolerance"] = o.tolerance;
    m["shuffle"] = o.shuffle;
    m["dev_systems"] = o.dev_systems;
    m["dev_gold"] = o.dev_gold;
  }
  if (o.command == "score" || o.command == "infer") {
    m["bootstrap"] = o.bootstrap;
    m["level"] = o.level;
  }
  if (o.command == "sweep") m["grid"] = o.grid.empty() ? "0:1:0.05" : o.grid;
  if (o.command == "synth") {
    m["sentences"] = o.sentences;
    m["tokens"] = {o.min_tokens, o.max_tokens};
    m["predicates"] = {o.min_predicates, o.max_predicates};
    m["args"] = {o.min_args, o.max_args};
    m["knobs"] = o.knobs;
    m["label_noise"] = o.label_noise;
    m["boundary_noise"] = o.boundary_noise;
  }
  return m;
}

void write_manifest(const Options& o, const fs::path& default_path) {
  fs::path path = o.manifest.empty() ? default_path : fs::path(o.manifest);
  if (path.empty()) return;
  write_file(path, manifest_for(o).dump(2) + "\n");
}

fs::path beside(const std::string& out) { return out.empty() ? fs::path() : fs::path(out + ".manifest.json"); }

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_file(path, text);
}

// ---------------------------------------------------------------------------

int cmd_pool(const Options& o, std::ostream& out, std::ostream& err) {
  Dataset data = dataset_from(load_inputs(o.systems, o.scores, o.syntax, o.gold, err), o.gamma);
  if (!o.out.empty()) write_file(o.out, emit_pool(data.pool));
  if (data.gold) emit(o.stats_out, pool_stats(data.pool).format(), out);
  else err << "no --gold given: agreement table skipped\n";
  write_manifest(o, beside(o.out));
  return kExitOk;
}

int cmd_infer(const Options& o, std::ostream& out, std::ostream& err) {
  const Scope scope = scope_of(o);
  Engine engine;
  Scorer scorer;
  try {
    engine = parse_engine(o.engine);
    scorer = parse_scorer(o.scorer);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (engine == Engine::Cs && scorer != Scorer::ProbSum)
    throw UsageError("the cs engine scores candidates by probability sums; use --engine dp with a trained scorer");

  Dataset data = dataset_from(load_inputs(o.systems, o.scores, o.syntax, o.gold, err), o.gamma);
  EngineConfig cfg;
  cfg.engine = engine;
  cfg.scope = scope;
  cfg.jobs = o.jobs;
  cfg.node_budget = o.node_budget;
  cfg.cs.O = o.O;
  cfg.cs.constraints = constraints_of(o, scope);
  cfg.cs.scope = scope;
  try {
    cfg.cs.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::vector<std::vector<double>> confidences;
  if (engine == Engine::Dp) {
    if (scorer == Scorer::ProbSum) {
      for (const auto& sp : data.pool.sentences) {
        confidences.emplace_back();
        for (const auto& c : sp.candidates) confidences.back().push_back(c.prob_sum() - o.O);
      }
    } else {
      if (o.model.empty()) throw UsageError("--model is required for scorer " + o.scorer);
      if (!fs::is_regular_file(o.model)) throw UsageError("no such file: " + o.model);
      const TrainedScorer trained = load_scorer(o.model);
      if (to_string(trained.model.kind) != o.scorer)
        throw ModelMismatchError("model was trained as " + std::string(to_string(trained.model.kind)) +
                                 ", not " + o.scorer);
      confidences = apply_scorer(trained, data, o.jobs);
    }
  }

  SolveStats stats;
  const auto solutions = run_engine(data.pool, cfg, engine == Engine::Dp ? &confidences : nullptr, &stats);
  const PropsDocument predicted = solutions_to_props(data.pool, solutions);
  emit(o.out, emit_props(predicted), out);

  if (data.gold) {
    std::ostream& report = o.out.empty() ? err : out;
    const auto r = score(predicted, *data.gold);
    report << r.table();
    if (o.bootstrap > 0) {
      const auto b = bootstrap(predicted, *data.gold, o.bootstrap, o.level, o.seed, o.jobs);
      report << "F1 " << b.format() << " (" << b.samples << " resamples, level " << b.level << ")\n";
    }
  }
  write_manifest(o, beside(o.out));
  if (!stats.optimal) {
    err << "error: search budget exhausted; output holds the best solutions found\n";
    return kExitTimeout;
  }
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  TrainOptions options;
  try {
    options.scorer = parse_scorer(o.scorer);
    options.features = FeatureConfig::parse(o.features);
    options.features.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (options.scorer == Scorer::ProbSum) throw UsageError("probsum needs no training");
  if (o.gold.empty()) throw UsageError("train needs --gold");
  if (o.out.empty()) throw UsageError("train needs --out for the model file");
  options.svm.degree = options.perceptron.degree = options.global.degree = o.degree;
  options.svm.C = o.C;
  options.svm.tolerance = o.tolerance;
  options.perceptron.epochs = options.global.epochs = o.epochs;
  options.global.scope = scope_of(o);
  options.global.shuffle = o.shuffle;
  options.global.seed = o.seed;
  options.global.jobs = o.jobs;

  Dataset train = dataset_from(load_inputs(o.systems, o.scores, o.syntax, o.gold, err), o.gamma);
  std::optional<Dataset> dev;
  if (!o.dev_systems.empty()) {
    if (o.dev_gold.empty()) throw UsageError("--dev-system needs --dev-gold");
    dev = dataset_from(load_inputs(o.dev_systems, o.dev_scores, o.dev_syntax, o.dev_gold, err), o.gamma);
  }
  const TrainedScorer trained = train_scorer(train, options, dev ? &*dev : nullptr);
  save_scorer(trained, o.out);
  out << "trained " << o.scorer << " model: " << trained.model.labels.size() << " labels, "
      << trained.vocab.size() << " features\n";
  write_manifest(o, beside(o.out));
  return kExitOk;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) return default_sweep_grid();
  std::vector<double> parts;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ':');) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--grid expects lo:hi:step, got '" + text + "'");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0]) throw UsageError("--grid expects lo:hi:step");
  std::vector<double> grid;
  const auto steps = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (int k = 0; k <= steps; ++k) grid.push_back(parts[0] + k * parts[2]);
  return grid;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.gold.empty()) throw UsageError("sweep needs --gold");
  const Scope scope = scope_of(o);
  CsConfig cfg;
  cfg.scope = scope;
  cfg.constraints = constraints_of(o, scope);
  cfg.node_budget = o.node_budget;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto grid = parse_grid(o.grid);
  Dataset data = dataset_from(load_inputs(o.systems, o.scores, o.syntax, o.gold, err), o.gamma);
  const auto result = sweep_O(data.pool, *data.gold, cfg, grid, o.jobs);
  emit(o.out, result.csv(), out);
  err << result.diagnostics();
  write_manifest(o, beside(o.out));
  return kExitOk;
}

int cmd_curves(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.gold.empty()) throw UsageError("curves needs --gold");
  Dataset data = dataset_from(load_inputs(o.systems, o.scores, o.syntax, o.gold, err), o.gamma);
  for (std::size_t j = 0; j < data.pool.systems.size(); ++j) {
    std::vector<std::pair<double, bool>> items;
    for (const auto& sp : data.pool.sentences)
      for (const auto& c : sp.candidates)
        if (c.probs[j]) items.emplace_back(*c.probs[j], *c.is_gold);
    const std::string& name = data.pool.systems[j];
    if (items.empty()) {
      err << "warning: system " << name << " has no probabilities; no curve\n";
      continue;
    }
    const auto csv = rejection_csv(rejection_curve(items));
    if (o.out.empty())
      out << "# " << name << "\n" << csv;
    else
      write_file(fs::path(o.out) / (name + ".csv"), csv);
  }
  write_manifest(o, o.out.empty() ? fs::path() : fs::path(o.out) / "manifest.json");
  return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.gold.empty()) throw UsageError("oracle needs --gold");
  Loaded loaded = load_inputs(o.systems, o.scores, o.syntax, o.gold, err);
  std::vector<PropsDocument> frames;
  for (const auto& sys : loaded.systems) frames.push_back(sys.props);
  Dataset data = dataset_from(std::move(loaded), o.gamma);
  const PropsDocument& gold = *data.gold;
  for (int p : o.priority)
    if (p < 0 || p >= static_cast<int>(frames.size())) throw UsageError("--priority index out of range");

  auto row = [&](const std::string& title, const PropsDocument& predicted) {
    const auto r = score(predicted, gold);
    char line[200];
    std::snprintf(line, sizeof line, "%-14s %8.2f %8.2f %8.2f %8.2f\n", title.c_str(), r.pprops, r.precision,
                  r.recall, r.f1);
    return std::string(line);
  };
  std::string text = "               PProps     Prec   Recall       F1\n";
  text += "[Combination]\n" + row("oracle", solutions_to_props(data.pool, oracle_combination(data.pool)));
  text += "[Re-Ranking]\n" + row("oracle", oracle_rerank(frames, gold).props);
  text += "[Baselines]\n";
  text += row("recall", solutions_to_props(data.pool, baseline_recall(data.pool, o.priority)));
  text += row("precision", solutions_to_props(data.pool, baseline_precision(data.pool, o.priority)));
  text += "[Systems]\n";
  for (std::size_t j = 0; j < frames.size(); ++j) text += row(data.pool.systems[j], frames[j]);
  emit(o.out, text, out);
  write_manifest(o, beside(o.out));
  return kExitOk;
}

SystemKnobs parse_knob(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ':');) parts.push_back(item);
  if (parts.size() != 3 || parts[0].empty()) throw UsageError("--system-knob expects name:precision:recall");
  SystemKnobs k;
  k.name = parts[0];
  try {
    k.precision = std::stod(parts[1]);
    k.recall = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw UsageError("--system-knob expects name:precision:recall, got '" + text + "'");
  }
  return k;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  if (o.out.empty()) throw UsageError("synth needs --out DIR");
  SyntheticConfig cfg;
  cfg.n_sentences = o.sentences;
  cfg.min_tokens = o.min_tokens;
  cfg.max_tokens = o.max_tokens;
  cfg.min_predicates = o.min_predicates;
  cfg.max_predicates = o.max_predicates;
  cfg.min_args = o.min_args;
  cfg.max_args = o.max_args;
  cfg.label_noise = o.label_noise;
  cfg.boundary_noise = o.boundary_noise;
  cfg.seed = o.seed;
  if (!o.knobs.empty()) {
    cfg.systems.clear();
    for (const auto& k : o.knobs) cfg.systems.push_back(parse_knob(k));
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto corpus = generate_synthetic(cfg);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_file(dir / "gold.props", emit_props(corpus.gold));
  write_file(dir / "syntax.txt", emit_syntax(corpus.sentences));
  for (const auto& sys : corpus.systems) {
    write_file(dir / (sys.name + ".props"), emit_props(sys.props));
    write_file(dir / (sys.name + ".scores"), emit_scores(sys.scores));
  }
  out << "wrote " << corpus.sentences.size() << " sentences and " << corpus.systems.size() << " systems to "
      << dir.string() << "\n";
  write_manifest(o, dir / "manifest.json");
  return kExitOk;
}

int cmd_score(const Options& o, std::ostream& out, std::ostream&) {
  if (o.predicted.empty() || o.gold.empty()) throw UsageError("score needs --predicted and --gold");
  const auto predicted = parse_props(read_input(o.predicted));
  const auto gold = parse_props(read_input(o.gold));
  const auto r = score(predicted, gold);
  std::string text = r.table();
  if (o.bootstrap > 0) {
    const auto b = bootstrap(predicted, gold, o.bootstrap, o.level, o.seed, o.jobs);
    text += "F1 " + b.format() + "\n";
  }
  out << text;
  if (!o.out.empty()) write_file(o.out, r.csv());
  write_manifest(o, beside(o.out));
  return kExitOk;
}

int dispatch(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.command == "pool") return cmd_pool(o, out, err);
  if (o.command == "infer") return cmd_infer(o, out, err);
  if (o.command == "train") return cmd_train(o, out, err);
  if (o.command == "sweep") return cmd_sweep(o, out, err);
  if (o.command == "curves") return cmd_curves(o, out, err);
  if (o.command == "oracle") return cmd_oracle(o, out, err);
  if (o.command == "synth") return cmd_synth(o, out, err);
  if (o.command == "score") return cmd_score(o, out, err);
  throw UsageError("unknown command " + o.command);
}

}  // namespace

std::unique_ptr<CLI::App> build_app(Options& o) {
  o.jobs = default_jobs();
  auto app = std::make_unique<CLI::App>("Combine the outputs of several semantic role labelers", "srlcomb");
  app->require_subcommand(1);

  auto* pool = app->add_subcommand("pool", "Build the candidate pool and print the agreement table");
  add_inputs(pool, o, true);
  pool->add_option("--gold", o.gold, "Gold props file");
  pool->add_option("--out", o.out, "Write the pool here");
  pool->add_option("--stats-out", o.stats_out, "Write the agreement table here instead of stdout");
  add_common(pool, o);

  auto* infer = app->add_subcommand("infer", "Combine the systems into one labeling");
  add_inputs(infer, o, true);
  add_inference(infer, o);
  infer->add_option("--model", o.model, "Trained scorer (engine dp)");
  infer->add_option("--gold", o.gold, "Gold props file: prints scores");
  infer->add_option("--out", o.out, "Props output (default stdout)");
  infer->add_option("--bootstrap", o.bootstrap, "Bootstrap resamples B (0 disables)")->capture_default_str();
  infer->add_option("--level", o.level, "Confidence level")->default_str("0.95");
  add_common(infer, o);

  auto* train = app->add_subcommand("train", "Train a candidate scorer");
  add_inputs(train, o, true);
  train->add_option("--gold", o.gold, "Gold props file")->required();
  train->add_option("--scorer", o.scorer, "svm | perceptron-local | perceptron-global")->required();
  train->add_option("--features", o.features, "Feature groups: all, FS1..FS4 or FS1,FS3")->capture_default_str();
  train->add_option("--epochs", o.epochs, "Perceptron epochs T")->capture_default_str();
  train->add_option("--degree", o.degree, "Polynomial kernel degree d")->capture_default_str();
  train->add_option("--C", o.C, "SVM regularization")->default_str("1");
  train->add_option("--tolerance", o.tolerance, "SVM stopping tolerance")->default_str("0.001");
  train->add_option("--scope", o.scope, "Inference scope during global training: pred | sentence")
      ->capture_default_str();
  train->add_flag("--shuffle", o.shuffle, "Shuffle the training sentences every epoch");
  train->add_option("--dev-system", o.dev_systems, "Validation system output name=path; repeatable");
  train->add_option("--dev-scores", o.dev_scores, "Validation score sidecar name=path; repeatable");
  train->add_option("--dev-syntax", o.dev_syntax, "Validation syntax file");
  train->add_option("--dev-gold", o.dev_gold, "Validation gold props file");
  train->add_option("--out", o.out, "Model file")->required();
  add_common(train, o);

  auto* sweep = app->add_subcommand("sweep", "Precision/recall of constraint satisfaction as O varies");
  add_inputs(sweep, o, true);
  sweep->add_option("--gold", o.gold, "Gold props file")->required();
  sweep->add_option("--scope", o.scope, "pred | sentence")->capture_default_str();
  sweep->add_option("--constraints", o.constraints, "Constraint set (default: scope default)");
  sweep->add_option("--grid", o.grid, "lo:hi:step")->default_str("0:1:0.05");
  sweep->add_option("--node-budget", o.node_budget, "Node budget per sentence")->capture_default_str();
  sweep->add_option("--out", o.out, "CSV output (default stdout)");
  add_common(sweep, o);

  auto* curves = app->add_subcommand("curves", "Accuracy-versus-rejection curves per system");
  add_inputs(curves, o, true);
  curves->add_option("--gold", o.gold, "Gold props file")->required();
  curves->add_option("--out", o.out, "Directory for one CSV per system (default stdout)");
  add_common(curves, o);

  auto* oracle = app->add_subcommand("oracle", "Oracle upper bounds and voting baselines");
  add_inputs(oracle, o, true);
  oracle->add_option("--gold", o.gold, "Gold props file")->required();
  oracle->add_option("--priority", o.priority, "System indices, best first, for baseline tie-breaks");
  oracle->add_option("--out", o.out, "Report output (default stdout)");
  add_common(oracle, o);

  auto* synth = app->add_subcommand("synth", "Generate a synthetic corpus with corrupted system outputs");
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--sentences", o.sentences, "Number of sentences")->capture_default_str();
  synth->add_option("--min-tokens", o.min_tokens)->capture_default_str();
  synth->add_option("--max-tokens", o.max_tokens)->capture_default_str();
  synth->add_option("--min-predicates", o.min_predicates)->capture_default_str();
  synth->add_option("--max-predicates", o.max_predicates)->capture_default_str();
  synth->add_option("--min-args", o.min_args)->capture_default_str();
  synth->add_option("--max-args", o.max_args)->capture_default_str();
  synth->add_option("--system-knob", o.knobs, "name:precision:recall; repeatable (default three systems 0.8/0.75)");
  synth->add_option("--label-noise", o.label_noise)->capture_default_str();
  synth->add_option("--boundary-noise", o.boundary_noise)->capture_default_str();
  add_common(synth, o);

  auto* sc = app->add_subcommand("score", "Score a props file against gold");
  sc->add_option("--predicted", o.predicted, "Predicted props file")->required();
  sc->add_option("--gold", o.gold, "Gold props file")->required();
  sc->add_option("--bootstrap", o.bootstrap, "Bootstrap resamples B (0 disables)")->capture_default_str();
  sc->add_option("--level", o.level, "Confidence level")->default_str("0.95");
  sc->add_option("--out", o.out, "Per-label CSV output");
  add_common(sc, o);

  for (auto* cmd : app->get_subcommands({}))
    cmd->callback([&o, cmd] { o.command = cmd->get_name(); });
  return app;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  auto app = build_app(o);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app->parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app->help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  }
  try {
    return dispatch(o, out, err);
  } catch (const ModelMismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kExitModel;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const AlignmentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const SerializationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace srlcomb::cli

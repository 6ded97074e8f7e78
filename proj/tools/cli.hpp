#pragma once

// Command-line front end: `srlcomb <subcommand> [options]`.
//
// Exit codes: 0 ok, 2 malformed input or arguments, 3 model/vocabulary
// mismatch, 4 search budget exhausted (non-optimal output written).

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srlcomb/defaults.hpp"

namespace srlcomb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFormat = 2;
inline constexpr int kExitModel = 3;
inline constexpr int kExitTimeout = 4;

struct Options {
  std::string command;

  // inputs
  std::vector<std::string> systems;  // name=path
  std::vector<std::string> scores;   // name=path
  std::string syntax;
  std::string gold;
  std::vector<std::string> dev_systems;
  std::vector<std::string> dev_scores;
  std::string dev_syntax;
  std::string dev_gold;
  std::string predicted;

  // outputs
  std::string out;
  std::string stats_out;
  std::string manifest;

  // inference
  std::string engine = "cs";
  std::string scorer = "probsum";
  std::string scope = "pred";
  std::string constraints;  // empty: scope default
  double gamma = defaults::kGamma;
  double O = defaults::kBias;
  std::string model;
  std::uint64_t node_budget = defaults::kNodeBudget;
  std::string grid;
  std::vector<int> priority;

  // training
  std::string features = "all";
  int epochs = defaults::kEpochs;
  int degree = defaults::kKernelDegree;
  double C = defaults::kSvmC;
  double tolerance = defaults::kSvmTolerance;
  bool shuffle = false;

  // evaluation
  int bootstrap = defaults::kBootstrapSamples;
  double level = defaults::kBootstrapLevel;

  // synthetic corpora
  int sentences = 100;
  int min_tokens = 6;
  int max_tokens = 25;
  int min_predicates = 1;
  int max_predicates = 3;
  int min_args = 1;
  int max_args = 4;
  std::vector<std::string> knobs;  // name:precision:recall
  double label_noise = 0.1;
  double boundary_noise = 0.1;

  std::uint64_t seed = defaults::kSeed;
  int jobs = 1;
};

/// The parser with every subcommand registered; `opts` receives the values.
std::unique_ptr<CLI::App> build_app(Options& opts);

/// Parses and runs; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srlcomb::cli

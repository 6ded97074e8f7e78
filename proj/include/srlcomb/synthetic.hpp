#pragma once

// Seeded generator of small annotated corpora plus corrupted "system"
// outputs, for exercising the combiner without licensed data.

#include <cstdint>
#include <string>
#include <vector>

#include "srlcomb/corpus_io.hpp"
#include "srlcomb/model.hpp"

namespace srlcomb {

struct SystemKnobs {
  std::string name;
  double precision = 0.8;
  double recall = 0.75;
};

struct SyntheticConfig {
  int n_sentences = 100;
  int min_tokens = 6;
  int max_tokens = 25;
  int min_predicates = 1;
  int max_predicates = 3;
  int min_args = 1;
  int max_args = 4;
  std::vector<SystemKnobs> systems = {{"M1", 0.8, 0.75}, {"M2", 0.8, 0.75}, {"M3", 0.8, 0.75}};
  // A gold argument a system misses is emitted relabeled with probability
  // label_noise, with a shifted boundary with probability boundary_noise,
  // and dropped otherwise.
  double label_noise = 0.1;
  double boundary_noise = 0.1;
  // Raw scores: correct arguments ~ N(correct_mean, stddev), others ~ N(incorrect_mean, stddev).
  double correct_score_mean = 10.0;
  double incorrect_score_mean = -5.0;
  double score_stddev = 10.0;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on out-of-range knobs or empty ranges.
  void validate() const;
};

struct SyntheticSystem {
  std::string name;
  PropsDocument props;
  ScoreTable scores;
};

struct SyntheticCorpus {
  std::vector<Sentence> sentences;  // syntax layers, predicates attached
  PropsDocument gold;
  std::vector<SyntheticSystem> systems;
};

SyntheticCorpus generate_synthetic(const SyntheticConfig& cfg);

}  // namespace srlcomb

#pragma once

// Column-format corpus I/O.
//
// Props files: one line per token, blank line after every sentence. Column 1
// holds the predicate lemma or "-"; column k+1 holds the bracket tags of the
// k-th predicate: "(LABEL*" opens, "*)" closes, "(LABEL*)" marks a one-token
// argument and "*" everything else.
//
// Syntax files: word, POS, chunk (B-I-O), clause brackets, NE (B-I-O) and an
// optional parse column in "(S(NP*" style.
//
// Score sidecars: `sentIdx predIdx label start end score`, one argument per line.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "srlcomb/model.hpp"

namespace srlcomb {

struct Proposition {
  Predicate predicate;
  std::vector<Argument> arguments;  // canonical order, includes the V argument

  friend bool operator==(const Proposition&, const Proposition&) = default;
};

struct PropsSentence {
  int n_tokens = 0;
  std::vector<Proposition> propositions;  // ordered by predicate position

  friend bool operator==(const PropsSentence&, const PropsSentence&) = default;
};

struct PropsDocument {
  std::vector<PropsSentence> sentences;

  friend bool operator==(const PropsDocument&, const PropsDocument&) = default;
};

PropsDocument parse_props(std::string_view text);

/// Throws SerializationError when a proposition has crossing arguments or a
/// span outside its sentence.
std::string emit_props(const PropsDocument& doc);

std::vector<Sentence> parse_syntax(std::string_view text);
std::string emit_syntax(std::span<const Sentence> sentences);

/// Parse column reconstructed from a tree (phrase nodes only).
std::vector<std::string> parse_column(const ParseNode& root, int n_tokens);

struct ScoreKey {
  int sentence = 0;
  int predicate = 0;
  std::string label;
  Span span;

  friend bool operator==(const ScoreKey&, const ScoreKey&) = default;
  friend auto operator<=>(const ScoreKey&, const ScoreKey&) = default;
};

using ScoreTable = std::map<ScoreKey, double>;

ScoreTable parse_scores(std::string_view text);
std::string emit_scores(const ScoreTable& table);

/// Gives every Sentence the predicates of the matching props sentence.
/// Throws AlignmentError on token-count mismatch.
void attach_predicates(std::vector<Sentence>& sentences, const PropsDocument& props);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace srlcomb

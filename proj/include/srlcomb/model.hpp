#pragma once

// Core domain types shared by every stage of the combiner: spans, role
// labels, sentences with their syntactic layers, pooled candidates, and the
// structural constraints a combined solution must respect.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srlcomb {

// ---------------------------------------------------------------------------
// Spans

/// Token interval, inclusive on both ends.
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  bool contains(int token) const { return start <= token && token <= end; }
  bool valid() const { return 0 <= start && start <= end; }

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

enum class SpanRelation { Equal, Disjoint, AContainsB, BContainsA, Crossing };

SpanRelation span_relation(Span a, Span b);
std::string_view to_string(SpanRelation relation);

// ---------------------------------------------------------------------------
// Role labels

/// A PropBank role label such as A0, AM-TMP, R-A1 or C-AM-LOC.
///
/// `Other` covers the rare non-numbered argument tag AA found in CoNLL data;
/// it takes part in overlap constraints only.
class RoleLabel {
 public:
  enum class Kind { Verb, Core, Adjunct, Reference, Continuation, Other };

  RoleLabel() = default;

  /// Throws std::invalid_argument for text outside the label grammar.
  static RoleLabel parse(std::string_view text);
  static std::optional<RoleLabel> try_parse(std::string_view text);

  Kind kind() const { return kind_; }
  const std::string& text() const { return text_; }

  /// 0..5 for A0..A5, -1 otherwise.
  int core_index() const { return core_; }
  bool is_core() const { return kind_ == Kind::Core; }
  bool is_verb() const { return kind_ == Kind::Verb; }

  /// Referred label of an R-/C- label; the label itself otherwise.
  RoleLabel base() const;

  /// AM-*, R-AM-* and every C-* label: the labels two predicates may not share.
  bool is_shareable_restricted() const;

  friend bool operator==(const RoleLabel& a, const RoleLabel& b) { return a.text_ == b.text_; }
  friend auto operator<=>(const RoleLabel& a, const RoleLabel& b) { return a.text_ <=> b.text_; }

 private:
  Kind kind_ = Kind::Verb;
  std::string text_ = "V";
  int core_ = -1;
};

// ---------------------------------------------------------------------------
// Sentences

struct Token {
  int index = 0;
  std::string form;
  std::string pos;
  std::string chunk = "O";   // B-X / I-X / O
  std::string clause = "*";  // e.g. "(S*", "*S)", "(S(S*"
  std::string ne = "O";      // B-X / I-X / O

  friend bool operator==(const Token&, const Token&) = default;
};

/// Constituent of a full parse. Preterminals are leaves labeled with the POS
/// tag of their single token; phrase nodes always have children.
struct ParseNode {
  std::string label;
  Span span;
  std::vector<ParseNode> children;

  bool is_preterminal() const { return children.empty(); }

  friend bool operator==(const ParseNode&, const ParseNode&) = default;
};

struct Predicate {
  int position = 0;
  std::string lemma;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct Sentence {
  int id = 0;
  std::vector<Token> tokens;
  std::vector<Predicate> predicates;
  std::optional<ParseNode> parse;

  int size() const { return static_cast<int>(tokens.size()); }
};

// ---------------------------------------------------------------------------
// Arguments, candidates and solutions

struct Argument {
  int predicate = 0;  // index into the sentence's predicate list
  RoleLabel label;
  Span span;

  friend bool operator==(const Argument&, const Argument&) = default;
};

/// Canonical argument order: start ascending, longer spans first, then label.
bool canonical_less(const Argument& a, const Argument& b);

/// Sparse binary feature vector: sorted, unique interned feature ids.
struct FeatureVector {
  std::vector<std::uint32_t> ids;

  static FeatureVector from_unsorted(std::vector<std::uint32_t> ids);

  /// Number of shared ids.
  int dot(const FeatureVector& other) const;
  std::size_t size() const { return ids.size(); }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct Candidate {
  int sentence = 0;
  Argument argument;
  std::vector<int> votes;                        // sorted system indices
  std::vector<std::optional<double>> raw_scores;  // one slot per system
  std::vector<std::optional<double>> probs;       // one slot per system
  std::optional<FeatureVector> features;
  std::optional<bool> is_gold;

  int predicate() const { return argument.predicate; }
  const RoleLabel& label() const { return argument.label; }
  const Span& span() const { return argument.span; }
  int vote_count() const { return static_cast<int>(votes.size()); }

  /// Sum of per-system probabilities; absent probabilities count as 0.
  double prob_sum() const;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Solution {
  int sentence = 0;
  std::vector<std::size_t> selected;  // sorted indices into the sentence's candidates
  double objective = 0.0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

// ---------------------------------------------------------------------------
// Constraints
//
//  1  same predicate: spans must be disjoint
//  2  same predicate: at most one of each core label A0..A5
//  3  R-X requires an X of the same predicate
//  4  C-X requires an X of the same predicate starting earlier
//  5  different predicates: spans may nest but never cross
//  6  different predicates may not share an identical AM-*, R-AM-* or C-* argument

inline constexpr int kConstraintCount = 6;

enum class ConstraintMode { Off, Hard, Soft };

struct ConstraintRule {
  ConstraintMode mode = ConstraintMode::Off;
  double penalty = 0.0;  // used when Soft

  friend bool operator==(const ConstraintRule&, const ConstraintRule&) = default;
};

class ConstraintSet {
 public:
  ConstraintSet() = default;

  /// Parses "1+2+5+6" or "1+2+3:soft=0.5"; an item without a suffix (or with
  /// ":hard") is hard. "none" or "" yields the empty set.
  static ConstraintSet parse(std::string_view spec);
  static ConstraintSet hard(std::initializer_list<int> ids);

  const ConstraintRule& rule(int id) const { return rules_.at(id - 1); }
  void set(int id, ConstraintRule rule);

  bool active(int id) const { return rule(id).mode != ConstraintMode::Off; }
  bool is_hard(int id) const { return rule(id).mode == ConstraintMode::Hard; }

  /// Copy keeping only the hard rules.
  ConstraintSet hard_subset() const;

  /// Round-trips through parse().
  std::string to_string() const;

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

 private:
  std::array<ConstraintRule, kConstraintCount> rules_{};
};

namespace constraints {

/// True when constraints 1, 2, 5 or 6 forbid selecting both a and b.
bool pair_violates(int id, const Argument& a, const Argument& b);

/// True when `arg` can only be selected alongside a supporter (constraints 3, 4).
bool needs_support(int id, const Argument& arg);

/// True when `supporter` satisfies `arg`'s requirement under constraint 3 or 4.
bool supports(int id, const Argument& arg, const Argument& supporter);

bool is_pairwise(int id);

}  // namespace constraints

struct Violation {
  int constraint = 0;
  std::vector<std::size_t> candidates;  // indices into the candidate list
  bool hard = false;
  double penalty = 0.0;                 // +inf for hard violations
};

struct ValidationReport {
  std::vector<Violation> violations;

  /// No hard violation.
  bool valid() const;
  std::vector<Violation> hard_violations() const;
  /// Sum of soft penalties.
  double soft_penalty() const;
};

/// Checks a solution against the active constraints. Throws StructuralError
/// when a selected candidate does not belong to `sentence`.
ValidationReport validate(const Solution& solution, std::span<const Candidate> candidates,
                          const ConstraintSet& cs, const Sentence& sentence);

}  // namespace srlcomb

#pragma once

// Combination features FS1..FS6 for pooled candidates. Features are strings
// of the form `group:name=value`, interned into a Vocabulary.

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "srlcomb/calibrate.hpp"
#include "srlcomb/defaults.hpp"
#include "srlcomb/model.hpp"
#include "srlcomb/pool.hpp"

namespace srlcomb {

struct FeatureConfig {
  std::array<bool, 6> groups{true, true, true, true, true, true};  // FS1..FS6
  int ngram_cap = defaults::kNgramCap;
  int path_threshold = defaults::kPathGeneralizeThreshold;

  bool enabled(int group) const { return groups.at(static_cast<std::size_t>(group - 1)); }

  /// FS1..FSk.
  static FeatureConfig cumulative(int k);
  /// "FS1..FS4" (cumulative range), "FS1,FS3,FS6" (list) or "all".
  static FeatureConfig parse(std::string_view text);
  /// Canonical comma list, e.g. "FS1,FS2,FS3".
  std::string to_string() const;
  /// Throws std::invalid_argument when no group is enabled or a knob is out of range.
  void validate() const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// Thread-safe string interner. A frozen vocabulary never grows: unknown
/// strings map to nothing.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(const Vocabulary& other);
  Vocabulary& operator=(const Vocabulary& other);

  std::optional<std::uint32_t> intern(const std::string& feature);
  std::optional<std::uint32_t> find(const std::string& feature) const;
  const std::string& name(std::uint32_t id) const;
  std::size_t size() const;

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  /// `id<TAB>feature` lines in id order.
  std::string dump() const;
  static Vocabulary parse(std::string_view text);

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  bool frozen_ = false;
};

/// Feature strings of candidate `index` of `sp`. `sentence` may be null when
/// no syntax is available (FS4/FS5 then emit absence markers).
std::vector<std::string> feature_strings(const SentencePool& sp, std::size_t index,
                                         std::span<const std::string> systems, const Sentence* sentence,
                                         const IntervalTable& intervals, const FeatureConfig& cfg);

/// Fills `features` of every pooled candidate. Extraction runs on `jobs`
/// threads; interning happens afterwards in sentence order, so ids do not
/// depend on the thread schedule. `sentences` is empty or aligned with the pool.
void extract_pool(CandidatePool& pool, std::span<const Sentence> sentences, const IntervalTable& intervals,
                  const FeatureConfig& cfg, Vocabulary& vocab, int jobs = 1);

/// Interval table from the probabilities of a (training) pool.
IntervalTable build_intervals(const CandidatePool& pool);

/// FNV-1a over the feature configuration and the vocabulary dump.
std::uint64_t feature_fingerprint(const FeatureConfig& cfg, const Vocabulary& vocab);

namespace syntax {

/// Node of the full parse reached by the constituent mapping.
struct MappedNode {
  const ParseNode* node = nullptr;
  bool exact = false;
};

/// Highest node whose span equals `span`; otherwise the largest node with
/// the same start that lies inside `span`.
MappedNode map_constituent(const ParseNode& root, Span span);

/// Path between two nodes of `root`, "^" going up and "!" going down.
struct TreePath {
  std::vector<std::string> up;    // from the argument node up to (excluding) the common ancestor
  std::string ancestor;
  std::vector<std::string> down;  // below the ancestor down to the predicate node
  std::string text() const;
  std::size_t length() const { return up.size() + 1 + down.size(); }
};

std::optional<TreePath> tree_path(const ParseNode& root, const ParseNode* from, const ParseNode* to);

/// Template generalizations of a path with more than `threshold` elements.
std::vector<std::string> generalized_paths(const TreePath& path, int threshold);

}  // namespace syntax

}  // namespace srlcomb

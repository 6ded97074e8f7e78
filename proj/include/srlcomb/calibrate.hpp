#pragma once

// Score-to-probability conversion and calibration diagnostics.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srlcomb/defaults.hpp"

namespace srlcomb {

struct CalibrationConfig {
  double gamma = defaults::kGamma;
  // Score of the implicit "not an argument" class when a system reports a
  // single number per proposed argument.
  double background = 0.0;
};

/// exp(gamma * s_i) / sum_j exp(gamma * s_j), evaluated with max-subtraction.
/// Throws std::invalid_argument on empty or non-finite input.
std::vector<double> softmax(std::span<const double> scores, double gamma);

/// Two-class softmax of `score` against the background score.
double argument_probability(double score, const CalibrationConfig& cfg);

struct RejectionPoint {
  int rejection_pct = 0;
  double accuracy = 0.0;
};

/// Accuracy of the kept items when the lowest-probability n% are discarded,
/// for n = 0, 5, ..., 95. Ties keep input order. Throws on empty input.
std::vector<RejectionPoint> rejection_curve(std::span<const std::pair<double, bool>> items);

/// CSV with header `rejection_pct,accuracy`.
std::string rejection_csv(std::span<const RejectionPoint> curve);

/// Equal-frequency probability intervals per (system, label): four cut points
/// at the 20/40/60/80th percentiles split observed probabilities into five
/// equally populated bins.
class IntervalTable {
 public:
  struct Entry {
    std::array<double, 4> cuts{0.2, 0.4, 0.6, 0.8};
    std::size_t observations = 0;
    bool degenerate = false;  // fewer than 5 observations: all cuts equal
  };

  struct Observation {
    std::string system;
    std::string label;
    double probability = 0.0;
  };

  static IntervalTable build(std::span<const Observation> observations);

  /// Interval 0..4, or nullopt when the system gave no probability.
  /// Pairs never observed during build fall back to fixed cuts 0.2/0.4/0.6/0.8.
  std::optional<int> discretize(std::optional<double> p, const std::string& system,
                                const std::string& label) const;

  const std::map<std::pair<std::string, std::string>, Entry>& entries() const { return entries_; }

  /// Line format: `system<TAB>label<TAB>n<TAB>degenerate<TAB>c1 c2 c3 c4`.
  std::string serialize() const;
  static IntervalTable parse(std::string_view text);

  friend bool operator==(const IntervalTable& a, const IntervalTable& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (auto ia = a.entries_.begin(), ib = b.entries_.begin(); ia != a.entries_.end(); ++ia, ++ib)
      if (ia->first != ib->first || ia->second.cuts != ib->second.cuts ||
          ia->second.observations != ib->second.observations || ia->second.degenerate != ib->second.degenerate)
        return false;
    return true;
  }

 private:
  std::map<std::pair<std::string, std::string>, Entry> entries_;
};

}  // namespace srlcomb

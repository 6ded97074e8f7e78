#include "srlcomb/calibrate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "srlcomb/corpus_io.hpp"
#include "srlcomb/errors.hpp"

namespace srlcomb {

std::vector<double> softmax(std::span<const double> scores, double gamma) {
  if (scores.empty()) throw std::invalid_argument("softmax of an empty score list");
  if (!std::isfinite(gamma)) throw std::invalid_argument("softmax gamma must be finite");
  double top = -std::numeric_limits<double>::infinity();
  for (double s : scores) {
    if (!std::isfinite(s)) throw std::invalid_argument("softmax score is not finite");
    top = std::max(top, gamma * s);
  }
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(gamma * scores[i] - top);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

double argument_probability(double score, const CalibrationConfig& cfg) {
  const double pair[2] = {score, cfg.background};
  return softmax(pair, cfg.gamma)[0];
}

std::vector<RejectionPoint> rejection_curve(std::span<const std::pair<double, bool>> items) {
  if (items.empty()) throw std::invalid_argument("rejection curve of an empty item list");
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double p = items[i].first;
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0,1]");
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].first > items[b].first; });
  std::vector<std::size_t> correct_prefix(order.size() + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i)
    correct_prefix[i + 1] = correct_prefix[i] + (items[order[i]].second ? 1 : 0);

  std::vector<RejectionPoint> curve;
  const std::size_t n = items.size();
  for (int pct = 0; pct < 100; pct += 5) {
    std::size_t kept = (n * static_cast<std::size_t>(100 - pct) + 99) / 100;
    kept = std::max<std::size_t>(kept, 1);
    curve.push_back({pct, static_cast<double>(correct_prefix[kept]) / static_cast<double>(kept)});
  }
  return curve;
}

std::string rejection_csv(std::span<const RejectionPoint> curve) {
  std::string out = "rejection_pct,accuracy\n";
  for (const auto& point : curve) out += std::to_string(point.rejection_pct) + "," + format_double(point.accuracy) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

IntervalTable IntervalTable::build(std::span<const Observation> observations) {
  std::map<std::pair<std::string, std::string>, std::vector<double>> grouped;
  for (const auto& obs : observations) grouped[{obs.system, obs.label}].push_back(obs.probability);

  IntervalTable table;
  for (auto& [key, values] : grouped) {
    std::sort(values.begin(), values.end());
    Entry entry;
    entry.observations = values.size();
    if (values.size() < 5) {
      entry.degenerate = true;
      const double median = values[values.size() / 2];
      entry.cuts.fill(median);
    } else {
      const std::size_t n = values.size();
      for (int k = 1; k <= 4; ++k) {
        // nearest-rank percentile
        std::size_t rank = (n * static_cast<std::size_t>(k) * 20 + 99) / 100;
        entry.cuts[k - 1] = values[rank - 1];
      }
    }
    table.entries_.emplace(key, entry);
  }
  return table;
}

std::optional<int> IntervalTable::discretize(std::optional<double> p, const std::string& system,
                                             const std::string& label) const {
  if (!p) return std::nullopt;
  auto it = entries_.find({system, label});
  const std::array<double, 4> cuts = it == entries_.end() ? Entry{}.cuts : it->second.cuts;
  int index = 0;
  while (index < 4 && *p > cuts[index]) ++index;
  return index;
}

std::string IntervalTable::serialize() const {
  std::string out;
  for (const auto& [key, entry] : entries_) {
    out += key.first + '\t' + key.second + '\t' + std::to_string(entry.observations) + '\t' +
           (entry.degenerate ? "1" : "0") + '\t';
    for (int k = 0; k < 4; ++k) out += (k ? " " : "") + format_double(entry.cuts[k]);
    out += '\n';
  }
  return out;
}

IntervalTable IntervalTable::parse(std::string_view text) {
  IntervalTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string system, label;
    Entry entry;
    int degenerate = 0;
    if (!(fields >> system >> label >> entry.observations >> degenerate >> entry.cuts[0] >> entry.cuts[1] >>
          entry.cuts[2] >> entry.cuts[3]))
      throw ParseError("malformed interval table line", number);
    entry.degenerate = degenerate != 0;
    table.entries_[{system, label}] = entry;
  }
  return table;
}

}  // namespace srlcomb

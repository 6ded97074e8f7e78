#include "srlcomb/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "srlcomb/errors.hpp"

namespace srlcomb {

SpanRelation span_relation(Span a, Span b) {
  if (a == b) return SpanRelation::Equal;
  if (a.end < b.start || b.end < a.start) return SpanRelation::Disjoint;
  if (a.start <= b.start && b.end <= a.end) return SpanRelation::AContainsB;
  if (b.start <= a.start && a.end <= b.end) return SpanRelation::BContainsA;
  return SpanRelation::Crossing;
}

std::string_view to_string(SpanRelation relation) {
  switch (relation) {
    case SpanRelation::Equal: return "Equal";
    case SpanRelation::Disjoint: return "Disjoint";
    case SpanRelation::AContainsB: return "AContainsB";
    case SpanRelation::BContainsA: return "BContainsA";
    case SpanRelation::Crossing: return "Crossing";
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

bool is_tag_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '_' || c == '$';
}

// Labels that may follow R- or C-.
std::optional<RoleLabel::Kind> plain_kind(std::string_view text, int& core) {
  core = -1;
  if (text == "V") return RoleLabel::Kind::Verb;
  if (text == "AA") return RoleLabel::Kind::Other;
  if (text.size() == 2 && text[0] == 'A' && text[1] >= '0' && text[1] <= '5') {
    core = text[1] - '0';
    return RoleLabel::Kind::Core;
  }
  if (text.size() > 3 && text.substr(0, 3) == "AM-") {
    for (char c : text.substr(3))
      if (!is_tag_char(c)) return std::nullopt;
    return RoleLabel::Kind::Adjunct;
  }
  return std::nullopt;
}

}  // namespace

std::optional<RoleLabel> RoleLabel::try_parse(std::string_view text) {
  RoleLabel label;
  int core = -1;
  if (text.size() > 2 && (text.substr(0, 2) == "R-" || text.substr(0, 2) == "C-")) {
    auto base = plain_kind(text.substr(2), core);
    if (!base) return std::nullopt;
    label.kind_ = text[0] == 'R' ? Kind::Reference : Kind::Continuation;
    label.core_ = -1;
  } else {
    auto kind = plain_kind(text, core);
    if (!kind) return std::nullopt;
    label.kind_ = *kind;
    label.core_ = core;
  }
  label.text_ = std::string(text);
  return label;
}

RoleLabel RoleLabel::parse(std::string_view text) {
  auto label = try_parse(text);
  if (!label) throw std::invalid_argument("invalid role label '" + std::string(text) + "'");
  return *label;
}

RoleLabel RoleLabel::base() const {
  if (kind_ == Kind::Reference || kind_ == Kind::Continuation)
    return parse(std::string_view(text_).substr(2));
  return *this;
}

bool RoleLabel::is_shareable_restricted() const {
  switch (kind_) {
    case Kind::Adjunct:
    case Kind::Continuation:
      return true;
    case Kind::Reference:
      return base().kind() == Kind::Adjunct;
    default:
      return false;
  }
}

bool canonical_less(const Argument& a, const Argument& b) {
  if (a.span.start != b.span.start) return a.span.start < b.span.start;
  if (a.span.end != b.span.end) return a.span.end > b.span.end;
  return a.label < b.label;
}

// ---------------------------------------------------------------------------

FeatureVector FeatureVector::from_unsorted(std::vector<std::uint32_t> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return FeatureVector{std::move(ids)};
}

int FeatureVector::dot(const FeatureVector& other) const {
  int count = 0;
  auto a = ids.begin();
  auto b = other.ids.begin();
  while (a != ids.end() && b != other.ids.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

double Candidate::prob_sum() const {
  double sum = 0.0;
  for (const auto& p : probs)
    if (p) sum += *p;
  return sum;
}

// ---------------------------------------------------------------------------

ConstraintSet ConstraintSet::hard(std::initializer_list<int> ids) {
  ConstraintSet cs;
  for (int id : ids) cs.set(id, {ConstraintMode::Hard, 0.0});
  return cs;
}

void ConstraintSet::set(int id, ConstraintRule rule) {
  if (id < 1 || id > kConstraintCount)
    throw std::invalid_argument("constraint id out of range: " + std::to_string(id));
  if (rule.mode == ConstraintMode::Soft && (!std::isfinite(rule.penalty) || rule.penalty < 0.0))
    throw std::invalid_argument("soft penalty must be finite and non-negative");
  rules_[id - 1] = rule;
}

ConstraintSet ConstraintSet::parse(std::string_view spec) {
  ConstraintSet cs;
  if (spec.empty() || spec == "none") return cs;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t plus = spec.find('+', pos);
    std::string_view item = spec.substr(pos, plus == std::string_view::npos ? spec.npos : plus - pos);
    if (item.empty()) throw std::invalid_argument("empty item in constraint spec");
    std::string_view id_text = item.substr(0, item.find(':'));
    int id = 0;
    auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc() || ptr != id_text.data() + id_text.size())
      throw std::invalid_argument("bad constraint id '" + std::string(id_text) + "'");
    ConstraintRule rule{ConstraintMode::Hard, 0.0};
    if (item.size() > id_text.size()) {
      std::string_view mode = item.substr(id_text.size() + 1);
      if (mode == "hard") {
      } else if (mode.substr(0, 5) == "soft=") {
        std::string value(mode.substr(5));
        std::size_t used = 0;
        double penalty = 0.0;
        try {
          penalty = std::stod(value, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != value.size() || value.empty())
          throw std::invalid_argument("bad soft penalty '" + value + "'");
        rule = {ConstraintMode::Soft, penalty};
      } else {
        throw std::invalid_argument("bad constraint mode '" + std::string(mode) + "'");
      }
    }
    cs.set(id, rule);
    if (plus == std::string_view::npos) break;
    pos = plus + 1;
  }
  return cs;
}

ConstraintSet ConstraintSet::hard_subset() const {
  ConstraintSet out;
  for (int id = 1; id <= kConstraintCount; ++id)
    if (is_hard(id)) out.set(id, rule(id));
  return out;
}

std::string ConstraintSet::to_string() const {
  std::string out;
  for (int id = 1; id <= kConstraintCount; ++id) {
    const auto& r = rule(id);
    if (r.mode == ConstraintMode::Off) continue;
    if (!out.empty()) out += '+';
    out += std::to_string(id);
    if (r.mode == ConstraintMode::Soft) {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, r.penalty);
      out += ":soft=" + std::string(buf, res.ptr);
    }
  }
  return out.empty() ? "none" : out;
}

// ---------------------------------------------------------------------------

namespace constraints {

bool is_pairwise(int id) { return id == 1 || id == 2 || id == 5 || id == 6; }

bool pair_violates(int id, const Argument& a, const Argument& b) {
  const bool same = a.predicate == b.predicate;
  switch (id) {
    case 1:
      return same && span_relation(a.span, b.span) != SpanRelation::Disjoint;
    case 2:
      return same && a.label.is_core() && a.label.core_index() == b.label.core_index();
    case 5:
      return !same && span_relation(a.span, b.span) == SpanRelation::Crossing;
    case 6:
      return !same && a.span == b.span && a.label == b.label && a.label.is_shareable_restricted();
    default:
      return false;
  }
}

bool needs_support(int id, const Argument& arg) {
  if (id == 3) return arg.label.kind() == RoleLabel::Kind::Reference;
  if (id == 4) return arg.label.kind() == RoleLabel::Kind::Continuation;
  return false;
}

bool supports(int id, const Argument& arg, const Argument& supporter) {
  if (!needs_support(id, arg) || supporter.predicate != arg.predicate) return false;
  if (supporter.label != arg.label.base()) return false;
  if (id == 4) return supporter.span.start < arg.span.start;
  return true;
}

}  // namespace constraints

bool ValidationReport::valid() const {
  return std::none_of(violations.begin(), violations.end(), [](const Violation& v) { return v.hard; });
}

std::vector<Violation> ValidationReport::hard_violations() const {
  std::vector<Violation> out;
  for (const auto& v : violations)
    if (v.hard) out.push_back(v);
  return out;
}

double ValidationReport::soft_penalty() const {
  double total = 0.0;
  for (const auto& v : violations)
    if (!v.hard) total += v.penalty;
  return total;
}

ValidationReport validate(const Solution& solution, std::span<const Candidate> candidates,
                          const ConstraintSet& cs, const Sentence& sentence) {
  for (std::size_t idx : solution.selected) {
    if (idx >= candidates.size())
      throw StructuralError("selected index " + std::to_string(idx) + " outside candidate list");
    const Candidate& c = candidates[idx];
    if (c.sentence != sentence.id || solution.sentence != sentence.id)
      throw StructuralError("solution for sentence " + std::to_string(solution.sentence) + " selects a candidate of sentence " +
                            std::to_string(c.sentence) + ", validated against sentence " + std::to_string(sentence.id));
    if (c.predicate() < 0 || c.predicate() >= static_cast<int>(sentence.predicates.size()))
      throw StructuralError("candidate predicate index out of range");
    if (!c.span().valid() || c.span().end >= sentence.size())
      throw StructuralError("candidate span outside sentence");
  }

  ValidationReport report;
  auto add = [&](int id, std::vector<std::size_t> members) {
    const auto& rule = cs.rule(id);
    const bool hard = rule.mode == ConstraintMode::Hard;
    report.violations.push_back(
        {id, std::move(members), hard, hard ? std::numeric_limits<double>::infinity() : rule.penalty});
  };

  const auto& sel = solution.selected;
  for (int id = 1; id <= kConstraintCount; ++id) {
    if (!cs.active(id)) continue;
    if (constraints::is_pairwise(id)) {
      for (std::size_t i = 0; i < sel.size(); ++i)
        for (std::size_t j = i + 1; j < sel.size(); ++j)
          if (constraints::pair_violates(id, candidates[sel[i]].argument, candidates[sel[j]].argument))
            add(id, {sel[i], sel[j]});
    } else {
      for (std::size_t r : sel) {
        const Argument& arg = candidates[r].argument;
        if (!constraints::needs_support(id, arg)) continue;
        bool ok = std::any_of(sel.begin(), sel.end(), [&](std::size_t s) {
          return constraints::supports(id, arg, candidates[s].argument);
        });
        if (!ok) add(id, {r});
      }
    }
  }
  return report;
}

}  // namespace srlcomb

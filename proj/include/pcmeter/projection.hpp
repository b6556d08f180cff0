#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcmeter/metric.hpp"
#include "pcmeter/model.hpp"
#include "pcmeter/rule.hpp"

namespace pcmeter {

enum class Direction { kLowerIsBetter, kHigherIsBetter };

std::string_view to_string(Direction d);

struct Band {
  // Inclusive bound on the compliant side: an upper bound when lower is
  // better, a lower bound when higher is better. nullopt covers whatever
  // remains of the domain and may only appear last.
  std::optional<double> bound;
  double score = 0.0;

  friend bool operator==(const Band&, const Band&) = default;
};

// Piecewise-constant scoring. Bands are scanned in order and the first one
// whose bound covers the value wins.
struct NumericBands {
  Direction direction = Direction::kLowerIsBetter;
  std::vector<Band> bands;
  // When non-empty, the value is divided by the sum of these attributes of
  // the same event before scanning (e.g. amount paid against amount due).
  std::vector<std::string> relative_to;

  friend bool operator==(const NumericBands&, const NumericBands&) = default;
};

struct CategoricalMap {
  std::vector<std::string> scale;  // worst to best
  std::map<std::string, double> scores;
  bool default_scheme = false;

  friend bool operator==(const CategoricalMap&, const CategoricalMap&) = default;
};

struct RuleRef {
  std::string rule_name;
  friend bool operator==(const RuleRef&, const RuleRef&) = default;
};

struct Constant {
  double score = 0.0;
  friend bool operator==(const Constant&, const Constant&) = default;
};

using ProjectionFn = std::variant<NumericBands, CategoricalMap, RuleRef, Constant>;

// Finding produced by static checks on specs and projections.
struct Finding {
  enum class Severity { kError, kWarning };

  Severity severity = Severity::kError;
  std::string code;  // e.g. "NON_MONOTONE_BANDS"
  std::string path;  // JSON-style path of the offending element
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

std::string_view to_string(Finding::Severity s);

// Partial-compliance score of one attribute value. `context` supplies the
// event's other attributes (raw values and already projected scores) for
// relative bands and rule references.
//
// Throws Error(kKindMismatch) when the value kind does not fit the
// projection, Error(kUnknownLevel) for a level outside the scale and
// Error(kUnboundReference) when a referenced attribute is missing.
Metric project(const ProjectionFn& fn, const AttributeValue& value,
               const rule::RuleTable& rules, const rule::Bindings& context = {});

// Maps level i (1-based) of k levels to i/k. Throws Error(kEmptyScale) for
// fewer than two levels.
CategoricalMap default_scale_map(const std::vector<std::string>& levels);

// Structural and monotonicity findings for a projection; non-band variants
// only get range checks. `path` prefixes each finding's path.
std::vector<Finding> check_monotone(const ProjectionFn& fn, const std::string& path = "$");

}  // namespace pcmeter

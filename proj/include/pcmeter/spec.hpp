#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pcmeter/metric.hpp"
#include "pcmeter/model.hpp"
#include "pcmeter/projection.hpp"
#include "pcmeter/rule.hpp"

namespace pcmeter {

inline constexpr std::string_view kAnyTask = "*";

struct AttributeSpec {
  std::string task_selector{kAnyTask};
  std::string attribute_name;
  DimensionId dimension = DimensionId::temporal();
  std::optional<ProjectionFn> projection;  // absent only for meta attributes
  double weight = 1.0;
  std::optional<CutoffThreshold> cutoff_override;
  bool meta = false;  // informational, never scored

  friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

enum class AggregatorKind { kAverage, kWeightedAverage, kProduct, kMin, kMax, kRule };

std::string_view to_string(AggregatorKind kind);
// Throws Error(kInvalidValue) for an unknown name.
AggregatorKind aggregator_kind_from_string(std::string_view name);

struct AggregatorChoice {
  AggregatorKind kind = AggregatorKind::kAverage;
  std::string rule_name;  // required iff kind == kRule
  // Per-dimension weights for weighted-average over dimensions; missing
  // dimensions weigh 1. Attribute-level weighting uses AttributeSpec::weight.
  std::map<std::string, double> weights;

  friend bool operator==(const AggregatorChoice&, const AggregatorChoice&) = default;
};

struct ComplianceSpec {
  std::string spec_id;
  std::vector<AttributeSpec> attribute_specs;
  std::map<DimensionId, CutoffThreshold> dimension_defaults;
  AggregatorChoice attribute_aggregator;  // attributes -> dimension metric
  AggregatorChoice dimension_aggregator;  // dimensions -> T-measure
  AggregatorChoice trace_aggregator;      // dimension minima -> tau-measure
  rule::RuleTable rules;

  friend bool operator==(const ComplianceSpec&, const ComplianceSpec&) = default;
};

// One finding per violated invariant; warnings do not make a spec invalid.
std::vector<Finding> validate_spec(const ComplianceSpec& spec);

bool has_errors(const std::vector<Finding>& findings);

// Exact task match first, then the wildcard row; nullptr when neither exists.
const AttributeSpec* resolve_attribute_spec(const ComplianceSpec& spec, std::string_view task_id,
                                            std::string_view attribute_name);

// Dimensions of the scored (non-meta) attributes present on the event, in
// lexicographic order.
std::set<DimensionId> dimensions_of_task(const ComplianceSpec& spec, const TaskEvent& event);

// Override first, then the dimension default.
std::optional<CutoffThreshold> resolve_cutoff(const ComplianceSpec& spec,
                                              const AttributeSpec& attribute);

}  // namespace pcmeter

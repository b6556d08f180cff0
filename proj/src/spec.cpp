#include "pcmeter/spec.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "pcmeter/error.hpp"

namespace pcmeter {

std::string_view to_string(AggregatorKind kind) {
  switch (kind) {
    case AggregatorKind::kAverage: return "average";
    case AggregatorKind::kWeightedAverage: return "weighted-average";
    case AggregatorKind::kProduct: return "product";
    case AggregatorKind::kMin: return "min";
    case AggregatorKind::kMax: return "max";
    case AggregatorKind::kRule: return "rule";
  }
  return "average";
}

AggregatorKind aggregator_kind_from_string(std::string_view name) {
  for (auto kind : {AggregatorKind::kAverage, AggregatorKind::kWeightedAverage,
                    AggregatorKind::kProduct, AggregatorKind::kMin, AggregatorKind::kMax,
                    AggregatorKind::kRule}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::kInvalidValue, "unknown aggregator '" + std::string(name) + "'");
}

namespace {

void error(std::vector<Finding>& out, std::string code, std::string path, std::string message) {
  out.push_back({Finding::Severity::kError, std::move(code), std::move(path), std::move(message)});
}

void warning(std::vector<Finding>& out, std::string code, std::string path, std::string message) {
  out.push_back(
      {Finding::Severity::kWarning, std::move(code), std::move(path), std::move(message)});
}

void check_cutoff(const CutoffThreshold& ct, const std::string& path, std::vector<Finding>& out) {
  auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_unit(ct.cutoff)) error(out, "CUTOFF_OUT_OF_RANGE", path + ".cutoff", "cutoff outside [0,1]");
  if (!in_unit(ct.threshold)) {
    error(out, "CUTOFF_OUT_OF_RANGE", path + ".threshold", "threshold outside [0,1]");
  }
  if (ct.cutoff + ct.threshold > 1.0 + kEpsilon) {
    error(out, "CUTOFF_PLUS_THRESHOLD_EXCEEDS_ONE", path,
          "cutoff + threshold = " + format_number(ct.cutoff + ct.threshold) +
              " leaves full compliance unreachable");
  }
}

void check_aggregator(const ComplianceSpec& spec, const AggregatorChoice& choice,
                      const std::string& path, std::vector<Finding>& out) {
  if (choice.kind == AggregatorKind::kRule) {
    if (choice.rule_name.empty()) {
      error(out, "MISSING_RULE_NAME", path, "rule aggregator names no rule");
    } else if (!spec.rules.count(choice.rule_name)) {
      error(out, "UNRESOLVED_RULE", path, "rule '" + choice.rule_name + "' is not defined");
    }
  }
  if (choice.kind == AggregatorKind::kMin || choice.kind == AggregatorKind::kMax) {
    warning(out, "EXTREMAL_AGGREGATOR", path,
            std::string(to_string(choice.kind)) +
                " lets a single input decide the aggregate on its own");
  }
  if (!choice.weights.empty()) {
    double total = 0.0;
    for (const auto& [name, w] : choice.weights) {
      if (!std::isfinite(w) || w < 0.0) {
        error(out, "NEGATIVE_WEIGHT", path + ".weights." + name, "weight must be >= 0");
      } else {
        total += w;
      }
    }
    if (total <= 0.0) error(out, "ZERO_WEIGHT_SUM", path + ".weights", "weights sum to zero");
  }
}

}  // namespace

std::vector<Finding> validate_spec(const ComplianceSpec& spec) {
  std::vector<Finding> out;
  if (spec.spec_id.empty()) error(out, "MISSING_SPEC_ID", "$.specId", "specId is empty");

  for (const auto& [dim, ct] : spec.dimension_defaults) {
    check_cutoff(ct, "$.dimensions." + dim.name(), out);
  }

  check_aggregator(spec, spec.attribute_aggregator, "$.aggregators.attribute", out);
  check_aggregator(spec, spec.dimension_aggregator, "$.aggregators.dimension", out);
  check_aggregator(spec, spec.trace_aggregator, "$.aggregators.trace", out);

  std::set<std::pair<std::string, std::string>> keys;
  for (std::size_t i = 0; i < spec.attribute_specs.size(); ++i) {
    const auto& attr = spec.attribute_specs[i];
    const std::string path = "$.attributes[" + std::to_string(i) + "]";
    if (attr.attribute_name.empty()) error(out, "EMPTY_ATTRIBUTE_NAME", path + ".name", "empty name");
    if (attr.task_selector.empty()) error(out, "EMPTY_TASK_SELECTOR", path + ".task", "empty task");
    if (!keys.emplace(attr.task_selector, attr.attribute_name).second) {
      error(out, "DUPLICATE_ATTRIBUTE_SPEC", path,
            "(" + attr.task_selector + ", " + attr.attribute_name + ") declared twice");
    }
    if (!(attr.weight > 0.0) || !std::isfinite(attr.weight)) {
      error(out, "NON_POSITIVE_WEIGHT", path + ".weight", "weight must be > 0");
    }
    if (attr.cutoff_override) check_cutoff(*attr.cutoff_override, path, out);
    if (attr.meta) continue;

    if (!attr.projection) {
      error(out, "MISSING_PROJECTION", path + ".projection",
            "scored attribute '" + attr.attribute_name + "' has no projection");
    } else {
      for (auto& f : check_monotone(*attr.projection, path + ".projection")) {
        out.push_back(std::move(f));
      }
      if (const auto* ref = std::get_if<RuleRef>(&*attr.projection);
          ref && !spec.rules.count(ref->rule_name)) {
        error(out, "UNRESOLVED_RULE", path + ".projection.rule",
              "rule '" + ref->rule_name + "' is not defined");
      }
    }
    if (!resolve_cutoff(spec, attr)) {
      error(out, "MISSING_CUTOFF", path,
            "no cutoff/threshold for dimension '" + attr.dimension.name() + "'");
    }
  }
  return out;
}

bool has_errors(const std::vector<Finding>& findings) {
  for (const auto& f : findings) {
    if (f.severity == Finding::Severity::kError) return true;
  }
  return false;
}

const AttributeSpec* resolve_attribute_spec(const ComplianceSpec& spec, std::string_view task_id,
                                            std::string_view attribute_name) {
  const AttributeSpec* wildcard = nullptr;
  for (const auto& attr : spec.attribute_specs) {
    if (attr.attribute_name != attribute_name) continue;
    if (attr.task_selector == task_id) return &attr;
    if (attr.task_selector == kAnyTask && !wildcard) wildcard = &attr;
  }
  return wildcard;
}

std::set<DimensionId> dimensions_of_task(const ComplianceSpec& spec, const TaskEvent& event) {
  std::set<DimensionId> dims;
  for (const auto& value : event.attributes) {
    const auto* attr = resolve_attribute_spec(spec, event.task_id, value.name);
    if (attr && !attr->meta) dims.insert(attr->dimension);
  }
  return dims;
}

std::optional<CutoffThreshold> resolve_cutoff(const ComplianceSpec& spec,
                                              const AttributeSpec& attribute) {
  if (attribute.cutoff_override) return attribute.cutoff_override;
  auto it = spec.dimension_defaults.find(attribute.dimension);
  if (it == spec.dimension_defaults.end()) return std::nullopt;
  return it->second;
}

}  // namespace pcmeter

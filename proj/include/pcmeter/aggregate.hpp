#pragma once

#include <optional>
#include <span>
#include <string>

#include "pcmeter/metric.hpp"
#include "pcmeter/rule.hpp"
#include "pcmeter/spec.hpp"

namespace pcmeter {

// One operand of an aggregation: an attribute score (with its raw value)
// or a dimension metric.
struct AggregateInput {
  std::string name;
  Metric score;
  std::optional<double> raw;
  double weight = 1.0;
};

// Combines the non-Null scores of `inputs` with the chosen operator. All
// operands Null (or no operands) gives Null. Rule aggregators see every
// operand as phi(name) and, when present, val(name).
Metric aggregate(const AggregatorChoice& choice, std::span<const AggregateInput> inputs,
                 const rule::RuleTable& rules);

}  // namespace pcmeter

#include "pcmeter/aggregate.hpp"

#include <algorithm>

#include "pcmeter/error.hpp"

namespace pcmeter {

Metric aggregate(const AggregatorChoice& choice, std::span<const AggregateInput> inputs,
                 const rule::RuleTable& rules) {
  if (choice.kind == AggregatorKind::kRule) {
    auto it = rules.find(choice.rule_name);
    if (it == rules.end()) {
      throw Error(ErrorCode::kUnboundReference, "rule '" + choice.rule_name + "' is not defined");
    }
    rule::Bindings bindings;
    for (const auto& in : inputs) bindings[in.name] = rule::Binding{in.raw, in.score};
    return rule::evaluate(it->second, bindings);
  }

  double sum = 0.0;
  double weight_sum = 0.0;
  double product = 1.0;
  double lo = 1.0;
  double hi = 0.0;
  std::size_t n = 0;
  for (const auto& in : inputs) {
    if (in.score.is_null()) continue;
    const double v = in.score.value();
    ++n;
    sum += v;
    product *= v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    weight_sum += in.weight;
  }
  if (n == 0) return Metric::null();

  switch (choice.kind) {
    case AggregatorKind::kAverage:
      return Metric(sum / static_cast<double>(n));
    case AggregatorKind::kWeightedAverage: {
      if (weight_sum <= 0.0) return Metric::null();
      double acc = 0.0;
      for (const auto& in : inputs) {
        if (!in.score.is_null()) acc += in.weight * in.score.value();
      }
      return Metric(acc / weight_sum);
    }
    case AggregatorKind::kProduct:
      return Metric(product);
    case AggregatorKind::kMin:
      return Metric(lo);
    case AggregatorKind::kMax:
      return Metric(hi);
    case AggregatorKind::kRule:
      break;
  }
  return Metric::null();
}

}  // namespace pcmeter

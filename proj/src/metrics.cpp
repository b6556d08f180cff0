#include "pcmeter/metrics.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "pcmeter/aggregate.hpp"
#include "pcmeter/error.hpp"

namespace pcmeter {

namespace {

struct ScoredAttribute {
  const AttributeValue* value;
  const AttributeSpec* spec;
  Metric score;
};

[[noreturn]] void rethrow_annotated(const Error& e, const TaskEvent& event,
                                    const std::string& attribute) {
  throw Error(e.code(), "task " + event.task_id + ", attribute " + attribute + ": " + e.message());
}

// Scores every non-meta attribute of the event that the spec knows about.
// Rule projections run last so they can reference the others' scores.
std::vector<ScoredAttribute> score_event(const TaskEvent& event, const ComplianceSpec& spec) {
  rule::Bindings context;
  for (const auto& value : event.attributes) {
    auto& binding = context[value.name];
    if (const auto* num = std::get_if<Number>(&value.value)) binding.raw = num->value;
  }

  std::vector<ScoredAttribute> scored;
  for (const auto& value : event.attributes) {
    const auto* attr = resolve_attribute_spec(spec, event.task_id, value.name);
    if (!attr || attr->meta) continue;
    scored.push_back({&value, attr, Metric::null()});
  }

  auto run = [&](ScoredAttribute& s) {
    try {
      s.score = project(*s.spec->projection, *s.value, spec.rules, context);
    } catch (const Error& e) {
      rethrow_annotated(e, event, s.value->name);
    }
    context[s.value->name].projected = s.score;
  };
  for (auto& s : scored) {
    if (s.spec->projection && !std::holds_alternative<RuleRef>(*s.spec->projection)) run(s);
  }
  for (auto& s : scored) {
    if (s.spec->projection && std::holds_alternative<RuleRef>(*s.spec->projection)) run(s);
  }
  return scored;
}

double choice_weight(const AggregatorChoice& choice, const std::string& name, double fallback) {
  auto it = choice.weights.find(name);
  return it == choice.weights.end() ? fallback : it->second;
}

DimensionMetric dimension_metric(const TaskEvent& event, const DimensionId& dimension,
                                 const ComplianceSpec& spec,
                                 const std::vector<ScoredAttribute>& scored) {
  DimensionMetric out;
  out.task_id = event.task_id;
  out.dimension = dimension;

  std::vector<AggregateInput> inputs;
  std::optional<CutoffThreshold> cutoff;
  for (const auto& s : scored) {
    if (s.spec->dimension != dimension) continue;
    out.contributing.push_back({s.value->name, s.score});
    AggregateInput in{s.value->name, s.score, std::nullopt,
                      choice_weight(spec.attribute_aggregator, s.value->name, s.spec->weight)};
    if (const auto* num = std::get_if<Number>(&s.value->value)) in.raw = num->value;
    inputs.push_back(std::move(in));
    if (s.spec->cutoff_override && !cutoff) cutoff = s.spec->cutoff_override;
  }
  if (!cutoff) {
    auto it = spec.dimension_defaults.find(dimension);
    if (it != spec.dimension_defaults.end()) cutoff = it->second;
  }

  try {
    out.value = aggregate(spec.attribute_aggregator, inputs, spec.rules);
  } catch (const Error& e) {
    throw Error(e.code(), "task " + event.task_id + ", dimension " + dimension.name() + ": " +
                              e.message());
  }
  if (!out.value.is_null()) {
    if (!cutoff) {
      throw Error(ErrorCode::kSpecInvalid,
                  "no cutoff/threshold for dimension '" + dimension.name() + "'");
    }
    out.cls = classify_dimension(out.value, *cutoff);
  }
  return out;
}

}  // namespace

DimensionMetric attribute_dimension_metric(const TaskEvent& event, const DimensionId& dimension,
                                           const ComplianceSpec& spec) {
  return dimension_metric(event, dimension, spec, score_event(event, spec));
}

ComplianceClass classify_dimension(Metric value, CutoffThreshold ct) {
  double v = value.value();
  const double full_at = ct.cutoff + ct.threshold;
  if (std::abs(v - ct.cutoff) <= kEpsilon) v = ct.cutoff;
  if (std::abs(v - full_at) <= kEpsilon) v = full_at;
  if (v < ct.cutoff) return ComplianceClass::kNonCompliant;
  if (v < full_at) return ComplianceClass::kPartiallyCompliant;
  return ComplianceClass::kFullyCompliant;
}

ComplianceClass classify_task(std::span<const DimensionMetric> dims) {
  bool any = false;
  bool all_full = true;
  for (const auto& d : dims) {
    if (!d.cls) continue;
    any = true;
    if (*d.cls == ComplianceClass::kNonCompliant) return ComplianceClass::kNonCompliant;
    if (*d.cls != ComplianceClass::kFullyCompliant) all_full = false;
  }
  if (!any) throw Error(ErrorCode::kNoApplicableDimension, "task has no scored dimension");
  return all_full ? ComplianceClass::kFullyCompliant : ComplianceClass::kPartiallyCompliant;
}

Metric t_measure(std::span<const DimensionMetric> dims, const ComplianceSpec& spec) {
  std::vector<AggregateInput> inputs;
  for (const auto& d : dims) {
    if (d.value.is_null()) continue;
    inputs.push_back({d.dimension.name(), d.value, std::nullopt,
                      choice_weight(spec.dimension_aggregator, d.dimension.name(), 1.0)});
  }
  if (inputs.empty()) throw Error(ErrorCode::kNoApplicableDimension, "task has no scored dimension");
  return aggregate(spec.dimension_aggregator, inputs, spec.rules);
}

TaskResult evaluate_task(const TaskEvent& event, const ComplianceSpec& spec) {
  TaskResult out;
  out.task_id = event.task_id;
  out.position = event.position;
  const auto scored = score_event(event, spec);
  for (const auto& dim : dimensions_of_task(spec, event)) {
    out.dimension_metrics.push_back(dimension_metric(event, dim, spec, scored));
  }
  bool any = false;
  for (const auto& d : out.dimension_metrics) any = any || !d.value.is_null();
  if (any) {
    out.t_measure = t_measure(out.dimension_metrics, spec);
    out.cls = classify_task(out.dimension_metrics);
  }
  return out;
}

ComplianceClass classify_trace(std::span<const TaskResult> tasks) {
  if (tasks.empty()) throw Error(ErrorCode::kEmptyTrace, "trace has no tasks");
  bool any = false;
  bool all_full = true;
  for (const auto& t : tasks) {
    if (!t.cls) continue;
    any = true;
    if (*t.cls == ComplianceClass::kNonCompliant) return ComplianceClass::kNonCompliant;
    if (*t.cls != ComplianceClass::kFullyCompliant) all_full = false;
  }
  if (!any) throw Error(ErrorCode::kNoApplicableDimension, "no task in the trace is scored");
  return all_full ? ComplianceClass::kFullyCompliant : ComplianceClass::kPartiallyCompliant;
}

TraceResult tau_measure(const Trace& trace, const ComplianceSpec& spec) {
  if (trace.events.empty()) {
    throw Error(ErrorCode::kEmptyTrace, "trace '" + trace.trace_id + "' has no events");
  }
  TraceResult out;
  out.trace_id = trace.trace_id;
  out.task_results.reserve(trace.events.size());
  for (const auto& event : trace.events) out.task_results.push_back(evaluate_task(event, spec));

  std::map<DimensionId, std::optional<double>> smallest_positive;
  for (const auto& task : out.task_results) {
    for (const auto& d : task.dimension_metrics) {
      if (d.value.is_null()) continue;
      auto& slot = smallest_positive[d.dimension];
      const double v = d.value.value();
      if (v > kEpsilon && (!slot || v < *slot)) slot = v;
    }
  }
  if (smallest_positive.empty()) {
    throw Error(ErrorCode::kNoApplicableDimension,
                "trace '" + trace.trace_id + "' has no scored dimension");
  }

  std::vector<AggregateInput> inputs;
  for (const auto& [dim, v] : smallest_positive) {
    Metric m(v.value_or(0.0));
    out.dimension_minima.emplace(dim, m);
    inputs.push_back({dim.name(), m, std::nullopt,
                      choice_weight(spec.trace_aggregator, dim.name(), 1.0)});
  }
  out.tau_measure = aggregate(spec.trace_aggregator, inputs, spec.rules);
  out.cls = classify_trace(out.task_results);
  return out;
}

ProcessResult p_measure(const ProcessLog& log, const ComplianceSpec& spec, unsigned jobs) {
  if (log.traces.empty()) {
    throw Error(ErrorCode::kEmptyLog, "log '" + log.process_id + "' has no traces");
  }
  const std::size_t n = log.traces.size();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));

  std::vector<TraceResult> results(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        results[i] = tau_measure(log.traces[i], spec);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  ProcessResult out;
  out.spec_id = spec.spec_id;
  out.process_id = log.process_id;
  out.trace_results = std::move(results);
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& t : out.trace_results) {
    if (t.tau_measure.is_null()) continue;
    sum += t.tau_measure.value();
    ++counted;
  }
  if (counted) out.p_measure = Metric(sum / static_cast<double>(counted));
  return out;
}

}  // namespace pcmeter

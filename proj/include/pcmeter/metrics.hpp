#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcmeter/metric.hpp"
#include "pcmeter/model.hpp"
#include "pcmeter/spec.hpp"

namespace pcmeter {

struct Contribution {
  std::string attribute;
  Metric score;
};

// Aggregate score of one task on one dimension. `cls` is set iff `value`
// is non-Null.
struct DimensionMetric {
  std::string task_id;
  DimensionId dimension = DimensionId::temporal();
  Metric value;
  std::optional<ComplianceClass> cls;
  std::vector<Contribution> contributing;
};

// Tasks without any scored dimension keep a Null T-measure and no class;
// they take no part in trace-level classification.
struct TaskResult {
  std::string task_id;
  std::size_t position = 0;
  std::vector<DimensionMetric> dimension_metrics;
  Metric t_measure;
  std::optional<ComplianceClass> cls;
};

struct TraceResult {
  std::string trace_id;
  std::vector<TaskResult> task_results;
  // Smallest strictly positive task metric per dimension, 0 if none is
  // positive.
  std::map<DimensionId, Metric> dimension_minima;
  Metric tau_measure;
  ComplianceClass cls = ComplianceClass::kNonCompliant;
};

struct ProcessResult {
  std::string spec_id;
  std::string process_id;
  std::vector<TraceResult> trace_results;  // input order
  Metric p_measure;
};

// Projects every scored attribute of `event` that belongs to `dimension`
// and combines the non-Null scores with the spec's attribute aggregator.
// Projection failures are rethrown with the task and attribute named.
DimensionMetric attribute_dimension_metric(const TaskEvent& event, const DimensionId& dimension,
                                           const ComplianceSpec& spec);

// Non below the cut-off, partial inside [cutoff, cutoff + threshold), full
// above. Values within kEpsilon of a boundary are snapped onto it first.
// Throws Error(kNullMetric) for a Null value.
ComplianceClass classify_dimension(Metric value, CutoffThreshold ct);

// Null dimensions are skipped. Throws Error(kNoApplicableDimension) when
// nothing is left.
ComplianceClass classify_task(std::span<const DimensionMetric> dims);
Metric t_measure(std::span<const DimensionMetric> dims, const ComplianceSpec& spec);

TaskResult evaluate_task(const TaskEvent& event, const ComplianceSpec& spec);

// Unscored tasks are skipped. Throws Error(kEmptyTrace) for an empty list
// and Error(kNoApplicableDimension) when no task is scored.
ComplianceClass classify_trace(std::span<const TaskResult> tasks);

TraceResult tau_measure(const Trace& trace, const ComplianceSpec& spec);

// Mean tau-measure over the log. Traces are evaluated independently on up
// to `jobs` threads (0 = hardware concurrency); the result lists them in
// input order whatever `jobs` is. Throws Error(kEmptyLog).
ProcessResult p_measure(const ProcessLog& log, const ComplianceSpec& spec, unsigned jobs = 1);

}  // namespace pcmeter

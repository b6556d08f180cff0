#include "pcmeter/metric.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "pcmeter/error.hpp"

namespace pcmeter {

Metric::Metric(double value) {
  if (!std::isfinite(value) || value < -kEpsilon || value > 1.0 + kEpsilon) {
    throw Error(ErrorCode::kRangeError,
                "metric value " + std::to_string(value) + " outside [0,1]");
  }
  if (value < 0.0) value = 0.0;
  if (value > 1.0) value = 1.0;
  value_ = value;
}

double Metric::value() const {
  if (!value_) throw Error(ErrorCode::kNullMetric, "metric is null");
  return *value_;
}

std::string_view to_string(ComplianceClass c) {
  switch (c) {
    case ComplianceClass::kNonCompliant: return "non";
    case ComplianceClass::kPartiallyCompliant: return "partial";
    case ComplianceClass::kFullyCompliant: return "full";
  }
  return "non";
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace pcmeter

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace pcmeter {

// Absolute tolerance for every real-valued comparison in the engine.
inline constexpr double kEpsilon = 1e-9;

// A compliance score in [0,1], or Null when a dimension does not apply.
// Null is ignored by aggregation; it is never the same thing as 0.
class Metric {
 public:
  // Null.
  constexpr Metric() = default;

  // Throws Error(kRangeError) unless value lies in [0,1]. Values within
  // kEpsilon outside the interval are snapped onto its ends.
  explicit Metric(double value);

  static constexpr Metric null() { return Metric(); }

  bool is_null() const noexcept { return !value_.has_value(); }
  explicit operator bool() const noexcept { return value_.has_value(); }

  // Throws Error(kNullMetric) on Null.
  double value() const;
  double value_or(double fallback) const noexcept { return value_.value_or(fallback); }

  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  std::optional<double> value_;
};

enum class ComplianceClass { kNonCompliant, kPartiallyCompliant, kFullyCompliant };

// "non" | "partial" | "full"
std::string_view to_string(ComplianceClass c);

// Cut-off S and threshold window; partial compliance lives in [S, S+window).
struct CutoffThreshold {
  double cutoff = 0.0;
  double threshold = 0.0;

  friend bool operator==(const CutoffThreshold&, const CutoffThreshold&) = default;
};

// "%.12g", with 0 written as "0".
std::string format_number(double value);

}  // namespace pcmeter

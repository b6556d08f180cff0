#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pcmeter {

// Compliance dimension name, normalized to lower case. Built-ins are
// temporal, monetary, role, data, quality and percentage; any other
// non-empty name is accepted.
class DimensionId {
 public:
  // Throws Error(kInvalidValue) on an empty name.
  explicit DimensionId(std::string_view name);

  static DimensionId temporal() { return DimensionId("temporal"); }
  static DimensionId monetary() { return DimensionId("monetary"); }
  static DimensionId role() { return DimensionId("role"); }
  static DimensionId data() { return DimensionId("data"); }
  static DimensionId quality() { return DimensionId("quality"); }
  static DimensionId percentage() { return DimensionId("percentage"); }

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const DimensionId&, const DimensionId&) = default;

 private:
  std::string name_;
};

enum class Unit { kNone, kDays, kCurrency, kPercent };

std::string_view to_string(Unit unit);

struct Number {
  double value = 0.0;
  Unit unit = Unit::kNone;
  friend bool operator==(const Number&, const Number&) = default;
};

struct Text {
  std::string text;
  friend bool operator==(const Text&, const Text&) = default;
};

// A label on an ordered qualitative scale.
struct Level {
  std::string label;
  friend bool operator==(const Level&, const Level&) = default;
};

// ISO-8601 calendar date, carried verbatim.
struct Date {
  std::string iso;
  friend bool operator==(const Date&, const Date&) = default;
};

using Value = std::variant<Number, Text, Level, Date>;

struct AttributeValue {
  std::string name;
  Value value;

  friend bool operator==(const AttributeValue&, const AttributeValue&) = default;
};

// "number" | "text" | "level" | "date"
std::string_view kind_name(const Value& value);

struct TaskEvent {
  std::string task_id;
  std::size_t position = 0;
  std::vector<AttributeValue> attributes;

  // nullptr when the event carries no attribute with that name.
  const AttributeValue* find(std::string_view name) const;

  friend bool operator==(const TaskEvent&, const TaskEvent&) = default;
};

struct Trace {
  std::string trace_id;
  std::vector<TaskEvent> events;

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct ProcessLog {
  std::string process_id;
  std::vector<Trace> traces;

  friend bool operator==(const ProcessLog&, const ProcessLog&) = default;
};

// Structural checks for the invariants of the types above. Each throws
// Error(kInvalidValue), naming the offending element; check_log throws
// Error(kDuplicateTraceId) on a repeated trace id.
void check_event(const TaskEvent& event);
void check_trace(const Trace& trace);
void check_log(const ProcessLog& log);

}  // namespace pcmeter

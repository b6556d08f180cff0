#include "pcmeter/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "pcmeter/error.hpp"

namespace pcmeter {

DimensionId::DimensionId(std::string_view name) {
  if (name.empty()) throw Error(ErrorCode::kInvalidValue, "dimension name is empty");
  name_.reserve(name.size());
  for (char c : name) {
    name_.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
}

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::kNone: return "none";
    case Unit::kDays: return "days";
    case Unit::kCurrency: return "currency";
    case Unit::kPercent: return "percent";
  }
  return "none";
}

std::string_view kind_name(const Value& value) {
  struct Visitor {
    std::string_view operator()(const Number&) const { return "number"; }
    std::string_view operator()(const Text&) const { return "text"; }
    std::string_view operator()(const Level&) const { return "level"; }
    std::string_view operator()(const Date&) const { return "date"; }
  };
  return std::visit(Visitor{}, value);
}

const AttributeValue* TaskEvent::find(std::string_view name) const {
  auto it = std::find_if(attributes.begin(), attributes.end(),
                         [&](const AttributeValue& a) { return a.name == name; });
  return it == attributes.end() ? nullptr : &*it;
}

void check_event(const TaskEvent& event) {
  if (event.task_id.empty()) throw Error(ErrorCode::kInvalidValue, "task id is empty");
  std::set<std::string_view> seen;
  for (const auto& attr : event.attributes) {
    if (attr.name.empty()) {
      throw Error(ErrorCode::kInvalidValue, "empty attribute name on task " + event.task_id);
    }
    if (!seen.insert(attr.name).second) {
      throw Error(ErrorCode::kInvalidValue,
                  "duplicate attribute '" + attr.name + "' on task " + event.task_id);
    }
    if (const auto* num = std::get_if<Number>(&attr.value); num && !std::isfinite(num->value)) {
      throw Error(ErrorCode::kInvalidValue,
                  "non-finite value for '" + attr.name + "' on task " + event.task_id);
    }
  }
}

void check_trace(const Trace& trace) {
  if (trace.events.empty()) {
    throw Error(ErrorCode::kInvalidValue, "trace '" + trace.trace_id + "' has no events");
  }
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    if (trace.events[i].position != i) {
      throw Error(ErrorCode::kInvalidValue,
                  "trace '" + trace.trace_id + "': event " + std::to_string(i) +
                      " has position " + std::to_string(trace.events[i].position));
    }
    check_event(trace.events[i]);
  }
}

void check_log(const ProcessLog& log) {
  std::set<std::string_view> ids;
  for (const auto& trace : log.traces) {
    if (!ids.insert(trace.trace_id).second) {
      throw Error(ErrorCode::kDuplicateTraceId, "trace id '" + trace.trace_id + "' repeated");
    }
    check_trace(trace);
  }
}

}  // namespace pcmeter

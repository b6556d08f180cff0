#pragma once

#include <filesystem>
#include <string>

#include "pcmeter/io.hpp"
#include "pcmeter/spec.hpp"

namespace pcmeter::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(PCMETER_FIXTURES) / name;
}

inline const ComplianceSpec& payment_spec() {
  static const ComplianceSpec spec = io::load_spec(fixture("payment.spec.json"));
  return spec;
}

inline const ProjectionFn& projection_of(const ComplianceSpec& spec, std::string_view task,
                                         std::string_view attribute) {
  return *resolve_attribute_spec(spec, task, attribute)->projection;
}

inline AttributeValue days(std::string name, double v) {
  return {std::move(name), Number{v, Unit::kDays}};
}

inline AttributeValue money(std::string name, double v) {
  return {std::move(name), Number{v, Unit::kCurrency}};
}

}  // namespace pcmeter::testing

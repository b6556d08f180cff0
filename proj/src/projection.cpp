#include "pcmeter/projection.hpp"

#include <set>

#include "pcmeter/error.hpp"

namespace pcmeter {

std::string_view to_string(Direction d) {
  return d == Direction::kLowerIsBetter ? "lower-is-better" : "higher-is-better";
}

std::string_view to_string(Finding::Severity s) {
  return s == Finding::Severity::kError ? "error" : "warning";
}

namespace {

double reference_total(const NumericBands& fn, const AttributeValue& value,
                       const rule::Bindings& context) {
  double total = 0.0;
  for (const auto& name : fn.relative_to) {
    auto it = context.find(name);
    if (it == context.end() || !it->second.raw) {
      throw Error(ErrorCode::kUnboundReference,
                  "'" + value.name + "' is scored relative to missing attribute '" + name + "'");
    }
    total += *it->second.raw;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidValue,
                "reference total for '" + value.name + "' is not positive");
  }
  return total;
}

Metric project_bands(const NumericBands& fn, const AttributeValue& value,
                     const rule::Bindings& context) {
  const auto* num = std::get_if<Number>(&value.value);
  if (!num) {
    throw Error(ErrorCode::kKindMismatch, "'" + value.name + "' is " +
                                              std::string(kind_name(value.value)) +
                                              ", numeric bands need a number");
  }
  double x = num->value;
  if (!fn.relative_to.empty()) x /= reference_total(fn, value, context);
  for (const auto& band : fn.bands) {
    if (!band.bound) return Metric(band.score);
    bool covered = fn.direction == Direction::kLowerIsBetter ? x <= *band.bound + kEpsilon
                                                             : x >= *band.bound - kEpsilon;
    if (covered) return Metric(band.score);
  }
  throw Error(ErrorCode::kInvalidValue, "no band covers value of '" + value.name + "'");
}

Metric project_categorical(const CategoricalMap& fn, const AttributeValue& value) {
  const auto* level = std::get_if<Level>(&value.value);
  if (!level) {
    throw Error(ErrorCode::kKindMismatch, "'" + value.name + "' is " +
                                              std::string(kind_name(value.value)) +
                                              ", a categorical scale needs a level");
  }
  auto it = fn.scores.find(level->label);
  if (it == fn.scores.end()) {
    throw Error(ErrorCode::kUnknownLevel,
                "level '" + level->label + "' of '" + value.name + "' is not on the scale");
  }
  return Metric(it->second);
}

}  // namespace

Metric project(const ProjectionFn& fn, const AttributeValue& value, const rule::RuleTable& rules,
               const rule::Bindings& context) {
  if (const auto* bands = std::get_if<NumericBands>(&fn)) {
    return project_bands(*bands, value, context);
  }
  if (const auto* cat = std::get_if<CategoricalMap>(&fn)) return project_categorical(*cat, value);
  if (const auto* ref = std::get_if<RuleRef>(&fn)) {
    auto it = rules.find(ref->rule_name);
    if (it == rules.end()) {
      throw Error(ErrorCode::kUnboundReference, "rule '" + ref->rule_name + "' is not defined");
    }
    return rule::evaluate(it->second, context);
  }
  return Metric(std::get<Constant>(fn).score);
}

CategoricalMap default_scale_map(const std::vector<std::string>& levels) {
  if (levels.size() < 2) {
    throw Error(ErrorCode::kEmptyScale, "a scale needs at least two levels");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      if (levels[i] == levels[j]) {
        throw Error(ErrorCode::kInvalidValue, "level '" + levels[i] + "' repeated");
      }
    }
  }
  CategoricalMap map;
  map.scale = levels;
  map.default_scheme = true;
  const auto k = static_cast<double>(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    map.scores[levels[i]] = static_cast<double>(i + 1) / k;
  }
  return map;
}

namespace {

void add(std::vector<Finding>& out, std::string code, std::string path, std::string message) {
  out.push_back({Finding::Severity::kError, std::move(code), std::move(path), std::move(message)});
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void check_bands(const NumericBands& fn, const std::string& path, std::vector<Finding>& out) {
  const std::string bands_path = path + ".bands";
  if (fn.bands.empty()) {
    add(out, "EMPTY_BANDS", bands_path, "numeric bands need at least one band");
    return;
  }
  for (std::size_t i = 0; i < fn.bands.size(); ++i) {
    const auto& band = fn.bands[i];
    const std::string band_path = bands_path + "[" + std::to_string(i) + "]";
    if (!in_unit(band.score)) {
      add(out, "SCORE_OUT_OF_RANGE", band_path + ".score", "band score outside [0,1]");
    }
    if (!band.bound && i + 1 != fn.bands.size()) {
      add(out, "OPEN_BAND_NOT_LAST", band_path + ".bound",
          "an open-ended band must be the last one");
    }
    if (i > 0 && band.bound && fn.bands[i - 1].bound) {
      double prev = *fn.bands[i - 1].bound;
      bool ordered = fn.direction == Direction::kLowerIsBetter ? *band.bound > prev
                                                               : *band.bound < prev;
      if (!ordered) {
        add(out, "BANDS_NOT_ORDERED", band_path + ".bound",
            "band bounds must be strictly monotone in scan order");
      }
    }
    if (i > 0 && band.score > fn.bands[i - 1].score) {
      add(out, "NON_MONOTONE_BANDS", band_path + ".score",
          "score rises as the violation grows (" + format_number(fn.bands[i - 1].score) +
              " then " + format_number(band.score) + ")");
    }
  }
  if (fn.bands.back().bound) {
    add(out, "BANDS_INCOMPLETE", bands_path,
        "the last band must be open-ended to cover the remaining domain");
  }
}

void check_categorical(const CategoricalMap& fn, const std::string& path,
                       std::vector<Finding>& out) {
  if (fn.scale.size() < 2) {
    add(out, "EMPTY_SCALE", path + ".scale", "a scale needs at least two levels");
  }
  std::set<std::string> levels;
  for (const auto& level : fn.scale) {
    if (!levels.insert(level).second) {
      add(out, "DUPLICATE_LEVEL", path + ".scale", "level '" + level + "' repeated");
    }
    auto it = fn.scores.find(level);
    if (it == fn.scores.end()) {
      add(out, "CATEGORICAL_LEVEL_UNSCORED", path + ".scores." + level,
          "level '" + level + "' has no score");
    } else if (!in_unit(it->second)) {
      add(out, "SCORE_OUT_OF_RANGE", path + ".scores." + level, "score outside [0,1]");
    }
  }
  for (const auto& [level, score] : fn.scores) {
    if (!levels.count(level)) {
      add(out, "UNKNOWN_LEVEL", path + ".scores." + level,
          "score given for level '" + level + "' which is not on the scale");
    }
  }
}

}  // namespace

std::vector<Finding> check_monotone(const ProjectionFn& fn, const std::string& path) {
  std::vector<Finding> out;
  if (const auto* bands = std::get_if<NumericBands>(&fn)) {
    check_bands(*bands, path, out);
  } else if (const auto* cat = std::get_if<CategoricalMap>(&fn)) {
    check_categorical(*cat, path, out);
  } else if (const auto* constant = std::get_if<Constant>(&fn)) {
    if (!in_unit(constant->score)) {
      add(out, "SCORE_OUT_OF_RANGE", path + ".score", "constant score outside [0,1]");
    }
  }
  return out;
}

}  // namespace pcmeter

#include "pcmeter/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pcmeter::io {

using Json = nlohmann::ordered_json;

LogFormat log_format_from_string(std::string_view name) {
  if (name == "jsonl") return LogFormat::kJsonl;
  if (name == "csv") return LogFormat::kCsv;
  throw Error(ErrorCode::kInvalidValue, "unknown log format '" + std::string(name) + "'");
}

ReportFormat report_format_from_string(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw Error(ErrorCode::kInvalidValue, "unknown report format '" + std::string(name) + "'");
}

namespace {

std::string location(const std::string& path, std::size_t line) {
  std::string out;
  if (line) out = "line " + std::to_string(line);
  if (!path.empty()) out += (line ? " at " : "at ") + path;
  return out;
}

}  // namespace

MalformedDocument::MalformedDocument(std::string path, std::size_t line, const std::string& detail)
    : Error(ErrorCode::kMalformedDocument, location(path, line) + ": " + detail),
      path_(std::move(path)),
      line_(line) {}

namespace {

std::string summarize(const std::vector<Finding>& findings) {
  std::string out;
  for (const auto& f : findings) {
    if (f.severity != Finding::Severity::kError) continue;
    if (!out.empty()) out += "; ";
    out += f.code + " at " + f.path;
  }
  return out;
}

}  // namespace

SpecInvalid::SpecInvalid(std::vector<Finding> findings)
    : Error(ErrorCode::kSpecInvalid, summarize(findings)), findings_(std::move(findings)) {}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read '" + path.string() + "'");
  return buf.str();
}

std::size_t write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  return bytes.size();
}

// ---------------------------------------------------------------------------
// Spec documents

namespace {

std::string type_name(const Json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

// Typed access into the spec tree, every failure naming its JSON path.
class SpecReader {
 public:
  [[noreturn]] static void fail(const std::string& path, const std::string& detail) {
    throw MalformedDocument(path, 0, detail);
  }

  static const Json& object(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected object, found " + type_name(j));
    return j;
  }

  static void only_keys(const Json& j, const std::string& path,
                        std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : j.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) fail(path + "." + key, "unknown key");
    }
  }

  static const Json* member(const Json& j, std::string_view key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }

  static const Json& required(const Json& j, std::string_view key, const std::string& path) {
    const Json* m = member(j, key);
    if (!m) fail(path + "." + std::string(key), "missing required key");
    return *m;
  }

  static double number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected number, found " + type_name(j));
    double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "number is not finite");
    return v;
  }

  static std::string string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected string, found " + type_name(j));
    return j.get<std::string>();
  }

  static bool boolean(const Json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected boolean, found " + type_name(j));
    return j.get<bool>();
  }

  static const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected array, found " + type_name(j));
    return j;
  }
};

using R = SpecReader;

CutoffThreshold read_cutoff(const Json& j, const std::string& path) {
  R::object(j, path);
  R::only_keys(j, path, {"cutoff", "threshold"});
  return {R::number(R::required(j, "cutoff", path), path + ".cutoff"),
          R::number(R::required(j, "threshold", path), path + ".threshold")};
}

AggregatorChoice read_aggregator(const Json& j, const std::string& path) {
  AggregatorChoice choice;
  auto kind = [&](const std::string& name, const std::string& at) {
    try {
      return aggregator_kind_from_string(name);
    } catch (const Error& e) {
      R::fail(at, e.message());
    }
  };
  if (j.is_string()) {
    choice.kind = kind(j.get<std::string>(), path);
    return choice;
  }
  R::object(j, path);
  R::only_keys(j, path, {"kind", "rule", "weights"});
  choice.kind = kind(R::string(R::required(j, "kind", path), path + ".kind"), path + ".kind");
  if (const Json* rule = R::member(j, "rule")) choice.rule_name = R::string(*rule, path + ".rule");
  if (choice.kind == AggregatorKind::kRule && choice.rule_name.empty()) {
    R::fail(path + ".rule", "rule aggregator needs a rule name");
  }
  if (const Json* weights = R::member(j, "weights")) {
    R::object(*weights, path + ".weights");
    for (const auto& [name, w] : weights->items()) {
      std::string key = name;
      for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      choice.weights[key] = R::number(w, path + ".weights." + name);
    }
  }
  return choice;
}

ProjectionFn read_projection(const Json& j, const std::string& path) {
  R::object(j, path);
  const std::string kind = R::string(R::required(j, "kind", path), path + ".kind");
  if (kind == "bands") {
    R::only_keys(j, path, {"kind", "direction", "bands", "relativeTo"});
    NumericBands fn;
    if (const Json* dir = R::member(j, "direction")) {
      const std::string d = R::string(*dir, path + ".direction");
      if (d == "lower-is-better") {
        fn.direction = Direction::kLowerIsBetter;
      } else if (d == "higher-is-better") {
        fn.direction = Direction::kHigherIsBetter;
      } else {
        R::fail(path + ".direction", "expected lower-is-better or higher-is-better");
      }
    }
    const Json& bands = R::array(R::required(j, "bands", path), path + ".bands");
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const std::string bp = path + ".bands[" + std::to_string(i) + "]";
      R::object(bands[i], bp);
      R::only_keys(bands[i], bp, {"bound", "score"});
      Band band;
      if (const Json* bound = R::member(bands[i], "bound"); bound && !bound->is_null()) {
        band.bound = R::number(*bound, bp + ".bound");
      }
      band.score = R::number(R::required(bands[i], "score", bp), bp + ".score");
      fn.bands.push_back(band);
    }
    if (const Json* rel = R::member(j, "relativeTo")) {
      R::array(*rel, path + ".relativeTo");
      for (std::size_t i = 0; i < rel->size(); ++i) {
        fn.relative_to.push_back(
            R::string((*rel)[i], path + ".relativeTo[" + std::to_string(i) + "]"));
      }
    }
    return fn;
  }
  if (kind == "categorical") {
    R::only_keys(j, path, {"kind", "scale", "scores", "default"});
    std::vector<std::string> scale;
    const Json& levels = R::array(R::required(j, "scale", path), path + ".scale");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      scale.push_back(R::string(levels[i], path + ".scale[" + std::to_string(i) + "]"));
    }
    const Json* scores = R::member(j, "scores");
    bool use_default = !scores;
    if (const Json* d = R::member(j, "default")) use_default = R::boolean(*d, path + ".default");
    if (use_default) {
      if (scores) R::fail(path + ".scores", "explicit scores conflict with the default scheme");
      try {
        return default_scale_map(scale);
      } catch (const Error& e) {
        R::fail(path + ".scale", e.message());
      }
    }
    if (!scores) R::fail(path + ".scores", "missing required key");
    CategoricalMap fn;
    fn.scale = std::move(scale);
    R::object(*scores, path + ".scores");
    for (const auto& [level, score] : scores->items()) {
      fn.scores[level] = R::number(score, path + ".scores." + level);
    }
    return fn;
  }
  if (kind == "rule") {
    R::only_keys(j, path, {"kind", "rule"});
    return RuleRef{R::string(R::required(j, "rule", path), path + ".rule")};
  }
  if (kind == "constant") {
    R::only_keys(j, path, {"kind", "score"});
    return Constant{R::number(R::required(j, "score", path), path + ".score")};
  }
  R::fail(path + ".kind", "unknown projection kind '" + kind + "'");
}

AttributeSpec read_attribute(const Json& j, const std::string& path) {
  R::object(j, path);
  R::only_keys(j, path,
               {"task", "name", "dimension", "weight", "meta", "cutoff", "threshold", "projection"});
  AttributeSpec attr;
  if (const Json* task = R::member(j, "task")) attr.task_selector = R::string(*task, path + ".task");
  attr.attribute_name = R::string(R::required(j, "name", path), path + ".name");
  const std::string dim = R::string(R::required(j, "dimension", path), path + ".dimension");
  if (dim.empty()) R::fail(path + ".dimension", "dimension name is empty");
  attr.dimension = DimensionId(dim);
  if (const Json* w = R::member(j, "weight")) attr.weight = R::number(*w, path + ".weight");
  if (const Json* m = R::member(j, "meta")) attr.meta = R::boolean(*m, path + ".meta");
  const Json* cutoff = R::member(j, "cutoff");
  const Json* threshold = R::member(j, "threshold");
  if (cutoff || threshold) {
    if (!cutoff) R::fail(path + ".cutoff", "threshold given without cutoff");
    if (!threshold) R::fail(path + ".threshold", "cutoff given without threshold");
    attr.cutoff_override =
        CutoffThreshold{R::number(*cutoff, path + ".cutoff"), R::number(*threshold, path + ".threshold")};
  }
  if (const Json* p = R::member(j, "projection")) {
    attr.projection = read_projection(*p, path + ".projection");
  }
  return attr;
}

}  // namespace

ComplianceSpec parse_spec(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedDocument("$", 0, std::string("invalid JSON (byte ") +
                                        std::to_string(e.byte) + ")");
  }
  R::object(doc, "$");
  R::only_keys(doc, "$", {"specId", "description", "dimensions", "aggregators", "rules", "attributes"});

  ComplianceSpec spec;
  spec.spec_id = R::string(R::required(doc, "specId", "$"), "$.specId");
  if (const Json* d = R::member(doc, "description")) R::string(*d, "$.description");

  if (const Json* dims = R::member(doc, "dimensions")) {
    R::object(*dims, "$.dimensions");
    for (const auto& [name, ct] : dims->items()) {
      const std::string path = "$.dimensions." + name;
      if (name.empty()) R::fail(path, "dimension name is empty");
      if (!spec.dimension_defaults.emplace(DimensionId(name), read_cutoff(ct, path)).second) {
        R::fail(path, "dimension declared twice (names are case-insensitive)");
      }
    }
  }

  if (const Json* aggs = R::member(doc, "aggregators")) {
    R::object(*aggs, "$.aggregators");
    R::only_keys(*aggs, "$.aggregators", {"attribute", "dimension", "trace"});
    if (const Json* a = R::member(*aggs, "attribute")) {
      spec.attribute_aggregator = read_aggregator(*a, "$.aggregators.attribute");
    }
    if (const Json* a = R::member(*aggs, "dimension")) {
      spec.dimension_aggregator = read_aggregator(*a, "$.aggregators.dimension");
    }
    if (const Json* a = R::member(*aggs, "trace")) {
      spec.trace_aggregator = read_aggregator(*a, "$.aggregators.trace");
    }
  }

  if (const Json* rules = R::member(doc, "rules")) {
    R::object(*rules, "$.rules");
    for (const auto& [name, source] : rules->items()) {
      const std::string path = "$.rules." + name;
      const std::string text = R::string(source, path);
      try {
        spec.rules.emplace(name, rule::parse(text));
      } catch (const Error& e) {
        R::fail(path, std::string(to_string(e.code())) + ": " + e.message());
      }
    }
  }

  const Json& attrs = R::array(R::required(doc, "attributes", "$"), "$.attributes");
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    spec.attribute_specs.push_back(read_attribute(attrs[i], "$.attributes[" + std::to_string(i) + "]"));
  }
  return spec;
}

ComplianceSpec read_spec(const std::filesystem::path& path) { return parse_spec(read_file(path)); }

ComplianceSpec load_spec(const std::filesystem::path& path) {
  ComplianceSpec spec = read_spec(path);
  auto findings = validate_spec(spec);
  if (has_errors(findings)) throw SpecInvalid(std::move(findings));
  return spec;
}

// ---------------------------------------------------------------------------
// Logs

namespace {

bool looks_like_date(std::string_view s) {
  static const std::regex kIsoDate(R"(\d{4}-\d{2}-\d{2}([T ][0-9:.]+(Z|[+-]\d{2}:?\d{2})?)?)");
  return std::regex_match(s.begin(), s.end(), kIsoDate);
}

Unit unit_from_string(std::string_view s) {
  for (auto u : {Unit::kNone, Unit::kDays, Unit::kCurrency, Unit::kPercent}) {
    if (to_string(u) == s) return u;
  }
  throw Error(ErrorCode::kInvalidValue, "unknown unit '" + std::string(s) + "'");
}

class LineReader {
 public:
  explicit LineReader(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& path, const std::string& detail) const {
    throw MalformedDocument(path, line_, detail);
  }

  const Json& need(const Json& j, std::string_view key, const std::string& path) const {
    if (!j.is_object()) fail(path, "expected object, found " + type_name(j));
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + std::string(key), "missing required key");
    return *it;
  }

  std::string string(const Json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected string, found " + type_name(j));
    return j.get<std::string>();
  }

  Value value(const Json& j, const std::string& path) const {
    if (j.is_number()) {
      double v = j.get<double>();
      if (!std::isfinite(v)) fail(path, "number is not finite");
      return Number{v, Unit::kNone};
    }
    if (j.is_string()) {
      std::string s = j.get<std::string>();
      if (looks_like_date(s)) return Date{std::move(s)};
      return Text{std::move(s)};
    }
    if (j.is_object() && j.size() == 1) {
      if (auto it = j.find("level"); it != j.end()) return Level{string(*it, path + ".level")};
      if (auto it = j.find("text"); it != j.end()) return Text{string(*it, path + ".text")};
      if (auto it = j.find("date"); it != j.end()) return Date{string(*it, path + ".date")};
    }
    if (j.is_object() && j.contains("value") && j.contains("unit") && j.size() == 2) {
      const Json& v = j.at("value");
      if (!v.is_number()) fail(path + ".value", "expected number, found " + type_name(v));
      try {
        return Number{v.get<double>(), unit_from_string(string(j.at("unit"), path + ".unit"))};
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kMalformedDocument) throw;
        fail(path + ".unit", e.message());
      }
    }
    fail(path, "unsupported attribute value " + j.dump());
  }

 private:
  std::size_t line_;
};

Trace read_trace_line(const Json& doc, std::size_t line) {
  LineReader r(line);
  if (!doc.is_object()) r.fail("$", "expected object, found " + type_name(doc));
  for (const auto& [key, _] : doc.items()) {
    if (key != "traceId" && key != "events") r.fail("$." + key, "unknown key");
  }
  Trace trace;
  trace.trace_id = r.string(r.need(doc, "traceId", "$"), "$.traceId");
  const Json& events = r.need(doc, "events", "$");
  if (!events.is_array()) r.fail("$.events", "expected array, found " + type_name(events));
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string path = "$.events[" + std::to_string(i) + "]";
    const Json& ev = events[i];
    TaskEvent event;
    event.position = i;
    event.task_id = r.string(r.need(ev, "task", path), path + ".task");
    for (const auto& [key, _] : ev.items()) {
      if (key != "task" && key != "attrs") r.fail(path + "." + key, "unknown key");
    }
    if (auto it = ev.find("attrs"); it != ev.end()) {
      if (!it->is_object()) r.fail(path + ".attrs", "expected object, found " + type_name(*it));
      for (const auto& [name, value] : it->items()) {
        event.attributes.push_back({name, r.value(value, path + ".attrs." + name)});
      }
    }
    trace.events.push_back(std::move(event));
  }
  try {
    check_trace(trace);
  } catch (const Error& e) {
    r.fail("$", e.message());
  }
  return trace;
}

ProcessLog parse_jsonl(std::string_view text, std::string process_id) {
  ProcessLog log;
  log.process_id = std::move(process_id);
  std::set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    Json doc;
    try {
      doc = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedDocument("", line_no,
                              "invalid JSON (column " + std::to_string(e.byte) + ")");
    }
    Trace trace = read_trace_line(doc, line_no);
    if (!ids.insert(trace.trace_id).second) {
      throw Error(ErrorCode::kDuplicateTraceId,
                  "line " + std::to_string(line_no) + ": trace id '" + trace.trace_id + "' repeated");
    }
    log.traces.push_back(std::move(trace));
  }
  return log;
}

// Minimal RFC 4180 reader: quoted fields may hold commas, quotes and LFs.
std::vector<std::pair<std::size_t, std::vector<std::string>>> csv_rows(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.emplace_back(row_line, std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
      ++line;
      row_line = line;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw MalformedDocument("", row_line, "unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.emplace_back(row_line, std::move(row));
  }
  return rows;
}

constexpr std::string_view kCsvColumns[] = {"traceId", "position", "task",
                                            "attrName", "attrValue", "attrKind"};

Value csv_value(const std::string& text, const std::string& kind, std::size_t line) {
  auto number = [&](Unit unit) -> Value {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
      throw MalformedDocument("attrValue", line, "'" + text + "' is not a number");
    }
    return Number{v, unit};
  };
  if (kind == "number") return number(Unit::kNone);
  if (kind == "days") return number(Unit::kDays);
  if (kind == "currency") return number(Unit::kCurrency);
  if (kind == "percent") return number(Unit::kPercent);
  if (kind == "text") return Text{text};
  if (kind == "level") return Level{text};
  if (kind == "date") return Date{text};
  throw MalformedDocument("attrKind", line, "unknown attribute kind '" + kind + "'");
}

ProcessLog parse_csv(std::string_view text, std::string process_id) {
  ProcessLog log;
  log.process_id = std::move(process_id);
  auto rows = csv_rows(text);
  if (rows.empty()) return log;

  const auto& header = rows.front();
  if (header.second.size() != std::size(kCsvColumns) ||
      !std::equal(header.second.begin(), header.second.end(), std::begin(kCsvColumns))) {
    throw MalformedDocument("", header.first,
                            "header must be traceId,position,task,attrName,attrValue,attrKind");
  }

  std::map<std::string, std::size_t> index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, cells] = rows[r];
    if (cells.size() != std::size(kCsvColumns)) {
      throw MalformedDocument("", line, "expected 6 columns, found " + std::to_string(cells.size()));
    }
    const std::string& trace_id = cells[0];
    std::size_t position = 0;
    auto [ptr, ec] = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), position);
    if (ec != std::errc() || ptr != cells[1].data() + cells[1].size() || cells[1].empty()) {
      throw MalformedDocument("position", line, "'" + cells[1] + "' is not a position");
    }

    auto [it, inserted] = index.emplace(trace_id, log.traces.size());
    if (inserted) log.traces.push_back(Trace{trace_id, {}});
    Trace& trace = log.traces[it->second];

    if (trace.events.empty() || trace.events.back().position != position) {
      const std::size_t expected = trace.events.size();
      if (position != expected) {
        throw MalformedDocument("position", line,
                                "trace '" + trace_id + "' expects position " +
                                    std::to_string(expected) + ", found " + cells[1]);
      }
      trace.events.push_back(TaskEvent{cells[2], position, {}});
    } else if (trace.events.back().task_id != cells[2]) {
      throw MalformedDocument("task", line, "position " + cells[1] + " changes task");
    }
    if (!cells[3].empty()) {
      trace.events.back().attributes.push_back({cells[3], csv_value(cells[4], cells[5], line)});
    }
  }
  try {
    check_log(log);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDuplicateTraceId) throw;
    throw MalformedDocument("", 0, e.message());
  }
  return log;
}

Json value_json(const Value& value) {
  struct Visitor {
    Json operator()(const Number& n) const {
      if (n.unit == Unit::kNone) return n.value;
      return Json{{"value", n.value}, {"unit", std::string(to_string(n.unit))}};
    }
    Json operator()(const Text& t) const {
      if (looks_like_date(t.text)) return Json{{"text", t.text}};
      return t.text;
    }
    Json operator()(const Level& l) const { return Json{{"level", l.label}}; }
    Json operator()(const Date& d) const {
      if (looks_like_date(d.iso)) return d.iso;
      return Json{{"date", d.iso}};
    }
  };
  return std::visit(Visitor{}, value);
}

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::pair<std::string, std::string> csv_cell(const Value& value) {
  struct Visitor {
    std::pair<std::string, std::string> operator()(const Number& n) const {
      return {shortest(n.value), n.unit == Unit::kNone ? "number" : std::string(to_string(n.unit))};
    }
    std::pair<std::string, std::string> operator()(const Text& t) const { return {t.text, "text"}; }
    std::pair<std::string, std::string> operator()(const Level& l) const { return {l.label, "level"}; }
    std::pair<std::string, std::string> operator()(const Date& d) const { return {d.iso, "date"}; }
  };
  return std::visit(Visitor{}, value);
}

}  // namespace

ProcessLog parse_log(std::string_view text, LogFormat format, std::string process_id) {
  return format == LogFormat::kJsonl ? parse_jsonl(text, std::move(process_id))
                                     : parse_csv(text, std::move(process_id));
}

ProcessLog load_log(const std::filesystem::path& path, LogFormat format,
                    std::optional<std::string> process_id) {
  return parse_log(read_file(path), format, process_id.value_or(path.stem().string()));
}

std::string write_log(const ProcessLog& log, LogFormat format) {
  std::string out;
  if (format == LogFormat::kJsonl) {
    for (const auto& trace : log.traces) {
      Json events = Json::array();
      for (const auto& event : trace.events) {
        Json ev{{"task", event.task_id}};
        Json attrs = Json::object();
        for (const auto& attr : event.attributes) attrs[attr.name] = value_json(attr.value);
        ev["attrs"] = std::move(attrs);
        events.push_back(std::move(ev));
      }
      out += Json{{"traceId", trace.trace_id}, {"events", std::move(events)}}.dump();
      out += '\n';
    }
    return out;
  }
  out = "traceId,position,task,attrName,attrValue,attrKind\n";
  for (const auto& trace : log.traces) {
    for (const auto& event : trace.events) {
      const std::string prefix = csv_escape(trace.trace_id) + "," + std::to_string(event.position) +
                                 "," + csv_escape(event.task_id) + ",";
      if (event.attributes.empty()) {
        out += prefix + ",,\n";
        continue;
      }
      for (const auto& attr : event.attributes) {
        auto [value, kind] = csv_cell(attr.value);
        out += prefix + csv_escape(attr.name) + "," + csv_escape(value) + "," + kind + "\n";
      }
    }
  }
  return out;
}

std::size_t save_log(const ProcessLog& log, const std::filesystem::path& path, LogFormat format) {
  return write_file(path, write_log(log, format));
}

// ---------------------------------------------------------------------------
// Reports

namespace {

Json number_json(double v) {
  const std::string text = format_number(v);
  const double rounded = std::strtod(text.c_str(), nullptr);
  if (rounded == std::floor(rounded) && std::abs(rounded) < 1e15) {
    return static_cast<std::int64_t>(rounded);
  }
  return rounded;
}

Json metric_json(const Metric& m) { return m.is_null() ? Json(nullptr) : number_json(m.value()); }

Json class_json(const std::optional<ComplianceClass>& c) {
  return c ? Json(std::string(to_string(*c))) : Json(nullptr);
}

std::string csv_metric(const Metric& m) { return m.is_null() ? "" : format_number(m.value()); }

}  // namespace

std::string report_json(const ProcessResult& result) {
  Json traces = Json::array();
  for (const auto& trace : result.trace_results) {
    Json minima = Json::object();
    for (const auto& [dim, m] : trace.dimension_minima) minima[dim.name()] = metric_json(m);
    Json tasks = Json::array();
    for (const auto& task : trace.task_results) {
      Json dims = Json::array();
      for (const auto& d : task.dimension_metrics) {
        Json contributing = Json::array();
        for (const auto& c : d.contributing) {
          contributing.push_back(Json{{"attribute", c.attribute}, {"score", metric_json(c.score)}});
        }
        dims.push_back(Json{{"dimension", d.dimension.name()},
                            {"value", metric_json(d.value)},
                            {"class", class_json(d.cls)},
                            {"contributing", std::move(contributing)}});
      }
      tasks.push_back(Json{{"task", task.task_id},
                           {"tMeasure", metric_json(task.t_measure)},
                           {"class", class_json(task.cls)},
                           {"dimensions", std::move(dims)}});
    }
    traces.push_back(Json{{"traceId", trace.trace_id},
                          {"tauMeasure", metric_json(trace.tau_measure)},
                          {"class", class_json(trace.cls)},
                          {"dimensionMinima", std::move(minima)},
                          {"tasks", std::move(tasks)}});
  }
  Json doc{{"specId", result.spec_id},
           {"processId", result.process_id},
           {"pMeasure", metric_json(result.p_measure)},
           {"traces", std::move(traces)}};
  return doc.dump(2) + "\n";
}

std::string report_csv(const ProcessResult& result) {
  std::string out =
      "traceId,tauMeasure,traceClass,task,position,tMeasure,taskClass,dimension,value,"
      "dimensionClass\n";
  for (const auto& trace : result.trace_results) {
    const std::string trace_part = csv_escape(trace.trace_id) + "," + csv_metric(trace.tau_measure) +
                                   "," + std::string(to_string(trace.cls)) + ",";
    for (const auto& task : trace.task_results) {
      const std::string task_part =
          csv_escape(task.task_id) + "," + std::to_string(task.position) + "," +
          csv_metric(task.t_measure) + "," +
          (task.cls ? std::string(to_string(*task.cls)) : std::string()) + ",";
      for (const auto& d : task.dimension_metrics) {
        out += trace_part + task_part + csv_escape(d.dimension.name()) + "," + csv_metric(d.value) +
               "," + (d.cls ? std::string(to_string(*d.cls)) : std::string()) + "\n";
      }
    }
  }
  return out;
}

std::size_t emit_report(const ProcessResult& result, const std::filesystem::path& path,
                        ReportFormat format) {
  return write_file(path, format == ReportFormat::kJson ? report_json(result) : report_csv(result));
}

}  // namespace pcmeter::io

namespace pcmeter::io {

namespace {

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += c + 1 == row.size() ? row[c] : pad(row[c], widths[c] + 2);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string cell(const Metric& m) { return m.is_null() ? "--" : format_number(m.value()); }

}  // namespace

std::string explain_text(const TraceResult& trace) {
  std::vector<const TaskResult*> tasks;
  for (const auto& t : trace.task_results) {
    if (!t.dimension_metrics.empty()) tasks.push_back(&t);
  }

  std::map<std::string, int> seen;
  for (const auto* t : tasks) ++seen[t->task_id];
  std::vector<std::string> header{"Dimension", "Attribute"};
  for (const auto* t : tasks) {
    header.push_back(seen[t->task_id] > 1 ? t->task_id + "@" + std::to_string(t->position)
                                          : t->task_id);
  }

  // Attribute rows grouped by dimension, attributes in order of appearance.
  std::map<DimensionId, std::vector<std::string>> attributes;
  for (const auto* t : tasks) {
    for (const auto& d : t->dimension_metrics) {
      auto& names = attributes[d.dimension];
      for (const auto& c : d.contributing) {
        if (std::find(names.begin(), names.end(), c.attribute) == names.end()) {
          names.push_back(c.attribute);
        }
      }
    }
  }

  auto find_dim = [](const TaskResult& t, const DimensionId& dim) -> const DimensionMetric* {
    for (const auto& d : t.dimension_metrics) {
      if (d.dimension == dim) return &d;
    }
    return nullptr;
  };

  std::vector<std::vector<std::string>> rows{header};
  for (const auto& [dim, names] : attributes) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::vector<std::string> row{i == 0 ? dim.name() : "", names[i]};
      for (const auto* t : tasks) {
        std::string value = "--";
        if (const auto* d = find_dim(*t, dim)) {
          for (const auto& c : d->contributing) {
            if (c.attribute == names[i]) value = cell(c.score);
          }
        }
        row.push_back(value);
      }
      rows.push_back(std::move(row));
    }
  }
  for (const auto& [dim, _] : attributes) {
    std::vector<std::string> row{dim.name(), "(metric)"};
    for (const auto* t : tasks) {
      const auto* d = find_dim(*t, dim);
      if (!d) {
        row.push_back("--");
      } else {
        row.push_back(cell(d->value) +
                      (d->cls ? " " + std::string(to_string(*d->cls)) : std::string()));
      }
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::string> t_row{"T-Measure", ""};
  std::vector<std::string> c_row{"Class", ""};
  for (const auto* t : tasks) {
    t_row.push_back(cell(t->t_measure));
    c_row.push_back(t->cls ? std::string(to_string(*t->cls)) : "--");
  }
  rows.push_back(std::move(t_row));
  rows.push_back(std::move(c_row));

  std::string out = "Trace " + trace.trace_id + ":";
  for (const auto& t : trace.task_results) out += " " + t.task_id;
  out += "\n\n" + render(rows) + "\n";
  out += "Dimension minima:";
  for (const auto& [dim, m] : trace.dimension_minima) out += " " + dim.name() + "=" + cell(m);
  out += "\n";
  out += "Tau-Measure: " + cell(trace.tau_measure) + " (" + std::string(to_string(trace.cls)) +
         ")\n";
  return out;
}

}  // namespace pcmeter::io

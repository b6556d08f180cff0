#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcmeter/error.hpp"
#include "pcmeter/metrics.hpp"
#include "pcmeter/model.hpp"
#include "pcmeter/spec.hpp"

namespace pcmeter::io {

enum class LogFormat { kJsonl, kCsv };
enum class ReportFormat { kJson, kCsv };

// Throws Error(kInvalidValue) for anything but "jsonl"/"csv" and
// "json"/"csv" respectively.
LogFormat log_format_from_string(std::string_view name);
ReportFormat report_format_from_string(std::string_view name);

// Error(kMalformedDocument) with its location: a JSON path for spec
// documents, a 1-based line number (and a path inside the line) for logs.
class MalformedDocument : public Error {
 public:
  MalformedDocument(std::string path, std::size_t line, const std::string& detail);

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }  // 0 when not line-based

 private:
  std::string path_;
  std::size_t line_;
};

// Error(kSpecInvalid) carrying the validation findings that caused it.
class SpecInvalid : public Error {
 public:
  explicit SpecInvalid(std::vector<Finding> findings);

  const std::vector<Finding>& findings() const noexcept { return findings_; }

 private:
  std::vector<Finding> findings_;
};

// Spec documents (JSON). parse_spec only decodes; load_spec also validates
// and throws SpecInvalid if any finding is an error.
ComplianceSpec parse_spec(std::string_view json_text);
ComplianceSpec read_spec(const std::filesystem::path& path);
ComplianceSpec load_spec(const std::filesystem::path& path);

// Process logs. The process id defaults to the file stem.
ProcessLog parse_log(std::string_view text, LogFormat format, std::string process_id = "log");
ProcessLog load_log(const std::filesystem::path& path, LogFormat format,
                    std::optional<std::string> process_id = std::nullopt);

std::string write_log(const ProcessLog& log, LogFormat format);
std::size_t save_log(const ProcessLog& log, const std::filesystem::path& path, LogFormat format);

// Reports. Numbers carry at most 12 significant digits, Null is JSON null,
// classes are "non" | "partial" | "full". The CSV form has one row per
// (trace, task, dimension).
std::string report_json(const ProcessResult& result);
std::string report_csv(const ProcessResult& result);
std::size_t emit_report(const ProcessResult& result, const std::filesystem::path& path,
                        ReportFormat format);

// Plain-text breakdown of one trace: attribute scores per task, dimension
// metrics with classes, T-measures, dimension minima and the tau-measure.
std::string explain_text(const TraceResult& trace);

// Reports and the CLI summary render numbers this way.
using pcmeter::format_number;

std::string read_file(const std::filesystem::path& path);
std::size_t write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace pcmeter::io

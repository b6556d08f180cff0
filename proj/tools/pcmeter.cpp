// pcmeter: partial-compliance measurement of process logs.
//
//   pcmeter validate-spec --spec SPEC
//   pcmeter evaluate --spec SPEC --log LOG [--format jsonl|csv] --out REPORT [--report json|csv] [--jobs N]
//   pcmeter explain  --spec SPEC --log LOG --trace ID [--format jsonl|csv]
//   pcmeter simulate --count N [--seed S] --out LOG [--format jsonl|csv]
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "pcmeter/io.hpp"
#include "pcmeter/metrics.hpp"
#include "pcmeter/payment.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pcmeter;

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

io::LogFormat log_format(const std::string& flag, const fs::path& path) {
  if (!flag.empty()) return io::log_format_from_string(flag);
  return path.extension() == ".csv" ? io::LogFormat::kCsv : io::LogFormat::kJsonl;
}

unsigned resolve_jobs(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("PCMETER_JOBS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid PCMETER_JOBS='" << env << "'\n";
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int validate_spec_cmd(const fs::path& spec_path) {
  const ComplianceSpec spec = io::read_spec(spec_path);
  const auto findings = validate_spec(spec);
  std::size_t errors = 0;
  std::size_t warnings = 0;
  for (const auto& f : findings) {
    (f.severity == Finding::Severity::kError ? errors : warnings) += 1;
    std::cout << to_string(f.severity) << '\t' << f.code << '\t' << f.path << '\t' << f.message
              << '\n';
  }
  std::cout << errors << (errors == 1 ? " error" : " errors");
  if (warnings) std::cout << ", " << warnings << (warnings == 1 ? " warning" : " warnings");
  std::cout << '\n';
  return errors ? kDomainError : kOk;
}

int evaluate_cmd(const fs::path& spec_path, const fs::path& log_path, const std::string& format,
                 const fs::path& out_path, const std::string& report, int jobs) {
  const ComplianceSpec spec = io::load_spec(spec_path);
  const ProcessLog log = io::load_log(log_path, log_format(format, log_path));
  const ProcessResult result = p_measure(log, spec, resolve_jobs(jobs));
  io::ReportFormat report_format = io::ReportFormat::kJson;
  if (!report.empty()) {
    report_format = io::report_format_from_string(report);
  } else if (out_path.extension() == ".csv") {
    report_format = io::ReportFormat::kCsv;
  }
  io::emit_report(result, out_path, report_format);
  std::cout << "P-Measure: "
            << (result.p_measure.is_null() ? std::string("null")
                                           : io::format_number(result.p_measure.value()))
            << " over " << result.trace_results.size() << " traces\n";
  return kOk;
}

int explain_cmd(const fs::path& spec_path, const fs::path& log_path, const std::string& format,
                const std::string& trace_id) {
  const ComplianceSpec spec = io::load_spec(spec_path);
  const ProcessLog log = io::load_log(log_path, log_format(format, log_path));
  for (const auto& trace : log.traces) {
    if (trace.trace_id == trace_id) {
      std::cout << io::explain_text(tau_measure(trace, spec));
      return kOk;
    }
  }
  throw Error(ErrorCode::kUnknownTraceId, "no trace '" + trace_id + "' in " + log_path.string());
}

int simulate_cmd(std::size_t count, std::uint64_t seed, const fs::path& out_path,
                 const std::string& format) {
  const auto scenarios = payment::random_scenarios(count, seed);
  const ProcessLog log = payment::generate_log(scenarios, "simulated-payment");
  io::save_log(log, out_path, log_format(format, out_path));
  std::cerr << "wrote " << log.traces.size() << " traces to " << out_path.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-compliance measurement for business-process logs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pcmeter 0.1.0");

  std::string spec_path, log_path, out_path, format, report, trace_id;
  int jobs = 0;
  std::size_t count = 0;
  std::uint64_t seed = 1;

  auto* validate = app.add_subcommand("validate-spec", "Check a compliance spec");
  validate->add_option("--spec", spec_path, "Spec document (JSON)")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score a process log and write a report");
  evaluate->add_option("--spec", spec_path, "Spec document (JSON)")->required();
  evaluate->add_option("--log", log_path, "Process log")->required();
  evaluate->add_option("--format", format, "Log format")->check(CLI::IsMember({"jsonl", "csv"}));
  evaluate->add_option("--out", out_path, "Report destination")->required();
  evaluate->add_option("--report", report, "Report format")->check(CLI::IsMember({"json", "csv"}));
  evaluate->add_option("--jobs", jobs, "Worker threads (default: PCMETER_JOBS or all cores)")
      ->check(CLI::PositiveNumber);

  auto* explain = app.add_subcommand("explain", "Print the breakdown of one trace");
  explain->add_option("--spec", spec_path, "Spec document (JSON)")->required();
  explain->add_option("--log", log_path, "Process log")->required();
  explain->add_option("--format", format, "Log format")->check(CLI::IsMember({"jsonl", "csv"}));
  explain->add_option("--trace", trace_id, "Trace id")->required();

  auto* simulate = app.add_subcommand("simulate", "Generate a random payment-process log");
  simulate->add_option("--count", count, "Number of traces")
      ->required()
      ->check(CLI::Range(std::size_t{1}, std::size_t{10'000'000}));
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--out", out_path, "Log destination")->required();
  simulate->add_option("--format", format, "Log format")->check(CLI::IsMember({"jsonl", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*validate) return validate_spec_cmd(spec_path);
    if (*evaluate) return evaluate_cmd(spec_path, log_path, format, out_path, report, jobs);
    if (*explain) return explain_cmd(spec_path, log_path, format, trace_id);
    if (*simulate) return simulate_cmd(count, seed, out_path, format);
  } catch (const io::SpecInvalid& e) {
    std::cerr << "error: " << to_string(e.code()) << '\n';
    for (const auto& f : e.findings()) {
      std::cerr << "  " << to_string(f.severity) << ' ' << f.code << ' ' << f.path << ": "
                << f.message << '\n';
    }
    return kDomainError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>

#include "pcmeter/aggregate.hpp"
#include "pcmeter/io.hpp"
#include "pcmeter/metrics.hpp"
#include "pcmeter/payment.hpp"
#include "pcmeter/projection.hpp"

namespace fs = std::filesystem;
using namespace pcmeter;

namespace {

constexpr double kTol = 1e-9;

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

void expect_near(double got, double want, double tol, const std::string& what) {
  if (!(std::fabs(got - want) <= tol)) {
    std::ostringstream out;
    out.precision(17);
    out << what << ": got " << got << ", want " << want;
    throw Failure{out.str()};
  }
}

fs::path fixture(const std::string& name) { return fs::path(PCMETER_FIXTURES) / name; }

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "pcmeter-acceptance";
  fs::create_directories(dir);
  return dir / name;
}

const ComplianceSpec& spec() {
  static const ComplianceSpec s = io::load_spec(fixture("payment.spec.json"));
  return s;
}

const TaskResult& task(const TraceResult& r, const std::string& id) {
  for (const auto& t : r.task_results) {
    if (t.task_id == id) return t;
  }
  throw Failure{"task " + id + " missing from trace " + r.trace_id};
}

TraceResult evaluate_scenario(std::size_t index) {
  auto scenarios = payment::reference_scenarios();
  const ProcessLog log = payment::generate_log(std::span(scenarios).subspan(index, 1));
  return tau_measure(log.traces.at(0), spec());
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  if (status != -1 && WIFEXITED(status)) return WEXITSTATUS(status);
#endif
  return status;
}

std::string quote(const fs::path& p) { return "\"" + p.string() + "\""; }

// ---------------------------------------------------------------------------

std::string full_compliance() {
  const auto start = std::chrono::steady_clock::now();
  const TraceResult r = evaluate_scenario(0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect_near(task(r, "T2").t_measure.value(), 1.0, kTol, "T2");
  expect_near(task(r, "T6").t_measure.value(), 1.0, kTol, "T6");
  expect_near(r.tau_measure.value(), 1.0, kTol, "tau");
  expect(secs < 1.0, "runtime " + std::to_string(secs) + "s");
  return "T2=1 T6=1 tau=1 in " + std::to_string(secs * 1e3).substr(0, 5) + " ms";
}

std::string partial_compliance() {
  const payment::PaymentScenario s = payment::reference_scenarios().at(1);
  const payment::Payable p = payment::compute_payable(s);
  expect_near(p.interest, 75.0, kTol, "interest");
  expect_near(p.amount, 575.0, kTol, "payable");
  const TraceResult r = evaluate_scenario(1);
  expect_near(task(r, "T2").t_measure.value(), 0.0, kTol, "T2");
  expect_near(task(r, "T3").t_measure.value(), 0.8, kTol, "T3");
  expect_near(task(r, "T6").t_measure.value(), 1.0, kTol, "T6");
  expect_near(r.dimension_minima.at(DimensionId::temporal()).value(), 0.6, kTol, "temporal min");
  expect_near(r.dimension_minima.at(DimensionId::monetary()).value(), 1.0, kTol, "monetary min");
  expect_near(r.tau_measure.value(), 0.8, kTol, "tau");
  return "interest 75, payable 575, T=(0, 0.8, 1), minima (0.6, 1), tau=0.8";
}

std::string non_compliance() {
  expect(payment::compute_payable(payment::reference_scenarios().at(2)).terminated,
         "scenario not terminated");
  const TraceResult r = evaluate_scenario(2);
  int scored = 0;
  for (const auto& t : r.task_results) {
    if (t.t_measure.is_null()) continue;
    ++scored;
    expect(t.t_measure.value() == 0.0, "task " + t.task_id + " not 0");
  }
  expect(scored > 0, "no scored task");
  for (const auto& [d, m] : r.dimension_minima) expect(m.value() == 0.0, d.name() + " minimum not 0");
  expect(r.tau_measure.value() == 0.0, "tau not 0");
  return std::to_string(scored) + " scored tasks all 0, tau=0";
}

std::string aggregator_examples() {
  std::vector<AggregateInput> xs{{"a", Metric(0.7), {}, 1}, {"b", Metric(0.9), {}, 1},
                                 {"c", Metric(1.0), {}, 1}};
  const double avg = aggregate({AggregatorKind::kAverage, "", {}}, xs, {}).value();
  const double prod = aggregate({AggregatorKind::kProduct, "", {}}, xs, {}).value();
  expect_near(avg, 0.8667, 5e-4, "average");
  expect_near(avg, 13.0 / 15.0, kTol, "average");
  expect_near(prod, 0.63, kTol, "product");
  return "average " + io::format_number(avg) + ", product " + io::format_number(prod);
}

std::string scale_mapping() {
  const CategoricalMap m = default_scale_map({"low", "medium", "high"});
  const double want[] = {0.33, 0.67, 1.0};
  std::string shown;
  for (std::size_t i = 0; i < 3; ++i) {
    const double got = m.scores.at(m.scale[i]);
    expect_near(got, want[i], 5e-3, m.scale[i]);
    expect_near(got, double(i + 1) / 3.0, kTol, m.scale[i]);
    shown += (i ? ", " : "") + io::format_number(got);
  }
  return "(" + shown + ")";
}

std::string p_measure_three() {
  const ProcessLog log = io::load_log(fixture("scenarios.jsonl"), io::LogFormat::kJsonl);
  expect(log.traces.size() == 3, "log size");
  const ProcessResult r = p_measure(log, spec());
  expect_near(r.p_measure.value(), 0.6, 1e-12, "pMeasure");
  expect(io::report_json(r).find("\"pMeasure\": 0.6,") != std::string::npos,
         "report does not state pMeasure 0.6");
  return "pMeasure=0.6 over 3 traces";
}

std::string property_suite() {
  struct Item {
    const char* label;
    const char* filter;
  };
  const Item items[] = {
      {"a", "property: classify_dimension*"},
      {"b", "property: bands are total*,property: raising one score*,property: payable is monotone*"},
      {"c", "property: tau-measure matches*"},
      {"d", "property: parse/print/parse*"},
      {"e", "property: task and trace classification*"},
  };
  const auto start = std::chrono::steady_clock::now();
  std::string summary, failed;
  const std::regex counts(R"(test cases:\s*(\d+)\s*\|\s*(\d+) passed\s*\|\s*(\d+) failed)");
  for (const auto& item : items) {
    const fs::path out = scratch(std::string("property-") + item.label + ".txt");
    const int code = run(quote(PCMETER_UNIT_TESTS) + " --no-version --test-case=\"" +
                         item.filter + "\" > " + quote(out) + " 2>&1");
    std::ifstream in(out);
    std::stringstream text;
    text << in.rdbuf();
    std::smatch m;
    const std::string body = text.str();
    const bool parsed = std::regex_search(body, m, counts);
    const int cases = parsed ? std::stoi(m[1]) : 0;
    const bool ok = code == 0 && parsed && cases > 0 && std::stoi(m[3]) == 0;
    summary += std::string(summary.empty() ? "" : " ") + item.label + (ok ? "=ok" : "=FAIL") +
               "(" + std::to_string(cases) + ")";
    if (!ok) failed += item.label;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(failed.empty(), "failing items " + failed + ": " + summary);
  expect(secs < 60.0, "runtime " + std::to_string(secs) + "s");
  return summary + " in " + std::to_string(secs).substr(0, 4) + " s";
}

std::string cli_golden() {
  const std::string base = quote(PCMETER_CLI) + " evaluate --spec " +
                           quote(fixture("payment.spec.json")) + " --log " +
                           quote(fixture("scenarios.jsonl"));
  const fs::path a = scratch("golden-1a.json"), b = scratch("golden-1b.json"),
                 c = scratch("golden-4.json");
  const std::string quiet = " > " + quote(scratch("golden.log")) + " 2>&1";
  expect(run(base + " --jobs 1 --out " + quote(a) + quiet) == 0, "run 1 failed");
  expect(run(base + " --jobs 1 --out " + quote(b) + quiet) == 0, "run 2 failed");
  expect(run(base + " --jobs 4 --out " + quote(c) + quiet) == 0, "run with 4 jobs failed");
  const std::string ra = io::read_file(a);
  expect(!ra.empty(), "empty report");
  expect(ra == io::read_file(b), "two runs differ");
  expect(ra == io::read_file(c), "--jobs 1 and --jobs 4 differ");
  return std::to_string(ra.size()) + " bytes identical across runs and --jobs 1/4";
}

std::string spec_validation() {
  auto codes = [](const char* name) {
    try {
      io::load_spec(fixture(name));
    } catch (const io::SpecInvalid& e) {
      std::string out;
      for (const auto& f : e.findings()) {
        if (f.severity == Finding::Severity::kError) out += (out.empty() ? "" : ",") + f.code;
      }
      return out;
    }
    return std::string("accepted");
  };
  const std::string cutoff = codes("bad_cutoff.spec.json");
  const std::string bands = codes("non_monotone.spec.json");
  expect(cutoff == "CUTOFF_PLUS_THRESHOLD_EXCEEDS_ONE", "bad_cutoff: " + cutoff);
  expect(bands == "NON_MONOTONE_BANDS", "non_monotone: " + bands);
  const std::string cli = quote(PCMETER_CLI) + " validate-spec --spec ";
  const std::string quiet = " > " + quote(scratch("validate.log")) + " 2>&1";
  expect(run(cli + quote(fixture("bad_cutoff.spec.json")) + quiet) == 1, "CLI exit for bad_cutoff");
  expect(run(cli + quote(fixture("non_monotone.spec.json")) + quiet) == 1,
         "CLI exit for non_monotone");
  return cutoff + ", " + bands;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<std::string()>> criteria[] = {
      {"full-compliance reproduction", full_compliance},
      {"partial-compliance reproduction", partial_compliance},
      {"non-compliance reproduction", non_compliance},
      {"aggregator examples", aggregator_examples},
      {"scale mapping", scale_mapping},
      {"P-measure", p_measure_three},
      {"property suite", property_suite},
      {"CLI golden report", cli_golden},
      {"spec validation", spec_validation},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    std::string verdict, detail;
    try {
      detail = check();
      verdict = "PASS";
    } catch (const Failure& f) {
      detail = f.what;
      verdict = "FAIL";
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      verdict = "FAIL";
    }
    if (verdict == "FAIL") ++failures;
    std::cout << verdict << "  " << n << ". " << name << ": " << detail << "\n";
  }
  std::cout << (n - failures) << "/" << n << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pcmeter/aggregate.hpp"
#include "pcmeter/io.hpp"
#include "pcmeter/metrics.hpp"
#include "pcmeter/payment.hpp"
#include "pcmeter/rule.hpp"

namespace py = pybind11;
using namespace pcmeter;

namespace {

py::object metric(const Metric& m) {
  if (m.is_null()) return py::none();
  return py::float_(m.value());
}

py::object cls(const std::optional<ComplianceClass>& c) {
  if (!c) return py::none();
  return py::str(std::string(to_string(*c)));
}

io::LogFormat log_format(const std::optional<std::string>& name, const std::string& path) {
  if (name) return io::log_format_from_string(*name);
  return path.size() > 4 && path.ends_with(".csv") ? io::LogFormat::kCsv : io::LogFormat::kJsonl;
}

py::dict finding_dict(const Finding& f) {
  py::dict d;
  d["severity"] = std::string(to_string(f.severity));
  d["code"] = f.code;
  d["path"] = f.path;
  d["message"] = f.message;
  return d;
}

py::dict task_dict(const TaskResult& t) {
  py::list dims;
  for (const auto& dm : t.dimension_metrics) {
    py::dict contributing;
    for (const auto& c : dm.contributing) contributing[py::str(c.attribute)] = metric(c.score);
    py::dict d;
    d["dimension"] = dm.dimension.name();
    d["value"] = metric(dm.value);
    d["class"] = cls(dm.cls);
    d["contributing"] = contributing;
    dims.append(d);
  }
  py::dict d;
  d["task"] = t.task_id;
  d["position"] = t.position;
  d["t_measure"] = metric(t.t_measure);
  d["class"] = cls(t.cls);
  d["dimensions"] = dims;
  return d;
}

py::dict trace_dict(const TraceResult& r) {
  py::dict minima;
  for (const auto& [dim, m] : r.dimension_minima) minima[py::str(dim.name())] = metric(m);
  py::list tasks;
  for (const auto& t : r.task_results) tasks.append(task_dict(t));
  py::dict d;
  d["trace_id"] = r.trace_id;
  d["tau_measure"] = metric(r.tau_measure);
  d["class"] = std::string(to_string(r.cls));
  d["dimension_minima"] = minima;
  d["tasks"] = tasks;
  return d;
}

AggregatorKind aggregator(const std::string& name) { return aggregator_kind_from_string(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Partial-compliance measures for business process traces";

  // Error carries .code (e.g. "KIND_MISMATCH") and, for SPEC_INVALID, .findings.
  static PyObject* error_type = PyErr_NewException("pcmeter.Error", PyExc_RuntimeError, nullptr);
  m.add_object("Error", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(py::str(e.what()));
      exc.attr("code") = std::string(to_string(e.code()));
      if (auto* bad = dynamic_cast<const io::SpecInvalid*>(&e)) {
        py::list findings;
        for (const auto& f : bad->findings()) findings.append(finding_dict(f));
        exc.attr("findings") = findings;
      }
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<ComplianceSpec>(m, "Spec")
      .def_property_readonly("spec_id", [](const ComplianceSpec& s) { return s.spec_id; })
      .def_property_readonly("rules", [](const ComplianceSpec& s) {
        std::vector<std::string> names;
        for (const auto& [name, _] : s.rules) names.push_back(name);
        return names;
      })
      .def("validate", [](const ComplianceSpec& s) {
        py::list out;
        for (const auto& f : validate_spec(s)) out.append(finding_dict(f));
        return out;
      })
      .def("__repr__", [](const ComplianceSpec& s) {
        return "<Spec " + s.spec_id + ", " + std::to_string(s.attribute_specs.size()) +
               " attribute rows>";
      });

  py::class_<ProcessLog>(m, "Log")
      .def_property_readonly("process_id", [](const ProcessLog& l) { return l.process_id; })
      .def_property_readonly("trace_ids", [](const ProcessLog& l) {
        std::vector<std::string> ids;
        for (const auto& t : l.traces) ids.push_back(t.trace_id);
        return ids;
      })
      .def("tasks", [](const ProcessLog& l, const std::string& trace_id) {
        for (const auto& t : l.traces) {
          if (t.trace_id != trace_id) continue;
          std::vector<std::string> ids;
          for (const auto& e : t.events) ids.push_back(e.task_id);
          return ids;
        }
        throw Error(ErrorCode::kUnknownTraceId, "no trace '" + trace_id + "'");
      })
      .def("write", [](const ProcessLog& l, const std::string& format) {
        return io::write_log(l, io::log_format_from_string(format));
      }, py::arg("format") = "jsonl")
      .def("__len__", [](const ProcessLog& l) { return l.traces.size(); })
      .def("__repr__", [](const ProcessLog& l) {
        return "<Log " + l.process_id + ", " + std::to_string(l.traces.size()) + " traces>";
      });

  py::class_<ProcessResult>(m, "Result")
      .def_property_readonly("spec_id", [](const ProcessResult& r) { return r.spec_id; })
      .def_property_readonly("process_id", [](const ProcessResult& r) { return r.process_id; })
      .def_property_readonly("p_measure", [](const ProcessResult& r) { return metric(r.p_measure); })
      .def_property_readonly("traces", [](const ProcessResult& r) {
        py::list out;
        for (const auto& t : r.trace_results) out.append(trace_dict(t));
        return out;
      })
      .def("report", [](const ProcessResult& r, const std::string& format) {
        return io::report_format_from_string(format) == io::ReportFormat::kJson ? io::report_json(r)
                                                                                : io::report_csv(r);
      }, py::arg("format") = "json")
      .def("explain", [](const ProcessResult& r, const std::string& trace_id) {
        for (const auto& t : r.trace_results) {
          if (t.trace_id == trace_id) return io::explain_text(t);
        }
        throw Error(ErrorCode::kUnknownTraceId, "no trace '" + trace_id + "'");
      })
      .def("__repr__", [](const ProcessResult& r) {
        return "<Result " + r.process_id + ", P=" +
               (r.p_measure.is_null() ? std::string("null") : format_number(r.p_measure.value())) +
               ">";
      });

  m.def("load_spec", [](const std::filesystem::path& p) { return io::load_spec(p); },
        py::arg("path"), "Read and validate a spec document");
  m.def("parse_spec", [](const std::string& text, bool validate) {
    ComplianceSpec spec = io::parse_spec(text);
    if (validate) {
      auto findings = validate_spec(spec);
      if (has_errors(findings)) throw io::SpecInvalid(std::move(findings));
    }
    return spec;
  }, py::arg("text"), py::arg("validate") = true);

  m.def("load_log", [](const std::filesystem::path& p, std::optional<std::string> format) {
    return io::load_log(p, log_format(format, p.string()));
  }, py::arg("path"), py::arg("format") = py::none());
  m.def("parse_log", [](const std::string& text, const std::string& format,
                        const std::string& process_id) {
    return io::parse_log(text, io::log_format_from_string(format), process_id);
  }, py::arg("text"), py::arg("format") = "jsonl", py::arg("process_id") = "log");

  m.def("evaluate", [](const ProcessLog& log, const ComplianceSpec& spec, unsigned jobs) {
    py::gil_scoped_release release;
    return p_measure(log, spec, jobs);
  }, py::arg("log"), py::arg("spec"), py::arg("jobs") = 1,
        "Score every trace; jobs=0 uses all cores");

  m.def("classify", [](double value, double cutoff, double threshold) {
    return std::string(to_string(classify_dimension(Metric(value), {cutoff, threshold})));
  }, py::arg("value"), py::arg("cutoff"), py::arg("threshold"));

  m.def("aggregate", [](const std::string& kind, const std::vector<std::optional<double>>& scores,
                        std::optional<std::vector<double>> weights) {
    std::vector<AggregateInput> in;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      AggregateInput a{"x" + std::to_string(i), scores[i] ? Metric(*scores[i]) : Metric::null(),
                       std::nullopt, 1.0};
      if (weights) a.weight = weights->at(i);
      in.push_back(a);
    }
    return metric(aggregate({aggregator(kind), "", {}}, in, {}));
  }, py::arg("kind"), py::arg("scores"), py::arg("weights") = py::none());

  m.def("scale_map", [](const std::vector<std::string>& levels) {
    return default_scale_map(levels).scores;
  }, py::arg("levels"));

  m.def("format_rule", [](const std::string& text) { return rule::print(rule::parse(text)); },
        py::arg("text"));
  m.def("evaluate_rule", [](const std::string& text, const std::map<std::string, std::optional<double>>& phi,
                            const std::map<std::string, double>& val) {
    rule::Bindings b;
    for (const auto& [name, v] : phi) b[name].projected = v ? Metric(*v) : Metric::null();
    for (const auto& [name, v] : val) b[name].raw = v;
    return metric(rule::evaluate(rule::parse(text), b));
  }, py::arg("text"), py::arg("phi") = std::map<std::string, std::optional<double>>{},
        py::arg("val") = std::map<std::string, double>{});

  m.def("payable", [](double principal, std::int64_t pay_in_days) {
    payment::PaymentScenario s;
    s.principal = principal;
    s.pay_in_days = pay_in_days;
    payment::check_scenario(s);
    const payment::Payable p = payment::compute_payable(s);
    py::dict d;
    d["amount"] = p.amount;
    d["interest"] = p.interest;
    d["penalty"] = p.penalty;
    d["terminated"] = p.terminated;
    return d;
  }, py::arg("principal"), py::arg("pay_in_days"));

  m.def("reference_log", [] {
    auto scenarios = payment::reference_scenarios();
    return payment::generate_log(scenarios, "payment-scenarios");
  });
  m.def("simulate", [](std::size_t count, std::uint64_t seed) {
    auto scenarios = payment::random_scenarios(count, seed);
    return payment::generate_log(scenarios, "simulated");
  }, py::arg("count"), py::arg("seed") = 1);
}

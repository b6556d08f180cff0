#include "pcmeter/payment.hpp"

#include <algorithm>
#include <random>

#include "pcmeter/error.hpp"

namespace pcmeter::payment {

void check_scenario(const PaymentScenario& s) {
  if (s.principal < 0 || s.pay_in_days < 0 || s.equipment_delivery_days < 0 ||
      s.interest_rate_per_day < 0 || s.penalty_rate_per_day < 0 || s.grace_days < 0) {
    throw Error(ErrorCode::kInvalidValue, "payment scenario has a negative parameter");
  }
  if (s.interest_window_days <= 0 || s.penalty_window_days <= 0) {
    throw Error(ErrorCode::kInvalidValue, "payment windows must be positive");
  }
}

Payable compute_payable(const PaymentScenario& s) {
  check_scenario(s);
  const std::int64_t interest_end = s.grace_days + s.interest_window_days;
  const std::int64_t penalty_end = interest_end + s.penalty_window_days;
  const std::int64_t d = std::min(s.pay_in_days, penalty_end);

  Payable out;
  out.terminated = s.pay_in_days > penalty_end;
  if (d > s.grace_days) {
    out.interest = s.principal * s.interest_rate_per_day * static_cast<double>(d - s.grace_days);
  }
  if (d > interest_end) {
    out.penalty = s.principal * s.penalty_rate_per_day * static_cast<double>(d - interest_end);
  }
  out.amount = s.principal + out.interest + out.penalty;
  return out;
}

const std::array<TaskSequence, 13>& catalog() {
  static const std::array<TaskSequence, 13> kCatalog = {{
      {"T1", "T2", "T3", "T4", "T5"},
      {"T1", "T3", "T2", "T6"},
      {"T1", "T2", "T3", "T4", "T6"},
      {"T1", "T3", "T4", "T2", "T5"},
      {"T1", "T2", "T3", "T6"},
      {"T1", "T3", "T4", "T2", "T6"},
      {"T1", "T2", "T6"},
      {"T1", "T3", "T4", "T5", "T2"},
      {"T1", "T3", "T2", "T4", "T5"},
      {"T1", "T3", "T4", "T6", "T2"},
      {"T1", "T3", "T2", "T4", "T6"},
      {"T1", "T3", "T6", "T2"},
      {"T1", "T6", "T2"},
  }};
  return kCatalog;
}

std::size_t catalog_index(std::span<const std::string> sequence) {
  const auto& all = catalog();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (std::equal(all[i].begin(), all[i].end(), sequence.begin(), sequence.end())) return i + 1;
  }
  return 0;
}

bool in_catalog(std::span<const std::string> sequence) { return catalog_index(sequence) != 0; }

const TaskSequence& sequence_for(const PaymentScenario& s) {
  const auto& all = catalog();
  const std::int64_t interest_end = s.grace_days + s.interest_window_days;
  const std::int64_t penalty_end = interest_end + s.penalty_window_days;
  if (s.pay_in_days <= s.grace_days) return all[6];   // T1 T2 T6
  if (s.pay_in_days <= interest_end) return all[4];   // T1 T2 T3 T6
  if (s.pay_in_days <= penalty_end) return all[2];    // T1 T2 T3 T4 T6
  return all[0];                                      // T1 T2 T3 T4 T5
}

namespace {

AttributeValue amount(std::string name, double v) {
  return {std::move(name), Number{v, Unit::kCurrency}};
}

AttributeValue days(std::string name, std::int64_t v) {
  return {std::move(name), Number{static_cast<double>(v), Unit::kDays}};
}

bool is_payment_task(const std::string& task) {
  return task == "T2" || task == "T3" || task == "T4";
}

}  // namespace

ProcessLog generate_log(std::span<const PaymentScenario> scenarios, std::string process_id) {
  ProcessLog log;
  log.process_id = std::move(process_id);
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& s = scenarios[i];
    const Payable due = compute_payable(s);
    const TaskSequence& sequence = sequence_for(s);

    std::string settling;
    if (!due.terminated) {
      for (const auto& task : sequence) {
        if (is_payment_task(task)) settling = task;
      }
    }

    Trace trace;
    trace.trace_id = s.label.empty() ? "trace-" + std::to_string(i + 1) : s.label;
    for (const auto& task : sequence) {
      TaskEvent event;
      event.task_id = task;
      event.position = trace.events.size();
      if (task == "T1") {
        event.attributes.push_back(amount("invoiceValue", s.principal));
        event.attributes.push_back({"invoiceDate", Date{"2019-04-01"}});
      } else if (is_payment_task(task)) {
        event.attributes.push_back(days("payInDays", s.pay_in_days));
        event.attributes.push_back(amount("paymentReceived", task == settling ? due.amount : 0.0));
        event.attributes.push_back(amount("invoiceValue", s.principal));
        event.attributes.push_back(amount("interest", due.interest));
        event.attributes.push_back(amount("penalty", due.penalty));
      } else if (task == "T6") {
        event.attributes.push_back(days("equipmentDeliveryDays", s.equipment_delivery_days));
      }
      trace.events.push_back(std::move(event));
    }
    log.traces.push_back(std::move(trace));
  }
  return log;
}

std::vector<PaymentScenario> random_scenarios(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pay_days(1, 40);
  std::uniform_int_distribution<std::int64_t> principal(100, 1000);
  std::uniform_int_distribution<std::int64_t> delivery(1, 10);
  std::vector<PaymentScenario> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PaymentScenario s;
    s.label = "sim-" + std::to_string(i + 1);
    s.pay_in_days = pay_days(rng);
    s.principal = static_cast<double>(principal(rng));
    s.equipment_delivery_days = delivery(rng);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PaymentScenario> reference_scenarios() {
  PaymentScenario full;
  full.label = "full-compliance";
  full.pay_in_days = 10;
  full.equipment_delivery_days = 2;

  PaymentScenario partial = full;
  partial.label = "partial-compliance";
  partial.pay_in_days = 20;

  PaymentScenario non = full;
  non.label = "non-compliance";
  non.pay_in_days = 33;

  return {full, partial, non};
}

}  // namespace pcmeter::payment

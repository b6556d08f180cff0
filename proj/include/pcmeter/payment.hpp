#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcmeter/model.hpp"

// The invoice-payment example: a customer pays within 15 days, or with 3%
// daily interest on the principal for the next 7 days, or additionally with
// a 2.5% daily penalty on the principal for the 10 days after that; beyond
// day 32 the contract is terminated.
//
//   T1 receive invoice      T4 2.5% + 3% per day + principal
//   T2 make payment         T5 terminate contract
//   T3 3% per day + principal   T6 confirm equipment delivery
namespace pcmeter::payment {

struct PaymentScenario {
  std::string label;  // becomes the trace id when non-empty
  double principal = 500.0;
  std::int64_t pay_in_days = 0;
  std::int64_t equipment_delivery_days = 0;
  double interest_rate_per_day = 0.03;
  double penalty_rate_per_day = 0.025;
  std::int64_t grace_days = 15;
  std::int64_t interest_window_days = 7;
  std::int64_t penalty_window_days = 10;

  friend bool operator==(const PaymentScenario&, const PaymentScenario&) = default;
};

// Throws Error(kInvalidValue) on negative amounts/days or empty windows.
void check_scenario(const PaymentScenario& s);

struct Payable {
  double amount = 0.0;   // principal + interest + penalty; the open obligation when terminated
  double interest = 0.0;
  double penalty = 0.0;
  bool terminated = false;

  friend bool operator==(const Payable&, const Payable&) = default;
};

// Interest accrues per day past the grace period; the penalty accrues per
// day past the interest window. Both are charged on the principal. When
// terminated, amounts are those accrued by the last day of the penalty
// window.
Payable compute_payable(const PaymentScenario& s);

using TaskSequence = std::vector<std::string>;

// The 13 task sequences the payment model can produce, in catalog order.
const std::array<TaskSequence, 13>& catalog();

// 1-based catalog index, or 0 when the sequence is not in the catalog.
std::size_t catalog_index(std::span<const std::string> sequence);
bool in_catalog(std::span<const std::string> sequence);

// The catalog sequence a scenario follows: payment within the grace period,
// within the interest window, within the penalty window, or termination.
const TaskSequence& sequence_for(const PaymentScenario& s);

// One trace per scenario. Payment tasks carry payInDays, paymentReceived
// (the full payable on the task that settled the invoice, 0 on the others)
// and the invoiceValue/interest/penalty the amount due is made of; T1 carries
// the invoice meta data and T6 the delivery time.
ProcessLog generate_log(std::span<const PaymentScenario> scenarios,
                        std::string process_id = "payment");

// Scenarios drawn uniformly: payInDays 1..40, principal 100..1000 whole
// dollars, delivery 1..10 days. Deterministic for a given seed.
std::vector<PaymentScenario> random_scenarios(std::size_t count, std::uint64_t seed);

// The three worked scenarios: full, partial and non-compliance.
std::vector<PaymentScenario> reference_scenarios();

}  // namespace pcmeter::payment

#include "doctest.h"

#include <cmath>
#include <set>

#include "pcmeter/metrics.hpp"
#include "pcmeter/payment.hpp"
#include "support.hpp"

using namespace pcmeter;
using namespace pcmeter::payment;
using pcmeter::testing::payment_spec;

namespace {

PaymentScenario scenario(double principal, std::int64_t d) {
  PaymentScenario s;
  s.principal = principal;
  s.pay_in_days = d;
  s.equipment_delivery_days = 2;
  return s;
}

// Day-by-day accrual: each day past the grace period adds 3%, each day past
// the interest window adds 2.5%, up to the last day of the penalty window.
Payable accrue(const PaymentScenario& s) {
  Payable p;
  const std::int64_t last = s.grace_days + s.interest_window_days + s.penalty_window_days;
  for (std::int64_t day = 1; day <= std::min(s.pay_in_days, last); ++day) {
    if (day > s.grace_days) p.interest += s.principal * s.interest_rate_per_day;
    if (day > s.grace_days + s.interest_window_days) p.penalty += s.principal * s.penalty_rate_per_day;
  }
  p.terminated = s.pay_in_days > last;
  p.amount = s.principal + p.interest + p.penalty;
  return p;
}

std::vector<std::string> tasks_of(const Trace& t) {
  std::vector<std::string> out;
  for (const auto& e : t.events) out.push_back(e.task_id);
  return out;
}

}  // namespace

TEST_CASE("compute_payable examples") {
  CHECK(compute_payable(scenario(500, 10)) == Payable{500, 0, 0, false});
  const Payable p20 = compute_payable(scenario(500, 20));
  CHECK(p20.amount == doctest::Approx(575).epsilon(1e-12));
  CHECK(p20.interest == doctest::Approx(75).epsilon(1e-12));
  CHECK(p20.penalty == 0.0);
  CHECK_FALSE(p20.terminated);
  CHECK(compute_payable(scenario(500, 33)).terminated);

  const Payable p25 = compute_payable(scenario(500, 25));
  CHECK(std::fabs(p25.amount - 687.5) <= 1e-9);
  CHECK(std::fabs(p25.interest - 150) <= 1e-9);
  CHECK(std::fabs(p25.penalty - 37.5) <= 1e-9);
  CHECK_FALSE(p25.terminated);
}

TEST_CASE("property: closed form agrees with day-by-day accrual") {
  for (double principal : {100.0, 500.0, 733.0, 1000.0}) {
    for (std::int64_t d = 0; d <= 40; ++d) {
      const PaymentScenario s = scenario(principal, d);
      const Payable got = compute_payable(s);
      const Payable want = accrue(s);
      CAPTURE(d);
      CHECK(std::fabs(got.interest - want.interest) <= 1e-9);
      CHECK(std::fabs(got.penalty - want.penalty) <= 1e-9);
      CHECK(std::fabs(got.amount - want.amount) <= 1e-9);
      CHECK(got.terminated == want.terminated);
    }
  }
}

TEST_CASE("property: payable is monotone and zero terms are exact") {
  for (double principal : {100.0, 500.0, 999.0}) {
    Payable prev = compute_payable(scenario(principal, 0));
    for (std::int64_t d = 0; d <= 32; ++d) {
      const Payable p = compute_payable(scenario(principal, d));
      CHECK(p.amount >= prev.amount);
      CHECK(p.interest >= prev.interest);
      CHECK(p.penalty >= prev.penalty);
      CHECK((p.interest == 0.0) == (d <= 15));
      CHECK((p.penalty == 0.0) == (d <= 22));
      CHECK_FALSE(p.terminated);
      prev = p;
    }
  }
}

TEST_CASE("invalid scenarios") {
  PaymentScenario s = scenario(500, 10);
  s.principal = -1;
  CHECK_THROWS_AS(check_scenario(s), Error);
  s = scenario(500, -2);
  CHECK_THROWS_AS(check_scenario(s), Error);
  s = scenario(500, 10);
  s.interest_window_days = 0;
  CHECK_THROWS_AS(check_scenario(s), Error);
  CHECK_NOTHROW(check_scenario(scenario(500, 10)));
}

TEST_CASE("catalog") {
  const auto& cat = catalog();
  CHECK(cat.size() == 13);
  std::set<TaskSequence> distinct(cat.begin(), cat.end());
  CHECK(distinct.size() == 13);
  for (const auto& seq : cat) CHECK(seq.front() == "T1");
  const TaskSequence tau7{"T1", "T2", "T6"};
  const TaskSequence tau5{"T1", "T2", "T3", "T6"};
  CHECK(cat[6] == tau7);
  CHECK(cat[4] == tau5);
  CHECK(catalog_index(tau7) == 7);
  CHECK(in_catalog(tau7));
  CHECK_FALSE(in_catalog(std::vector<std::string>{"T2", "T1"}));
  CHECK(catalog_index(std::vector<std::string>{}) == 0);
}

TEST_CASE("sequence brackets") {
  CHECK(sequence_for(scenario(500, 15)) == TaskSequence{"T1", "T2", "T6"});
  CHECK(sequence_for(scenario(500, 16)) == TaskSequence{"T1", "T2", "T3", "T6"});
  CHECK(sequence_for(scenario(500, 22)) == TaskSequence{"T1", "T2", "T3", "T6"});
  CHECK(sequence_for(scenario(500, 32)) == TaskSequence{"T1", "T2", "T3", "T4", "T6"});
  CHECK(sequence_for(scenario(500, 33)) == TaskSequence{"T1", "T2", "T3", "T4", "T5"});
}

TEST_CASE("generated reference log evaluates to (1, 0.8, 0)") {
  auto scenarios = reference_scenarios();
  REQUIRE(scenarios.size() == 3);
  const ProcessLog log = generate_log(scenarios);
  REQUIRE_NOTHROW(check_log(log));
  const ProcessResult r = p_measure(log, payment_spec());
  CHECK(r.trace_results[0].tau_measure.value() == 1.0);
  CHECK(std::fabs(r.trace_results[1].tau_measure.value() - 0.8) <= 1e-9);
  CHECK(r.trace_results[2].tau_measure.value() == 0.0);

  const TaskEvent& t3 = log.traces[1].events[2];
  CHECK(t3.task_id == "T3");
  CHECK(std::get<Number>(t3.find("paymentReceived")->value).value == 575.0);
  CHECK(std::get<Number>(t3.find("interest")->value).value == 75.0);

  CHECK(generate_log(std::vector<PaymentScenario>{}).traces.empty());
  CHECK_THROWS_AS(p_measure(generate_log(std::vector<PaymentScenario>{}), payment_spec()), Error);
}

TEST_CASE("property: random scenarios produce catalog traces") {
  const auto scenarios = random_scenarios(100, 42);
  CHECK(scenarios == random_scenarios(100, 42));
  const ProcessLog log = generate_log(scenarios);
  REQUIRE(log.traces.size() == 100);
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& s = scenarios[i];
    CHECK(s.pay_in_days >= 1);
    CHECK(s.pay_in_days <= 40);
    CHECK(s.principal >= 100);
    CHECK(s.principal <= 1000);
    CHECK(s.principal == std::floor(s.principal));
    const auto seq = tasks_of(log.traces[i]);
    CHECK(in_catalog(seq));
    CHECK(seq == sequence_for(s));
  }
  const ProcessResult r = p_measure(log, payment_spec(), 4);
  CHECK(r.p_measure.value() >= 0.0);
  CHECK(r.p_measure.value() <= 1.0);
}

#include "doctest.h"

#include <random>

#include "pcmeter/error.hpp"
#include "pcmeter/projection.hpp"
#include "support.hpp"

using namespace pcmeter;
using namespace pcmeter::testing;

namespace {

NumericBands pay_in_days_bands() {
  return NumericBands{Direction::kLowerIsBetter,
                      {{15.0, 1.0}, {22.0, 0.6}, {32.0, 0.3}, {std::nullopt, 0.0}},
                      {}};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidValue;
}

}  // namespace

TEST_CASE("payInDays bands from the payment table") {
  const rule::RuleTable rules;
  const ProjectionFn fn = pay_in_days_bands();
  CHECK(project(fn, days("payInDays", 10), rules).value() == 1.0);
  CHECK(project(fn, days("payInDays", 15), rules).value() == 1.0);
  CHECK(project(fn, days("payInDays", 20), rules).value() == 0.6);
  CHECK(project(fn, days("payInDays", 22), rules).value() == 0.6);
  CHECK(project(fn, days("payInDays", 32), rules).value() == 0.3);
  CHECK(project(fn, days("payInDays", 40), rules).value() == 0.0);
}

TEST_CASE("paymentReceived is scored against the amount due") {
  const auto& spec = payment_spec();
  const auto& fn = projection_of(spec, "T3", "paymentReceived");
  rule::Bindings context;
  context["invoiceValue"].raw = 500;
  context["interest"].raw = 75;
  context["penalty"].raw = 0;
  auto score = [&](double paid) {
    return project(fn, money("paymentReceived", paid), spec.rules, context).value();
  };
  CHECK(score(575) == 1.0);
  CHECK(score(600) == 1.0);
  CHECK(score(574) == 0.9);
  CHECK(score(0.8 * 575) == 0.9);
  CHECK(score(0.78 * 575) == 0.5);
  CHECK(score(0.6 * 575) == 0.3);
  CHECK(score(0.49 * 575) == 0.0);
  CHECK(score(0) == 0.0);

  context.erase("penalty");
  CHECK(code_of([&] { score(575); }) == ErrorCode::kUnboundReference);
}

TEST_CASE("projection errors") {
  const rule::RuleTable rules;
  CHECK(code_of([&] { project(pay_in_days_bands(), {"payInDays", Text{"soon"}}, rules); }) ==
        ErrorCode::kKindMismatch);
  const ProjectionFn scale = default_scale_map({"low", "medium", "high"});
  CHECK(code_of([&] { project(scale, {"q", Level{"extreme"}}, rules); }) ==
        ErrorCode::kUnknownLevel);
  CHECK(code_of([&] { project(scale, {"q", Number{1.0}}, rules); }) == ErrorCode::kKindMismatch);
  CHECK(code_of([&] { project(RuleRef{"missing"}, {"q", Number{1.0}}, rules); }) ==
        ErrorCode::kUnboundReference);
}

TEST_CASE("categorical, constant and rule projections") {
  rule::RuleTable rules;
  rules.emplace("fast", rule::parse("if val(hours) <= 4 then 1 else 0.5"));
  CategoricalMap user{{"low", "medium", "high"}, {{"low", 0.25}, {"medium", 0.5}, {"high", 0.9}}, false};
  CHECK(project(user, {"q", Level{"high"}}, rules).value() == 0.9);
  CHECK(project(Constant{0.5}, {"q", Text{"anything"}}, rules).value() == 0.5);

  rule::Bindings context;
  context["hours"].raw = 3;
  CHECK(project(RuleRef{"fast"}, {"hours", Number{3}}, rules, context).value() == 1.0);
  context["hours"].raw = 6;
  CHECK(project(RuleRef{"fast"}, {"hours", Number{6}}, rules, context).value() == 0.5);
}

TEST_CASE("default scale maps level i of k to i/k") {
  auto three = default_scale_map({"low", "medium", "high"});
  CHECK(three.default_scheme);
  CHECK(three.scores.at("low") == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(three.scores.at("medium") == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(three.scores.at("high") == 1.0);

  auto two = default_scale_map({"bad", "good"});
  CHECK(two.scores.at("bad") == 0.5);
  CHECK(two.scores.at("good") == 1.0);

  auto likert = default_scale_map({"1", "2", "3", "4", "5"});
  const double expected[] = {0.2, 0.4, 0.6, 0.8, 1.0};
  for (int i = 0; i < 5; ++i) {
    CHECK(likert.scores.at(std::to_string(i + 1)) == doctest::Approx(expected[i]).epsilon(1e-15));
  }

  CHECK(code_of([] { default_scale_map({"only"}); }) == ErrorCode::kEmptyScale);
  CHECK(code_of([] { default_scale_map({}); }) == ErrorCode::kEmptyScale);
}

TEST_CASE("default scale is ascending and ends at exactly 1") {
  std::vector<std::string> levels;
  for (int k = 2; k <= 12; ++k) {
    levels.push_back("l" + std::to_string(levels.size()));
    if (levels.size() < 2) levels.push_back("l1");
    auto map = default_scale_map(levels);
    double prev = 0.0;
    for (const auto& level : levels) {
      CHECK(map.scores.at(level) > prev);
      prev = map.scores.at(level);
    }
    CHECK(prev == 1.0);
  }
}

TEST_CASE("monotonicity check") {
  CHECK(check_monotone(pay_in_days_bands()).empty());
  CHECK(check_monotone(Constant{0.5}).empty());
  CHECK(check_monotone(default_scale_map({"a", "b", "c"})).empty());

  NumericBands rising{Direction::kLowerIsBetter, {{15, 0.3}, {std::nullopt, 0.6}}, {}};
  auto findings = check_monotone(rising, "$.p");
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].code == "NON_MONOTONE_BANDS");
  CHECK(findings[0].path == "$.p.bands[1].score");

  NumericBands unordered{Direction::kLowerIsBetter, {{22, 1}, {15, 0.6}, {std::nullopt, 0}}, {}};
  CHECK(check_monotone(unordered)[0].code == "BANDS_NOT_ORDERED");

  NumericBands open_tail_missing{Direction::kLowerIsBetter, {{15, 1}, {22, 0.6}}, {}};
  CHECK(check_monotone(open_tail_missing)[0].code == "BANDS_INCOMPLETE");

  NumericBands higher{Direction::kHigherIsBetter, {{1, 1}, {0.5, 0.4}, {std::nullopt, 0}}, {}};
  CHECK(check_monotone(higher).empty());
  NumericBands higher_bad{Direction::kHigherIsBetter, {{0.5, 1}, {1, 0.4}, {std::nullopt, 0}}, {}};
  CHECK(check_monotone(higher_bad)[0].code == "BANDS_NOT_ORDERED");

  CHECK(check_monotone(Constant{1.5})[0].code == "SCORE_OUT_OF_RANGE");
  CategoricalMap partial{{"lo", "hi"}, {{"lo", 0.2}}, false};
  CHECK(check_monotone(partial)[0].code == "CATEGORICAL_LEVEL_UNSCORED");
}

namespace {

// Random band set that passes check_monotone.
NumericBands random_valid_bands(std::mt19937_64& rng, Direction direction) {
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> step(0.5, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  std::vector<double> scores;
  for (int i = 0; i < n; ++i) scores.push_back(unit(rng));
  std::sort(scores.rbegin(), scores.rend());
  NumericBands fn{direction, {}, {}};
  double bound = direction == Direction::kLowerIsBetter ? -20.0 : 20.0;
  for (int i = 0; i < n; ++i) {
    if (i + 1 == n) {
      fn.bands.push_back({std::nullopt, scores[i]});
    } else {
      bound += direction == Direction::kLowerIsBetter ? step(rng) : -step(rng);
      fn.bands.push_back({bound, scores[i]});
    }
  }
  return fn;
}

// Bands seen as disjoint intervals: band i of a lower-is-better set covers
// (bound[i-1], bound[i]]; mirrored for higher-is-better.
bool in_interval(const NumericBands& fn, std::size_t i, double x) {
  const bool lower = fn.direction == Direction::kLowerIsBetter;
  const auto& hi = fn.bands[i].bound;
  bool inside_hi = !hi || (lower ? x <= *hi : x >= *hi);
  bool beyond_prev = i == 0 || (lower ? x > *fn.bands[i - 1].bound : x < *fn.bands[i - 1].bound);
  return inside_hi && beyond_prev;
}

int covering_bands(const NumericBands& fn, double x) {
  int n = 0;
  for (std::size_t i = 0; i < fn.bands.size(); ++i) n += in_interval(fn, i, x);
  return n;
}

double interval_score(const NumericBands& fn, double x) {
  for (std::size_t i = 0; i < fn.bands.size(); ++i) {
    if (in_interval(fn, i, x)) return fn.bands[i].score;
  }
  return -1.0;
}

}  // namespace

TEST_CASE("property: bands are total and monotone") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> xs(-60.0, 60.0);
  const rule::RuleTable rules;
  for (int round = 0; round < 500; ++round) {
    const auto direction = round % 2 ? Direction::kHigherIsBetter : Direction::kLowerIsBetter;
    const NumericBands fn = random_valid_bands(rng, direction);
    REQUIRE(check_monotone(fn).empty());
    for (int k = 0; k < 20; ++k) {
      double a = xs(rng);
      double b = xs(rng);
      if (a > b) std::swap(a, b);
      const Metric ma = project(fn, {"x", Number{a}}, rules);
      const Metric mb = project(fn, {"x", Number{b}}, rules);
      REQUIRE_FALSE(ma.is_null());
      REQUIRE_FALSE(mb.is_null());
      CHECK(covering_bands(fn, a) == 1);
      CHECK(ma.value() == interval_score(fn, a));
      if (direction == Direction::kLowerIsBetter) {
        CHECK(ma.value() >= mb.value());
      } else {
        CHECK(ma.value() <= mb.value());
      }
    }
  }
}

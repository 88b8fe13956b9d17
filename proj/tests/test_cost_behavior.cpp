#include <catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "treslev/treslev.hpp"

using namespace treslev;
using Catch::Approx;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected treslev::Error");
  return ErrorCode::InvalidArgument;
}

const CostBehaviorModel kRanges{-1e-6, 21};

}  // namespace

TEST_CASE("two-point fit", "[cost]") {
  const auto m = fit_cost_model({1'000'000, 20}, {15'000'000, 6});
  const auto line = oracle::cramer_line(1'000'000, 20, 15'000'000, 6);
  CHECK(m.slope == Approx(line.slope).epsilon(1e-12));
  CHECK(m.intercept == Approx(line.intercept).epsilon(1e-12));
  CHECK(m.slope == Approx(-1e-6).epsilon(1e-12));
  CHECK(m.intercept == Approx(21).epsilon(1e-12));
  CHECK(m.unit_crossover() == Approx(10'500'000).epsilon(1e-12));
  CHECK(m.domain_limit() == Approx(21'000'000).epsilon(1e-12));
}

TEST_CASE("single-point fit with a given intercept", "[cost]") {
  const auto m = fit_cost_model(CostPoint{8'000'000, 12}, 20.0);
  CHECK(m.slope == Approx(-1e-6).epsilon(1e-12));
  CHECK(m.intercept == 20);
}

TEST_CASE("fit errors", "[cost][errors]") {
  CHECK(code_of([] { fit_cost_model({5, 3}, {5, 4}); }) == ErrorCode::DegeneratePoints);
  CHECK(code_of([] { fit_cost_model({1, 3}, {2, 4}); }) == ErrorCode::NonNegativeSlope);
  CHECK(code_of([] { fit_cost_model({1, 3}, {2, 3}); }) == ErrorCode::NonNegativeSlope);
  CHECK(code_of([] { fit_cost_model({1, -1}, {2, -1.5}); }) == ErrorCode::NonPositiveIntercept);
  CHECK(code_of([] { fit_cost_model(CostPoint{0, 3}, 4.0); }) == ErrorCode::DegeneratePoints);
}

TEST_CASE("relative elasticity endpoints", "[cost]") {
  CHECK(relative_elasticity_vf(1'000'000, kRanges) == Approx(-0.05).epsilon(1e-9));
  CHECK(relative_elasticity_vf(15'000'000, kRanges) == Approx(-2.5).epsilon(1e-9));
  CHECK(relative_elasticity_vf(10'500'000, kRanges) == Approx(-1.0).epsilon(1e-9));
  CHECK(relative_elasticity_vf(3'000'000, kRanges) ==
        Approx(oracle::fd_relative_elasticity(3'000'000, -1e-6, 21)).epsilon(1e-6));
}

TEST_CASE("relative elasticity outside the domain", "[cost][errors]") {
  CHECK(code_of([] { relative_elasticity_vf(0, kRanges); }) == ErrorCode::OutsideValidityDomain);
  CHECK(code_of([] { relative_elasticity_vf(21'000'000, kRanges); }) == ErrorCode::OutsideValidityDomain);
  CHECK(code_of([] { relative_elasticity_vf(-5, kRanges); }) == ErrorCode::OutsideValidityDomain);
}

TEST_CASE("arc elasticity", "[cost]") {
  CHECK(arc_elasticity_vf(8'000'000, 12, 10'000'000, 10) == Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(arc_elasticity_vf(8'000'000, 12, 10'000'000, 12) == 0.0);
  // (19.9 - 20)/20 = -0.005, (4M - 2M)/2M = 1.
  CHECK(arc_elasticity_vf(2'000'000, 20, 4'000'000, 19.9) == Approx(-0.005).epsilon(1e-9));
  CHECK(code_of([] { arc_elasticity_vf(0, 12, 1, 10); }) == ErrorCode::ZeroBase);
  CHECK(code_of([] { arc_elasticity_vf(1, 0, 2, 10); }) == ErrorCode::ZeroBase);
  CHECK(code_of([] { arc_elasticity_vf(1, 12, 1, 10); }) == ErrorCode::ZeroBase);
}

TEST_CASE("absolute elasticity", "[cost]") {
  CHECK(absolute_elasticity_vf(1'000'000, 20, -1e-6) == Approx(-0.05).epsilon(1e-12));
  CHECK(absolute_elasticity_vf(8'000'000, 12, -1e-6) == Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(absolute_elasticity_vf(8'000'000, 12, 0.0) == 0.0);
  const CostBehaviorModel market{-1e-6, 20};
  CHECK(absolute_elasticity_vf(8'000'000, 12, market) == Approx(-2.0 / 3.0).epsilon(1e-12));
  for (double df : {-4e6, -1e6, 5e5, 2e6, 7e6}) {
    CHECK(arc_elasticity_vf(8'000'000, 12, 8'000'000 + df, market.variable_cost(8'000'000 + df)) ==
          Approx(-2.0 / 3.0).epsilon(1e-9));
  }
  CHECK(code_of([&] { absolute_elasticity_vf(25'000'000, 12, market); }) == ErrorCode::OutsideValidityDomain);
}

TEST_CASE("margin elasticity with respect to variable cost", "[cost]") {
  CHECK(margin_elasticity_wrt_v(12, 20) == Approx(-1.5).epsilon(1e-12));
  CHECK(margin_elasticity_wrt_v(0, 20) == 0.0);
  CHECK(margin_elasticity_wrt_v(10, 20) == Approx(-1.0).epsilon(1e-12));
  CHECK(code_of([] { margin_elasticity_wrt_v(20, 20); }) == ErrorCode::MarginZero);
  CHECK(code_of([] { margin_elasticity_wrt_v(25, 20); }) == ErrorCode::MarginZero);
  CHECK(code_of([] { margin_elasticity_wrt_v(-1, 20); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("elasticity classes", "[cost]") {
  CHECK(classify_elasticity(-2) == ElasticityClass::Strong);
  CHECK(classify_elasticity(-1) == ElasticityClass::Boundary);
  CHECK(classify_elasticity(-1 + 1e-13) == ElasticityClass::Boundary);
  CHECK(classify_elasticity(-1 + 1e-9) == ElasticityClass::Weak);
  CHECK(classify_elasticity(-0.05) == ElasticityClass::Weak);
  CHECK(classify_elasticity(0) == ElasticityClass::Null);
  CHECK(classify_elasticity(-0.0) == ElasticityClass::Null);
  CHECK(code_of([] { classify_elasticity(0.1); }) == ErrorCode::PositiveInput);
  CHECK(code_of([] { classify_elasticity(std::nan("")); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("property: absolute elasticity is constant along the line", "[cost][property]") {
  oracle::Gen g(31);
  for (int i = 0; i < oracle::kCases; ++i) {
    const double a = -g.log_uniform(1e-9, 1e-3);
    const double b = g.log_uniform(1.0, 1e3);
    const CostBehaviorModel model{a, b};
    const double limit = model.domain_limit();
    const double f0 = g.uniform(0.01, 0.9) * limit;
    const double v0 = model.variable_cost(f0);
    const double f1 = g.uniform(0.001, 0.999) * limit;
    if (std::fabs(f1 - f0) < 1e-6 * f0) continue;
    const double arc = arc_elasticity_vf(f0, v0, f1, model.variable_cost(f1));
    REQUIRE(oracle::rel_diff(arc, absolute_elasticity_vf(f0, v0, model)) <= 1e-9);
  }
}

TEST_CASE("property: relative elasticity decreases across the domain", "[cost][property]") {
  oracle::Gen g(32);
  for (int i = 0; i < oracle::kCases; ++i) {
    const CostBehaviorModel model{-g.log_uniform(1e-9, 1e-3), g.log_uniform(1.0, 1e3)};
    const double limit = model.domain_limit();
    const double f1 = g.uniform(0.001, 0.99) * limit;
    const double f2 = f1 + g.uniform(1e-4, 1.0) * (0.999 * limit - f1);
    const double e1 = relative_elasticity_vf(f1, model);
    const double e2 = relative_elasticity_vf(f2, model);
    REQUIRE(e1 < 0.0);
    REQUIRE(e2 < e1);
  }
}

TEST_CASE("property: margin elasticity reconstruction", "[cost][property]") {
  oracle::Gen g(33);
  for (int i = 0; i < oracle::kCases; ++i) {
    const double p = g.log_uniform(0.01, 1e5);
    const double v = p * g.uniform(0.001, 0.999);
    REQUIRE(std::fabs(margin_elasticity_wrt_v(v, p) * (p - v) / -v - 1.0) <= 1e-12);
  }
}

TEST_CASE("property: relative change of v stays in (-1, 0] inside the domain", "[cost][property]") {
  oracle::Gen g(34);
  for (int i = 0; i < oracle::kCases; ++i) {
    const CostBehaviorModel model{-g.log_uniform(1e-9, 1e-3), g.log_uniform(1.0, 1e3)};
    const double f0 = g.uniform(0.0, 0.99) * model.domain_limit();
    const double f1 = f0 + g.uniform(0.0, 1.0) * (model.domain_limit() - f0) * 0.999;
    const double v0 = model.variable_cost(f0);
    const double rel = (model.variable_cost(f1) - v0) / v0;
    REQUIRE(rel <= 0.0);
    REQUIRE(rel > -1.0);
  }
}

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "treslev/error.hpp"

namespace treslev {

// Immediate liquidity only has to cover cash fixed costs; term liquidity
// (classical break-even) covers cash plus non-cash fixed charges.
enum class Horizon { Immediate, Term };

inline constexpr std::array<Horizon, 2> kHorizons{Horizon::Immediate, Horizon::Term};

constexpr std::string_view to_string(Horizon h) {
  return h == Horizon::Immediate ? "immediate" : "term";
}

/// One production setup. Amounts are in an abstract currency unit, volumes
/// are real-valued units per period.
struct ProductiveCombination {
  double unit_price = 0.0;
  double unit_variable_cost = 0.0;
  double fixed_cash = 0.0;     // cash fixed costs
  double fixed_noncash = 0.0;  // depreciation and provisions of the period
  double capacity = 0.0;
  std::optional<double> investment_life;  // years

  double unit_margin() const { return unit_price - unit_variable_cost; }
  double fixed_total() const { return fixed_cash + fixed_noncash; }
  double fixed_base(Horizon h) const { return h == Horizon::Immediate ? fixed_cash : fixed_total(); }

  // m <= 0 is representable so callers can diagnose it; threshold maths rejects it.
  bool viable() const { return unit_margin() > 0.0; }
};

/// Throws InvalidArgument when a field violates its sign constraint.
inline void validate(const ProductiveCombination& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::InvalidArgument, what);
  };
  require(std::isfinite(c.unit_price) && c.unit_price > 0.0, "unit_price must be > 0");
  require(std::isfinite(c.unit_variable_cost) && c.unit_variable_cost >= 0.0,
          "unit_variable_cost must be >= 0");
  require(std::isfinite(c.fixed_cash) && c.fixed_cash >= 0.0, "fixed_cash must be >= 0");
  require(std::isfinite(c.fixed_noncash) && c.fixed_noncash >= 0.0, "fixed_noncash must be >= 0");
  require(std::isfinite(c.capacity) && c.capacity > 0.0, "capacity must be > 0");
  if (c.investment_life) {
    require(std::isfinite(*c.investment_life) && *c.investment_life > 0.0,
            "investment_life must be > 0");
  }
}

struct FlowSummary {
  double volume = 0.0;
  double revenue = 0.0;
  double variable_total = 0.0;
  double margin_total = 0.0;
  double result = 0.0;  // margin_total - fixed_total
  double caf = 0.0;     // margin_total - fixed_cash (self-financing capacity)

  // Potential end-of-period cash: caf on the immediate horizon, result at term.
  double virtual_treasury(Horizon h) const { return h == Horizon::Immediate ? caf : result; }
};

struct ProjectPerformance {
  double capital_invested = 0.0;
  double profit = 0.0;
  double profitability = 0.0;
  std::optional<double> leverage_immediate;  // empty on the threshold
  std::optional<double> leverage_term;
};

inline double unit_margin(double unit_price, double unit_variable_cost) {
  return unit_price - unit_variable_cost;
}

inline FlowSummary flow_summary(const ProductiveCombination& c, double q) {
  validate(c);
  if (!(q >= 0.0)) fail(ErrorCode::NegativeVolume, "volume must be >= 0");
  if (q > c.capacity) fail(ErrorCode::VolumeExceedsCapacity, "volume exceeds capacity");

  FlowSummary s;
  s.volume = q;
  s.revenue = q * c.unit_price;
  s.variable_total = q * c.unit_variable_cost;
  s.margin_total = q * c.unit_margin();
  s.result = s.margin_total - c.fixed_total();
  s.caf = s.margin_total - c.fixed_cash;
  return s;
}

}  // namespace treslev

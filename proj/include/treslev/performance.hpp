#pragma once

#include "treslev/core_model.hpp"
#include "treslev/thresholds.hpp"

namespace treslev {

/// Project performance row: capital invested is the annual non-cash charge
/// times the investment life, profitability is result over that capital.
inline ProjectPerformance performance_summary(const ProductiveCombination& c, double volume) {
  validate(c);
  if (!c.investment_life) fail(ErrorCode::MissingLife, "investment_life is required");
  const double capital = c.fixed_noncash * *c.investment_life;
  if (!(capital > 0.0)) fail(ErrorCode::ZeroCapital, "capital invested is zero");

  const FlowSummary flows = flow_summary(c, volume);
  const LeveragePair lev = leverage_pair(c, volume);

  ProjectPerformance p;
  p.capital_invested = capital;
  p.profit = flows.result;
  p.profitability = flows.result / capital;
  p.leverage_immediate = lev.immediate;
  p.leverage_term = lev.term;
  return p;
}

}  // namespace treslev

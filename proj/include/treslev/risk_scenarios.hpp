#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "treslev/core_model.hpp"
#include "treslev/error.hpp"
#include "treslev/thresholds.hpp"

namespace treslev {

enum class Verdict { Improved, Unchanged, Deteriorated };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Improved: return "Improved";
    case Verdict::Unchanged: return "Unchanged";
    case Verdict::Deteriorated: return "Deteriorated";
  }
  return "Unknown";
}

// Relative tolerance under which two thresholds count as unchanged.
inline constexpr double kThresholdTolerance = 1e-9;
// Relative tolerance of the volume-ratio vs threshold-ratio comparison.
inline constexpr double kComparisonTolerance = 1e-12;

/// f / (f - Q* p): the elasticity of v with respect to f that keeps the
/// liquidity threshold Q* in place when price is held constant.
inline double optimal_threshold_elasticity(double fixed, double q_star, double price) {
  if (!(fixed >= 0.0)) fail(ErrorCode::InvalidArgument, "fixed costs must be >= 0");
  if (!(q_star * price > fixed)) {
    fail(ErrorCode::DegenerateThreshold, "Q* p must exceed f (v must stay positive at the threshold)");
  }
  return fixed / (fixed - q_star * price);
}

/// Largest unit variable cost that does not push the threshold up after a
/// fixed-cost change: v0 (1 + E* df / f0).
inline double required_variable_cost(double v0, double f0, double delta_fixed, double e_star) {
  if (!(v0 > 0.0)) fail(ErrorCode::InvalidArgument, "v0 must be > 0");
  if (!(f0 > 0.0)) fail(ErrorCode::InvalidArgument, "f0 must be > 0");
  if (!(f0 + delta_fixed >= 0.0)) fail(ErrorCode::InvalidArgument, "new fixed costs must be >= 0");
  if (!(e_star < 0.0)) fail(ErrorCode::InvalidArgument, "optimal elasticity must be < 0");
  const double v1 = v0 * (1.0 + e_star * delta_fixed / f0);
  if (v1 < 0.0) fail(ErrorCode::InfeasibleDrop, "required variable-cost reduction exceeds 100%");
  return v1;
}

namespace detail {

inline Verdict compare_thresholds(double before, double after) {
  if (std::abs(after - before) <= kThresholdTolerance * std::max(std::abs(before), std::abs(after))) {
    return Verdict::Unchanged;
  }
  return after < before ? Verdict::Improved : Verdict::Deteriorated;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fixed-capacity transformation

struct TransformationPlan {
  ProductiveCombination base;
  double delta_fixed_cash = 0.0;
  double delta_fixed_noncash = 0.0;
  // Given value wins; otherwise the lowest horizon floor is adopted.
  std::optional<double> new_unit_variable_cost;
};

struct HorizonTransformation {
  Horizon horizon = Horizon::Immediate;
  double fixed_before = 0.0;
  double fixed_after = 0.0;
  std::optional<double> optimal_elasticity;   // empty when base f or v is zero
  std::optional<double> variable_cost_floor;  // empty when infeasible or undefined
  bool infeasible = false;
  double q_star_before = 0.0;
  double q_star_after = 0.0;
  Verdict verdict = Verdict::Unchanged;
};

struct TransformationAssessment {
  ProductiveCombination before;
  ProductiveCombination after;
  bool variable_cost_solved = false;
  std::array<HorizonTransformation, 2> horizons;

  const HorizonTransformation& operator[](Horizon h) const {
    return horizons[h == Horizon::Immediate ? 0 : 1];
  }
};

inline TransformationAssessment assess_transformation(const TransformationPlan& plan) {
  const ProductiveCombination& base = plan.base;
  validate(base);
  if (!base.viable()) fail(ErrorCode::NonViable, "base combination has m <= 0");

  ProductiveCombination after = base;
  after.fixed_cash = base.fixed_cash + plan.delta_fixed_cash;
  after.fixed_noncash = base.fixed_noncash + plan.delta_fixed_noncash;
  if (!(after.fixed_cash >= 0.0) || !(after.fixed_noncash >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "transformed fixed costs must be >= 0");
  }

  TransformationAssessment out;
  out.before = base;
  const double m0 = base.unit_margin();
  for (Horizon h : kHorizons) {
    HorizonTransformation& ht = out.horizons[h == Horizon::Immediate ? 0 : 1];
    ht.horizon = h;
    ht.fixed_before = base.fixed_base(h);
    ht.fixed_after = after.fixed_base(h);
    ht.q_star_before = liquidity_threshold(ht.fixed_before, m0);
    const double delta = ht.fixed_after - ht.fixed_before;
    if (ht.fixed_before > 0.0 && base.unit_variable_cost > 0.0) {
      ht.optimal_elasticity = optimal_threshold_elasticity(ht.fixed_before, ht.q_star_before, base.unit_price);
      try {
        ht.variable_cost_floor =
            required_variable_cost(base.unit_variable_cost, ht.fixed_before, delta, *ht.optimal_elasticity);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InfeasibleDrop) throw;
        ht.infeasible = true;
      }
    } else if (delta == 0.0) {
      ht.variable_cost_floor = base.unit_variable_cost;
    }
  }

  if (plan.new_unit_variable_cost) {
    after.unit_variable_cost = *plan.new_unit_variable_cost;
  } else {
    std::optional<double> floor;
    for (const auto& ht : out.horizons) {
      if (ht.infeasible) fail(ErrorCode::InfeasibleDrop, "no admissible variable cost keeps the " +
                                                             std::string(to_string(ht.horizon)) + " threshold");
      if (ht.variable_cost_floor) floor = floor ? std::min(*floor, *ht.variable_cost_floor) : *ht.variable_cost_floor;
    }
    if (!floor) fail(ErrorCode::InfeasibleDrop, "no variable-cost floor is defined for this plan");
    after.unit_variable_cost = *floor;
    out.variable_cost_solved = true;
  }
  if (!(after.unit_variable_cost >= 0.0)) fail(ErrorCode::InvalidArgument, "new variable cost must be >= 0");
  if (!after.viable()) fail(ErrorCode::NonViable, "transformed combination has m <= 0");

  const double m1 = after.unit_margin();
  for (auto& ht : out.horizons) {
    ht.q_star_after = liquidity_threshold(ht.fixed_after, m1);
    ht.verdict = detail::compare_thresholds(ht.q_star_before, ht.q_star_after);
  }
  out.after = after;
  return out;
}

// ---------------------------------------------------------------------------
// Capacity expansion

/// Q / (Q - r/m): how fast fixed costs may grow with volume for a given
/// result (or caf) r. Exactly 1 when r = 0, within (0, 1) when r < 0.
inline double fixed_cost_elasticity_vs_volume(double volume, double result, double margin) {
  if (!(margin > 0.0)) fail(ErrorCode::NonPositiveMargin, "unit margin must be > 0");
  if (!(volume > 0.0)) fail(ErrorCode::NonPositiveVolume, "volume must be > 0");
  if (result == 0.0) return 1.0;
  if (result > 0.0 && !(volume * margin > result)) {
    fail(ErrorCode::MarginBelowResult, "total margin must exceed the result");
  }
  return volume / (volume - result / margin);
}

/// Qm (E - 1) / E: the fixed-cost level that yields treasury leverage E at
/// volume Q and margin m.
inline double fixed_cost_ceiling(double volume, double margin, double target) {
  if (!(target >= 1.0) || !std::isfinite(target)) {
    fail(ErrorCode::InvalidTarget, "target leverage must be >= 1");
  }
  return volume * margin * (target - 1.0) / target;
}

/// Unit price that gives leverage `target` at (Q, f, v): solves
/// m = f E / (Q (E - 1)) and returns m + v.
inline double price_to_maintain_leverage(double target, double volume, double fixed, double variable) {
  if (!(target > 1.0) || !std::isfinite(target)) fail(ErrorCode::InvalidTarget, "target leverage must be > 1");
  if (!(volume > 0.0)) fail(ErrorCode::InvalidTarget, "volume must be > 0");
  if (!(fixed > 0.0)) fail(ErrorCode::InvalidTarget, "fixed costs must be > 0");
  if (!(variable >= 0.0)) fail(ErrorCode::InvalidTarget, "variable cost must be >= 0");
  const double margin = fixed * target / (volume * (target - 1.0));
  return margin + variable;
}

/// Compares Q1/Q2 against Q*1/Q*2. Treasury sensitivity improves when the
/// volume ratio is the smaller one.
inline Verdict sensitivity_comparison(double q1, double q2, double q_star1, double q_star2) {
  if (!(q1 > 0.0) || !(q2 > 0.0) || !(q_star1 >= 0.0) || !(q_star2 >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "volumes must be > 0 and thresholds >= 0");
  }
  // Cross-multiplied so a zero threshold does not divide.
  const double lhs = q1 * q_star2;
  const double rhs = q_star1 * q2;
  if (std::abs(lhs - rhs) <= kComparisonTolerance * std::max(std::abs(lhs), std::abs(rhs))) {
    return Verdict::Unchanged;
  }
  return lhs < rhs ? Verdict::Improved : Verdict::Deteriorated;
}

struct ExpansionPlan {
  ProductiveCombination base;
  double new_capacity = 0.0;
  double new_fixed_cash = 0.0;
  double new_fixed_noncash = 0.0;
  double new_unit_variable_cost = 0.0;
  std::optional<double> new_unit_price;  // defaults to the base price

  ProductiveCombination expanded() const {
    ProductiveCombination c = base;
    c.capacity = new_capacity;
    c.fixed_cash = new_fixed_cash;
    c.fixed_noncash = new_fixed_noncash;
    c.unit_variable_cost = new_unit_variable_cost;
    c.unit_price = new_unit_price.value_or(base.unit_price);
    return c;
  }
};

/// Identity plan: the base combination left as it is.
inline ExpansionPlan unchanged_expansion(const ProductiveCombination& base) {
  return {base, base.capacity, base.fixed_cash, base.fixed_noncash, base.unit_variable_cost, std::nullopt};
}

struct ExpansionOptions {
  // Decimals the base leverage is rounded to for the "rounded target" price.
  int target_digits = 3;
};

struct ExpansionHorizon {
  Horizon horizon = Horizon::Immediate;
  double q_star_before = 0.0;
  double q_star_after = 0.0;
  double leverage_before = 0.0;
  double leverage_after = 0.0;
  double volume_ratio = 0.0;     // Q1 / Q2
  std::optional<double> threshold_ratio;  // Q*1 / Q*2, empty when Q*2 = 0
  Verdict verdict = Verdict::Unchanged;
  // Price that restores the base leverage on the expanded structure.
  std::optional<double> price_to_maintain;
  double rounded_target = 0.0;
  std::optional<double> price_to_maintain_rounded;
};

struct ExpansionAssessment {
  ProductiveCombination before;
  ProductiveCombination after;
  FlowSummary flows_before;
  FlowSummary flows_after;
  std::array<ExpansionHorizon, 2> horizons;

  const ExpansionHorizon& operator[](Horizon h) const { return horizons[h == Horizon::Immediate ? 0 : 1]; }
};

namespace detail {

inline double round_to_digits(double x, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::round(x * scale) / scale;
}

inline std::optional<double> try_price(double target, double volume, double fixed, double variable) {
  try {
    return price_to_maintain_leverage(target, volume, fixed, variable);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidTarget) throw;
    return std::nullopt;
  }
}

}  // namespace detail

/// Before/after indicators of a capacity expansion, evaluated at full
/// capacity on both sides.
inline ExpansionAssessment assess_expansion(const ExpansionPlan& plan, const ExpansionOptions& options = {}) {
  validate(plan.base);
  if (!plan.base.viable()) fail(ErrorCode::NonViable, "base combination has m <= 0");
  const ProductiveCombination after = plan.expanded();
  validate(after);
  if (after.capacity < plan.base.capacity) {
    fail(ErrorCode::InvalidArgument, "new capacity is below the base capacity");
  }
  if (!after.viable()) fail(ErrorCode::NonViable, "expanded combination has m <= 0");

  ExpansionAssessment out;
  out.before = plan.base;
  out.after = after;
  out.flows_before = flow_summary(plan.base, plan.base.capacity);
  out.flows_after = flow_summary(after, after.capacity);

  const double q1 = plan.base.capacity;
  const double q2 = after.capacity;
  for (Horizon h : kHorizons) {
    ExpansionHorizon& eh = out.horizons[h == Horizon::Immediate ? 0 : 1];
    eh.horizon = h;
    eh.q_star_before = liquidity_threshold(plan.base.fixed_base(h), plan.base.unit_margin());
    eh.q_star_after = liquidity_threshold(after.fixed_base(h), after.unit_margin());
    eh.leverage_before = elasticity_volume(q1, plan.base.fixed_base(h), plan.base.unit_margin());
    eh.leverage_after = elasticity_volume(q2, after.fixed_base(h), after.unit_margin());
    eh.volume_ratio = q1 / q2;
    if (eh.q_star_after > 0.0) eh.threshold_ratio = eh.q_star_before / eh.q_star_after;
    eh.verdict = sensitivity_comparison(q1, q2, eh.q_star_before, eh.q_star_after);

    eh.price_to_maintain = detail::try_price(eh.leverage_before, q2, after.fixed_base(h), after.unit_variable_cost);
    eh.rounded_target = detail::round_to_digits(eh.leverage_before, options.target_digits);
    eh.price_to_maintain_rounded =
        detail::try_price(eh.rounded_target, q2, after.fixed_base(h), after.unit_variable_cost);
  }
  return out;
}

}  // namespace treslev

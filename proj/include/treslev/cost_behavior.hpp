#pragma once

#include <cmath>
#include <string_view>

#include "treslev/error.hpp"

namespace treslev {

/// Linear response of the unit variable cost to the fixed-cost level,
/// v = slope * f + intercept, with slope < 0 and intercept > 0. The law is
/// only meaningful for 0 <= f < -intercept / slope, where v stays positive.
struct CostBehaviorModel {
  double slope = 0.0;
  double intercept = 0.0;

  double variable_cost(double fixed) const { return slope * fixed + intercept; }
  double domain_limit() const { return -intercept / slope; }
  // Fixed-cost level at which the relative elasticity crosses -1.
  double unit_crossover() const { return -intercept / (2.0 * slope); }
  bool in_domain(double fixed) const { return fixed >= 0.0 && fixed < domain_limit(); }
};

struct CostPoint {
  double fixed = 0.0;
  double variable = 0.0;
};

enum class ElasticityClass { Strong, Boundary, Weak, Null };

constexpr std::string_view to_string(ElasticityClass c) {
  switch (c) {
    case ElasticityClass::Strong: return "Strong";
    case ElasticityClass::Boundary: return "Boundary";
    case ElasticityClass::Weak: return "Weak";
    case ElasticityClass::Null: return "Null";
  }
  return "Unknown";
}

namespace detail {

inline CostBehaviorModel checked_model(double slope, double intercept) {
  if (!std::isfinite(slope) || !(slope < 0.0)) {
    fail(ErrorCode::NonNegativeSlope, "variable cost must fall as fixed costs rise (a < 0)");
  }
  if (!std::isfinite(intercept) || !(intercept > 0.0)) {
    fail(ErrorCode::NonPositiveIntercept, "intercept b must be > 0");
  }
  return {slope, intercept};
}

}  // namespace detail

/// Exact line through two observed (f, v) couples.
inline CostBehaviorModel fit_cost_model(CostPoint p1, CostPoint p2) {
  if (p1.fixed == p2.fixed) fail(ErrorCode::DegeneratePoints, "points share the same fixed-cost level");
  const double slope = (p2.variable - p1.variable) / (p2.fixed - p1.fixed);
  return detail::checked_model(slope, p1.variable - slope * p1.fixed);
}

/// Line through one observed couple with a given ceiling v(0) = intercept,
/// typically the market price.
inline CostBehaviorModel fit_cost_model(CostPoint p, double intercept) {
  if (p.fixed == 0.0) fail(ErrorCode::DegeneratePoints, "point must have f != 0 when b is given");
  return detail::checked_model((p.variable - intercept) / p.fixed, intercept);
}

/// a f / (a f + b): point elasticity of v with respect to f under the law.
/// Equals -1 at f = -b / 2a and diverges toward the domain limit.
inline double relative_elasticity_vf(double fixed, const CostBehaviorModel& model) {
  if (!(fixed > 0.0) || !(fixed < model.domain_limit())) {
    fail(ErrorCode::OutsideValidityDomain, "fixed-cost level outside (0, -b/a)");
  }
  const double af = model.slope * fixed;
  return af / (af + model.intercept);
}

/// (dv / v0) / (df / f0) between two observed couples.
inline double arc_elasticity_vf(double f0, double v0, double f1, double v1) {
  if (!(f0 > 0.0) || !(v0 > 0.0) || f1 == f0) {
    fail(ErrorCode::ZeroBase, "arc elasticity needs f0 > 0, v0 > 0 and f1 != f0");
  }
  return ((v1 - v0) / v0) / ((f1 - f0) / f0);
}

/// Raw a f0 / v0: the arc elasticity from base (f0, v0) for any move along a
/// line of slope a. Does not check the slope sign.
inline double absolute_elasticity_vf(double f0, double v0, double slope) {
  if (!(v0 > 0.0)) fail(ErrorCode::ZeroBase, "base variable cost must be > 0");
  return slope * f0 / v0;
}

inline double absolute_elasticity_vf(double f0, double v0, const CostBehaviorModel& model) {
  if (!model.in_domain(f0)) fail(ErrorCode::OutsideValidityDomain, "base fixed cost outside [0, -b/a)");
  return absolute_elasticity_vf(f0, v0, model.slope);
}

/// -v / (p - v): elasticity of the unit margin with respect to the unit
/// variable cost. Kept signed.
inline double margin_elasticity_wrt_v(double variable, double price) {
  if (!(variable >= 0.0)) fail(ErrorCode::InvalidArgument, "variable cost must be >= 0");
  if (!(variable < price)) fail(ErrorCode::MarginZero, "unit margin is zero or negative");
  return -variable / (price - variable);
}

inline constexpr double kBoundaryTolerance = 1e-12;

inline ElasticityClass classify_elasticity(double e) {
  if (std::isnan(e)) fail(ErrorCode::InvalidArgument, "elasticity is NaN");
  if (e > 0.0) fail(ErrorCode::PositiveInput, "v/f elasticities are <= 0");
  if (std::abs(e + 1.0) <= kBoundaryTolerance) return ElasticityClass::Boundary;
  if (e == 0.0) return ElasticityClass::Null;
  return e < -1.0 ? ElasticityClass::Strong : ElasticityClass::Weak;
}

}  // namespace treslev

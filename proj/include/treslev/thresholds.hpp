#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

#include "treslev/core_model.hpp"
#include "treslev/error.hpp"

namespace treslev {

// Relative half-width of the window around a threshold where virtual treasury
// is treated as zero and elasticities are refused.
inline constexpr double kSingularityEpsilon = 1e-9;

/// The four liquidity-break indicators: critical volume and critical margin,
/// each against cash and total fixed costs. Margins are for `reference_volume`.
struct LiquidityThresholds {
  double q_star_immediate = 0.0;
  double q_star_term = 0.0;
  double m_star_immediate = 0.0;
  double m_star_term = 0.0;
  double reference_volume = 0.0;

  double q_star(Horizon h) const { return h == Horizon::Immediate ? q_star_immediate : q_star_term; }
  double m_star(Horizon h) const { return h == Horizon::Immediate ? m_star_immediate : m_star_term; }
};

enum class SensitivityZone {
  BelowHalfThreshold,
  BetweenHalfAndThreshold,
  Singular,
  HighSensitivity,  // Q* < q < 2Q*
  Moderate,         // 2Q* <= q < 3Q*
  Asymptotic,       // q >= 3Q*
};

constexpr std::string_view to_string(SensitivityZone z) {
  switch (z) {
    case SensitivityZone::BelowHalfThreshold: return "BelowHalfThreshold";
    case SensitivityZone::BetweenHalfAndThreshold: return "BetweenHalfAndThreshold";
    case SensitivityZone::Singular: return "Singular";
    case SensitivityZone::HighSensitivity: return "HighSensitivity";
    case SensitivityZone::Moderate: return "Moderate";
    case SensitivityZone::Asymptotic: return "Asymptotic";
  }
  return "Unknown";
}

/// Critical volume f/m at which virtual treasury is zero.
inline double liquidity_threshold(double fixed, double margin) {
  if (!(margin > 0.0)) fail(ErrorCode::NonPositiveMargin, "unit margin must be > 0");
  if (!(fixed >= 0.0)) fail(ErrorCode::InvalidArgument, "fixed costs must be >= 0");
  return fixed / margin;
}

/// Critical unit margin f/Q for a given volume.
inline double critical_margin(double fixed, double volume) {
  if (!(volume > 0.0)) fail(ErrorCode::NonPositiveVolume, "volume must be > 0");
  if (!(fixed >= 0.0)) fail(ErrorCode::InvalidArgument, "fixed costs must be >= 0");
  return fixed / volume;
}

namespace detail {

// mQ / (mQ - f), shared by both elasticity axes.
inline double treasury_elasticity(double volume, double fixed, double margin) {
  if (!(margin > 0.0)) fail(ErrorCode::NonPositiveMargin, "unit margin must be > 0");
  if (!(volume > 0.0)) fail(ErrorCode::NonPositiveVolume, "volume must be > 0");
  if (!(fixed >= 0.0)) fail(ErrorCode::InvalidArgument, "fixed costs must be >= 0");
  const double margin_total = volume * margin;
  const double treasury = margin_total - fixed;
  if (std::abs(treasury) <= kSingularityEpsilon * std::max(margin_total, fixed)) {
    fail(ErrorCode::AtThreshold, "virtual treasury is zero; elasticity undefined");
  }
  return margin_total / treasury;
}

}  // namespace detail

/// Point elasticity of virtual treasury with respect to sales volume,
/// Q / (Q - f/m). Negative below the threshold, tends to 1 from above.
inline double elasticity_volume(double volume, double fixed, double margin) {
  return detail::treasury_elasticity(volume, fixed, margin);
}

/// Point elasticity of virtual treasury with respect to unit margin,
/// m / (m - f/Q). Same value as elasticity_volume at the same point.
inline double elasticity_margin(double margin, double fixed, double volume) {
  return detail::treasury_elasticity(volume, fixed, margin);
}

/// Leverage per horizon; an empty slot means the volume sits on that
/// horizon's threshold.
struct LeveragePair {
  std::optional<double> immediate;
  std::optional<double> term;

  const std::optional<double>& operator[](Horizon h) const {
    return h == Horizon::Immediate ? immediate : term;
  }
};

inline LeveragePair leverage_pair(const ProductiveCombination& c, double volume) {
  validate(c);
  if (!c.viable()) fail(ErrorCode::NonPositiveMargin, "combination is not viable (m <= 0)");
  LeveragePair out;
  for (Horizon h : kHorizons) {
    std::optional<double> value;
    try {
      value = elasticity_volume(volume, c.fixed_base(h), c.unit_margin());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AtThreshold) throw;
    }
    (h == Horizon::Immediate ? out.immediate : out.term) = value;
  }
  return out;
}

/// Zone boundaries are closed on the left: q == 2Q* is Moderate.
inline SensitivityZone sensitivity_zone(double volume, double q_star) {
  if (!(q_star > 0.0)) fail(ErrorCode::InvalidArgument, "threshold must be > 0");
  if (!(volume >= 0.0)) fail(ErrorCode::NegativeVolume, "volume must be >= 0");
  if (std::abs(volume - q_star) <= kSingularityEpsilon * q_star) return SensitivityZone::Singular;
  if (volume < 0.5 * q_star) return SensitivityZone::BelowHalfThreshold;
  if (volume < q_star) return SensitivityZone::BetweenHalfAndThreshold;
  if (volume < 2.0 * q_star) return SensitivityZone::HighSensitivity;
  if (volume < 3.0 * q_star) return SensitivityZone::Moderate;
  return SensitivityZone::Asymptotic;
}

inline LiquidityThresholds thresholds(const ProductiveCombination& c, double reference_volume) {
  validate(c);
  if (!c.viable()) fail(ErrorCode::NonPositiveMargin, "combination is not viable (m <= 0)");
  const double m = c.unit_margin();
  LiquidityThresholds t;
  t.reference_volume = reference_volume;
  t.q_star_immediate = liquidity_threshold(c.fixed_cash, m);
  t.q_star_term = liquidity_threshold(c.fixed_total(), m);
  t.m_star_immediate = critical_margin(c.fixed_cash, reference_volume);
  t.m_star_term = critical_margin(c.fixed_total(), reference_volume);
  return t;
}

}  // namespace treslev

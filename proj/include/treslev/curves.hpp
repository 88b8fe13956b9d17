#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treslev/core_model.hpp"
#include "treslev/cost_behavior.hpp"
#include "treslev/error.hpp"
#include "treslev/thresholds.hpp"

namespace treslev {

enum class CurveKind {
  ElasticityVsQ,
  ElasticityVsM,
  IndifferenceContours,
  CostBehavior,
  RelativeElasticityVsF,
  AbsoluteElasticityLines,
};

inline constexpr std::array<CurveKind, 6> kCurveKinds{
    CurveKind::ElasticityVsQ,        CurveKind::ElasticityVsM,         CurveKind::IndifferenceContours,
    CurveKind::CostBehavior,         CurveKind::RelativeElasticityVsF, CurveKind::AbsoluteElasticityLines,
};

constexpr std::string_view to_string(CurveKind k) {
  switch (k) {
    case CurveKind::ElasticityVsQ: return "elasticity-q";
    case CurveKind::ElasticityVsM: return "elasticity-m";
    case CurveKind::IndifferenceContours: return "indifference";
    case CurveKind::CostBehavior: return "cost-behavior";
    case CurveKind::RelativeElasticityVsF: return "relative-elasticity";
    case CurveKind::AbsoluteElasticityLines: return "absolute-lines";
  }
  return "unknown";
}

inline std::optional<CurveKind> parse_curve_kind(std::string_view name) {
  for (CurveKind k : kCurveKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

struct Range {
  double lower = 0.0;
  double upper = 0.0;
};

enum class Spacing { Uniform, Log };

struct Sampling {
  std::size_t samples = 256;
  Spacing spacing = Spacing::Uniform;
  // Relative half-width of the window dropped around each critical value.
  double gap = 0.01;
};

/// Sampled curve family. Rows are strictly increasing in the abscissa column;
/// when `series_column` is set the grid is in long format and the ordering
/// holds within each run of equal series keys.
struct CurveGrid {
  CurveKind kind = CurveKind::ElasticityVsQ;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Range> singularity_gaps;
  std::size_t abscissa_column = 0;
  std::optional<std::size_t> series_column;
};

/// Abscissae for `range`; endpoints are reproduced exactly.
inline std::vector<double> sample_points(Range range, const Sampling& sampling) {
  if (sampling.samples < 2 || !(range.lower < range.upper) || !std::isfinite(range.lower) ||
      !std::isfinite(range.upper)) {
    fail(ErrorCode::EmptyRange, "need lower < upper and at least 2 samples");
  }
  const std::size_t n = sampling.samples;
  std::vector<double> xs;
  xs.reserve(n);
  if (sampling.spacing == Spacing::Log) {
    if (!(range.lower > 0.0)) fail(ErrorCode::EmptyRange, "log spacing needs a positive lower bound");
    const double a = std::log(range.lower);
    const double b = std::log(range.upper);
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
  } else {
    const double step = (range.upper - range.lower) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) xs.push_back(range.lower + step * static_cast<double>(i));
  }
  xs.front() = range.lower;
  xs.back() = range.upper;
  // Rounding can collapse neighbours on very fine grids.
  xs.erase(std::unique(xs.begin(), xs.end(), [](double l, double r) { return !(l < r); }), xs.end());
  return xs;
}

namespace detail {

inline void check_gap(const Sampling& s) {
  if (!(s.gap >= 0.0) || !(s.gap < 1.0)) fail(ErrorCode::InvalidArgument, "gap must lie in [0, 1)");
}

inline std::vector<Range> critical_gaps(std::initializer_list<double> criticals, double gap) {
  std::vector<Range> gaps;
  for (double c : criticals) {
    if (!(c > 0.0)) continue;
    Range r{c * (1.0 - gap), c * (1.0 + gap)};
    bool seen = std::any_of(gaps.begin(), gaps.end(),
                            [&](const Range& g) { return g.lower == r.lower && g.upper == r.upper; });
    if (!seen) gaps.push_back(r);
  }
  std::sort(gaps.begin(), gaps.end(), [](const Range& l, const Range& r) { return l.lower < r.lower; });
  return gaps;
}

inline bool inside_any(double x, const std::vector<Range>& gaps) {
  return std::any_of(gaps.begin(), gaps.end(), [x](const Range& g) { return x >= g.lower && x <= g.upper; });
}

// Both horizons' elasticities at one point, or nothing if either is singular.
template <typename Fn>
std::optional<std::vector<double>> pair_row(double x, Fn&& elasticity) {
  try {
    return std::vector<double>{x, elasticity(Horizon::Immediate), elasticity(Horizon::Term)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AtThreshold) throw;
    return std::nullopt;
  }
}

inline double zone_marker(double elasticity) {
  switch (classify_elasticity(elasticity)) {
    case ElasticityClass::Strong: return -1.0;
    case ElasticityClass::Boundary: return 0.0;
    case ElasticityClass::Weak:
    case ElasticityClass::Null: return 1.0;
  }
  return 1.0;
}

}  // namespace detail

/// Immediate and term leverage against volume over `volume_range`.
inline CurveGrid elasticity_curve(const ProductiveCombination& c, Range volume_range, const Sampling& sampling = {}) {
  validate(c);
  detail::check_gap(sampling);
  if (!c.viable()) fail(ErrorCode::NonPositiveMargin, "combination is not viable (m <= 0)");
  if (!(volume_range.lower > 0.0) || volume_range.upper > c.capacity) {
    fail(ErrorCode::RangeOutsideDomain, "volume range must lie within (0, capacity]");
  }
  const double m = c.unit_margin();

  CurveGrid grid;
  grid.kind = CurveKind::ElasticityVsQ;
  grid.columns = {"q", "immediate", "term"};
  grid.singularity_gaps = detail::critical_gaps({c.fixed_cash / m, c.fixed_total() / m}, sampling.gap);
  for (double q : sample_points(volume_range, sampling)) {
    if (detail::inside_any(q, grid.singularity_gaps)) continue;
    auto row = detail::pair_row(q, [&](Horizon h) { return elasticity_volume(q, c.fixed_base(h), m); });
    if (row) grid.rows.push_back(std::move(*row));
  }
  return grid;
}

/// Immediate and term leverage against unit margin at a fixed volume.
inline CurveGrid elasticity_margin_curve(const ProductiveCombination& c, double volume, Range margin_range,
                                         const Sampling& sampling = {}) {
  validate(c);
  detail::check_gap(sampling);
  if (!(volume > 0.0)) fail(ErrorCode::NonPositiveVolume, "volume must be > 0");
  if (!(margin_range.lower > 0.0)) fail(ErrorCode::RangeOutsideDomain, "margin range must be positive");

  CurveGrid grid;
  grid.kind = CurveKind::ElasticityVsM;
  grid.columns = {"m", "immediate", "term"};
  grid.singularity_gaps =
      detail::critical_gaps({c.fixed_cash / volume, c.fixed_total() / volume}, sampling.gap);
  for (double m : sample_points(margin_range, sampling)) {
    if (detail::inside_any(m, grid.singularity_gaps)) continue;
    auto row = detail::pair_row(m, [&](Horizon h) { return elasticity_margin(m, c.fixed_base(h), volume); });
    if (row) grid.rows.push_back(std::move(*row));
  }
  return grid;
}

/// Zero-treasury loci Q m = f, one series per fixed-cost level, clipped to
/// `margin_range`.
inline CurveGrid indifference_contours(std::span<const double> fixed_levels, Range volume_range, Range margin_range,
                                       const Sampling& sampling = {}) {
  if (fixed_levels.empty()) fail(ErrorCode::InvalidArgument, "at least one fixed-cost level is required");
  for (double f : fixed_levels) {
    if (!(f > 0.0) || !std::isfinite(f)) fail(ErrorCode::InvalidArgument, "fixed-cost levels must be > 0");
  }
  if (!(volume_range.lower > 0.0) || !(margin_range.lower > 0.0) || !(margin_range.lower < margin_range.upper)) {
    fail(ErrorCode::EmptyRange, "volume and margin ranges must be positive and non-empty");
  }
  const std::vector<double> qs = sample_points(volume_range, sampling);

  CurveGrid grid;
  grid.kind = CurveKind::IndifferenceContours;
  grid.columns = {"fixed_cost", "q", "m"};
  grid.abscissa_column = 1;
  grid.series_column = 0;
  for (double f : fixed_levels) {
    for (double q : qs) {
      const double m = critical_margin(f, q);
      if (m < margin_range.lower || m > margin_range.upper) continue;
      grid.rows.push_back({f, q, m});
    }
  }
  return grid;
}

/// v(f) and its relative elasticity over a fixed-cost range, with a zone
/// marker: +1 weak (above -1), 0 on -1, -1 strong (below -1).
inline CurveGrid cost_behavior_curves(const CostBehaviorModel& model, Range fixed_range,
                                      const Sampling& sampling = {}) {
  detail::checked_model(model.slope, model.intercept);
  if (!(fixed_range.lower > 0.0) || !(fixed_range.upper < model.domain_limit())) {
    fail(ErrorCode::RangeOutsideDomain, "fixed-cost range must lie within (0, -b/a)");
  }
  CurveGrid grid;
  grid.kind = CurveKind::CostBehavior;
  grid.columns = {"f", "v", "elasticity", "zone"};
  for (double f : sample_points(fixed_range, sampling)) {
    const double e = relative_elasticity_vf(f, model);
    grid.rows.push_back({f, model.variable_cost(f), e, detail::zone_marker(e)});
  }
  return grid;
}

/// Relative elasticity alone (the cost-behavior grid without the v column).
inline CurveGrid relative_elasticity_curve(const CostBehaviorModel& model, Range fixed_range,
                                           const Sampling& sampling = {}) {
  CurveGrid full = cost_behavior_curves(model, fixed_range, sampling);
  CurveGrid grid;
  grid.kind = CurveKind::RelativeElasticityVsF;
  grid.columns = {"f", "elasticity", "zone"};
  grid.rows.reserve(full.rows.size());
  for (const auto& r : full.rows) grid.rows.push_back({r[0], r[2], r[3]});
  return grid;
}

/// For each slope a, the path (df/f0, dv/v0) from base (f0, v0) along
/// v = v0 + a df, labelled with its constant arc elasticity a f0 / v0.
inline CurveGrid absolute_elasticity_lines(CostPoint base, std::span<const double> slopes, Range delta_fixed_range,
                                           const Sampling& sampling = {}) {
  if (!(base.fixed > 0.0) || !(base.variable > 0.0)) {
    fail(ErrorCode::InvalidArgument, "base (f0, v0) must be positive");
  }
  if (slopes.empty()) fail(ErrorCode::InvalidArgument, "at least one slope is required");
  if (base.fixed + delta_fixed_range.lower < 0.0) {
    fail(ErrorCode::InfeasiblePath, "fixed costs would become negative");
  }
  const std::vector<double> dfs = sample_points(delta_fixed_range, sampling);

  CurveGrid grid;
  grid.kind = CurveKind::AbsoluteElasticityLines;
  grid.columns = {"slope", "elasticity", "df", "df_over_f", "dv_over_v"};
  grid.abscissa_column = 2;
  grid.series_column = 0;
  for (double a : slopes) {
    // Linear path: checking both ends covers the whole range.
    for (double df : {delta_fixed_range.lower, delta_fixed_range.upper}) {
      if (base.variable + a * df < 0.0) fail(ErrorCode::InfeasiblePath, "variable cost would become negative");
    }
    const double label = absolute_elasticity_vf(base.fixed, base.variable, a);
    for (double df : dfs) {
      grid.rows.push_back({a, label, df, df / base.fixed, a * df / base.variable});
    }
  }
  return grid;
}

}  // namespace treslev

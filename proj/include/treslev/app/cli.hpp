#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "treslev/app/commands.hpp"
#include "treslev/app/config.hpp"
#include "treslev/app/report.hpp"
#include "treslev/curves.hpp"
#include "treslev/curves_io.hpp"

namespace treslev::app {

struct CliResult {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

namespace detail {

struct CurveFlags {
  std::string kind;
  std::string out;
  std::vector<double> levels;
  std::vector<double> slopes;
  std::optional<double> q_min, q_max, m_min, m_max, f_min, f_max, df_min, df_max;
  std::optional<double> volume;
  std::optional<double> a, b;
  std::optional<double> base_f, base_v;
  bool log = false;
};

inline CostPoint parse_point(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorCode::Config, "expected f:v, got '" + text + "'");
  try {
    std::size_t used_f = 0, used_v = 0;
    const std::string fs = text.substr(0, colon), vs = text.substr(colon + 1);
    CostPoint p{std::stod(fs, &used_f), std::stod(vs, &used_v)};
    if (used_f != fs.size() || used_v != vs.size()) throw std::invalid_argument("trailing characters");
    return p;
  } catch (const std::logic_error&) {
    fail(ErrorCode::Config, "expected f:v, got '" + text + "'");
  }
}

inline std::vector<CostPoint> parse_points(const std::string& text) {
  std::vector<CostPoint> points;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    points.push_back(parse_point(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return points;
}

inline Range range_or(std::optional<double> lo, std::optional<double> hi, double lo_default, double hi_default) {
  return {lo.value_or(lo_default), hi.value_or(hi_default)};
}

inline CurveGrid build_curve(const CurveFlags& f, const ProjectSpec* project, const Sampling& sampling) {
  const auto kind = parse_curve_kind(f.kind);
  if (!kind) fail(ErrorCode::Config, "unknown curve kind '" + f.kind + "'");
  auto need_project = [&]() -> const ProjectSpec& {
    if (!project) fail(ErrorCode::Config, "curve kind '" + f.kind + "' needs a project");
    return *project;
  };
  auto model = [&]() -> CostBehaviorModel {
    if (f.a && f.b) return CostBehaviorModel{*f.a, *f.b};
    if (f.a || f.b) fail(ErrorCode::Config, "--a and --b must be given together");
    if (project && project->cost_behavior) return *project->cost_behavior;
    fail(ErrorCode::Config, "no cost-behavior model: pass --a/--b or add cost_behavior to the project");
  };

  switch (*kind) {
    case CurveKind::ElasticityVsQ: {
      const ProjectSpec& p = need_project();
      const double cap = p.combination.capacity;
      return elasticity_curve(p.combination, range_or(f.q_min, f.q_max, 0.01 * cap, cap), sampling);
    }
    case CurveKind::ElasticityVsM: {
      const ProjectSpec& p = need_project();
      const double price = p.combination.unit_price;
      return elasticity_margin_curve(p.combination, f.volume.value_or(p.reference()),
                                     range_or(f.m_min, f.m_max, 0.01 * price, price), sampling);
    }
    case CurveKind::IndifferenceContours: {
      std::vector<double> levels = f.levels;
      if (levels.empty()) {
        const ProductiveCombination& c = need_project().combination;
        for (double lvl : {c.fixed_cash, c.fixed_total()}) {
          if (lvl > 0.0 && std::find(levels.begin(), levels.end(), lvl) == levels.end()) levels.push_back(lvl);
        }
      }
      if (project) {
        const ProductiveCombination& c = project->combination;
        return indifference_contours(levels, range_or(f.q_min, f.q_max, 0.01 * c.capacity, c.capacity),
                                     range_or(f.m_min, f.m_max, 0.01 * c.unit_price, c.unit_price), sampling);
      }
      if (!f.q_min || !f.q_max || !f.m_min || !f.m_max) {
        fail(ErrorCode::Config, "without a project, indifference needs --q-min/--q-max/--m-min/--m-max");
      }
      return indifference_contours(levels, {*f.q_min, *f.q_max}, {*f.m_min, *f.m_max}, sampling);
    }
    case CurveKind::CostBehavior:
    case CurveKind::RelativeElasticityVsF: {
      const CostBehaviorModel m = model();
      const Range fr = range_or(f.f_min, f.f_max, 0.01 * m.domain_limit(), 0.99 * m.domain_limit());
      return *kind == CurveKind::CostBehavior ? cost_behavior_curves(m, fr, sampling)
                                              : relative_elasticity_curve(m, fr, sampling);
    }
    case CurveKind::AbsoluteElasticityLines: {
      CostPoint base;
      if (f.base_f && f.base_v) {
        base = {*f.base_f, *f.base_v};
      } else {
        const ProductiveCombination& c = need_project().combination;
        base = {f.base_f.value_or(c.fixed_total()), f.base_v.value_or(c.unit_variable_cost)};
      }
      std::vector<double> slopes = f.slopes;
      if (slopes.empty()) slopes.push_back(model().slope);
      return absolute_elasticity_lines(base, slopes, range_or(f.df_min, f.df_max, 0.0, base.fixed), sampling);
    }
  }
  fail(ErrorCode::Config, "unhandled curve kind");
}

inline std::string help_for(const CLI::App& app) {
  const CLI::App* current = &app;
  for (;;) {
    auto subs = current->get_subcommands();
    if (subs.empty()) break;
    current = subs.front();
  }
  return current->help();
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name; `env_config`
/// is the TRESLEV_CONFIG fallback.
inline CliResult run(const std::vector<std::string>& args, std::optional<std::string> env_config = std::nullopt) {
  CLI::App app{
      "Treasury leverage analytics: liquidity thresholds (seuils de liquidité), treasury elasticities "
      "(effet de levier d'encaisse = immediate / d'exploitation = term), cost-behavior fitting and "
      "insolvency-risk scenarios.",
      "treslev"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string format_name = "table";
  double gap = 0.01;
  std::size_t samples = 256;
  app.add_option("--config", config_path, "Project file (JSON); falls back to $TRESLEV_CONFIG");
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--gap", gap, "Relative half-width excluded around critical values in curve grids");
  app.add_option("--samples", samples, "Samples per curve");

  std::string project_name;
  std::vector<std::string> project_names;

  auto* analyze = app.add_subcommand(
      "analyze", "Liquidity-break indicators (seuil de liquidité immédiate/à terme = cash/total break-even volume, "
                 "marge critique = critical unit margin) and leverage pair");
  analyze->add_option("project", project_name, "Project name")->required();

  auto* compare = app.add_subcommand("compare", "Side-by-side project performances (Performances des projets)");
  compare->add_option("projects", project_names, "Project names (default: all)");

  std::optional<double> t_dfc, t_dfn, t_newv;
  bool t_solve = false;
  auto* transform = app.add_subcommand(
      "transform", "Fixed-capacity change of cost structure: optimal elasticity E*, variable-cost floor, verdicts");
  transform->add_option("project", project_name, "Project name")->required();
  transform->add_option("--delta-fixed-cash", t_dfc, "Change in cash fixed costs (coûts fixes décaissables)");
  transform->add_option("--delta-fixed-noncash", t_dfn, "Change in non-cash charges (charges calculées)");
  auto* newv_opt = transform->add_option("--new-v", t_newv, "Proposed unit variable cost");
  transform->add_flag("--solve-v", t_solve, "Adopt the solved variable-cost floor")->excludes(newv_opt);

  std::optional<double> e_cap, e_fc, e_fn, e_v, e_p;
  bool price_term = false, price_immediate = false;
  int target_digits = 3;
  auto* expand = app.add_subcommand("expand", "Capacity expansion: before/after sensitivity indicators and price bounds");
  expand->add_option("project", project_name, "Project name")->required();
  expand->add_option("--new-capacity", e_cap, "Capacity after expansion");
  expand->add_option("--new-fixed-cash", e_fc, "Cash fixed costs after expansion");
  expand->add_option("--new-fixed-noncash", e_fn, "Non-cash charges after expansion");
  expand->add_option("--new-v", e_v, "Unit variable cost after expansion");
  expand->add_option("--new-price", e_p, "Unit price after expansion");
  expand->add_flag("--solve-price-term", price_term, "Price keeping the term leverage");
  expand->add_flag("--solve-price-immediate", price_immediate, "Price keeping the immediate leverage");
  expand->add_option("--target-digits", target_digits, "Decimals of the rounded leverage target")
      ->check(CLI::Range(0, 12));

  detail::CurveFlags cf;
  auto* curves = app.add_subcommand("curves", "Write a sampled curve grid (CSV or JSON by --out extension)");
  curves->add_option("project", project_name, "Project name");
  curves->add_option("--kind", cf.kind,
                     "elasticity-q | elasticity-m | indifference (courbes d'indifférence de liquidité) | "
                     "cost-behavior | relative-elasticity | absolute-lines")
      ->required();
  curves->add_option("--out", cf.out, "Output file; stdout when omitted");
  curves->add_option("--levels", cf.levels, "Fixed-cost levels for indifference contours")->delimiter(',');
  curves->add_option("--slopes", cf.slopes, "Slopes a for absolute-elasticity lines")->delimiter(',');
  curves->add_option("--q-min", cf.q_min, "Volume range, lower bound");
  curves->add_option("--q-max", cf.q_max, "Volume range, upper bound");
  curves->add_option("--m-min", cf.m_min, "Unit-margin range, lower bound");
  curves->add_option("--m-max", cf.m_max, "Unit-margin range, upper bound");
  curves->add_option("--f-min", cf.f_min, "Fixed-cost range, lower bound");
  curves->add_option("--f-max", cf.f_max, "Fixed-cost range, upper bound");
  curves->add_option("--df-min", cf.df_min, "Fixed-cost change range, lower bound");
  curves->add_option("--df-max", cf.df_max, "Fixed-cost change range, upper bound");
  curves->add_option("--volume", cf.volume, "Volume for elasticity-m (default: reference volume)");
  curves->add_option("--a", cf.a, "Cost-behavior slope a");
  curves->add_option("--b", cf.b, "Cost-behavior intercept b");
  curves->add_option("--base-f", cf.base_f, "Base fixed cost f0 for absolute lines");
  curves->add_option("--base-v", cf.base_v, "Base variable cost v0 for absolute lines");
  curves->add_flag("--log", cf.log, "Log-spaced abscissae");

  std::string fit_points, fit_point;
  std::optional<double> fit_intercept;
  auto* fit = app.add_subcommand("fit-costs", "Fit v = af + b from two (f,v) points or one point and b");
  auto* pts = fit->add_option("--points", fit_points, "Two points f:v,f:v");
  auto* pt = fit->add_option("--point", fit_point, "One point f:v (with --intercept)")->excludes(pts);
  fit->add_option("--intercept", fit_intercept, "Intercept b (ceiling of v, e.g. the market price)")->needs(pt);

  CliResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = detail::help_for(app);
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.out = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kExitConfig;
    result.err = std::string(e.what()) + "\n";
    return result;
  }

  const OutputFormat format = format_name == "json"  ? OutputFormat::Json
                              : format_name == "csv" ? OutputFormat::Csv
                                                     : OutputFormat::Table;
  try {
    auto config = [&]() {
      std::string path = config_path;
      if (path.empty() && env_config) path = *env_config;
      if (path.empty()) fail(ErrorCode::Config, "no project file: pass --config or set TRESLEV_CONFIG");
      return load_config(path);
    };

    auto emit_grid = [&](const CurveGrid& grid) {
      if (cf.out.empty()) {
        result.out = render_grid(grid, format == OutputFormat::Json ? GridFormat::Json : GridFormat::Csv);
      } else {
        write_file(cf.out, render_grid(grid, format_for_path(cf.out)));
        result.out = fmt::format("wrote {} rows ({}) to {}\n", grid.rows.size(), to_string(grid.kind), cf.out);
      }
    };

    if (fit->parsed()) {
      CostBehaviorModel model;
      std::vector<CostPoint> points;
      if (!fit_points.empty()) {
        points = detail::parse_points(fit_points);
        if (points.size() != 2) fail(ErrorCode::Config, "--points needs exactly two f:v pairs");
        model = fit_cost_model(points[0], points[1]);
      } else if (!fit_point.empty()) {
        if (!fit_intercept) fail(ErrorCode::Config, "--point needs --intercept");
        points = {detail::parse_point(fit_point)};
        model = fit_cost_model(points[0], *fit_intercept);
      } else {
        fail(ErrorCode::Config, "give --points f:v,f:v or --point f:v --intercept b");
      }
      result.out = render(fit_report(model, points), format);
      return result;
    }

    if (curves->parsed() && project_name.empty()) {
      const Sampling sampling{samples, cf.log ? Spacing::Log : Spacing::Uniform, gap};
      const CurveGrid grid = detail::build_curve(cf, nullptr, sampling);
      emit_grid(grid);
      return result;
    }

    const ProjectConfig cfg = config();
    if (analyze->parsed()) {
      result.out = render(analyze_report(cfg.find(project_name)), format);
    } else if (compare->parsed()) {
      std::vector<const ProjectSpec*> selected;
      if (project_names.empty()) {
        for (const auto& p : cfg.projects) selected.push_back(&p);
      } else {
        for (const auto& n : project_names) selected.push_back(&cfg.find(n));
      }
      result.out = render(compare_report(selected), format);
    } else if (transform->parsed()) {
      const ProjectSpec& p = cfg.find(project_name);
      TransformationSpec s = p.transformation.value_or(TransformationSpec{});
      if (t_dfc) s.delta_fixed_cash = *t_dfc;
      if (t_dfn) s.delta_fixed_noncash = *t_dfn;
      if (t_newv) s.new_unit_variable_cost = *t_newv;
      if (t_solve) s.new_unit_variable_cost.reset();
      const TransformationPlan plan{p.combination, s.delta_fixed_cash, s.delta_fixed_noncash, s.new_unit_variable_cost};
      result.out = render(transform_report(p, plan), format);
    } else if (expand->parsed()) {
      const ProjectSpec& p = cfg.find(project_name);
      ExpansionSpec s = p.expansion.value_or(ExpansionSpec{});
      if (e_cap) s.new_capacity = e_cap;
      if (e_fc) s.new_fixed_cash = e_fc;
      if (e_fn) s.new_fixed_noncash = e_fn;
      if (e_v) s.new_unit_variable_cost = e_v;
      if (e_p) s.new_unit_price = e_p;
      PriceSelection sel;
      if (price_term || price_immediate) sel = {price_term, price_immediate};
      result.out = render(expand_report(p, expansion_plan(p, s), ExpansionOptions{target_digits}, sel), format);
    } else if (curves->parsed()) {
      const ProjectSpec* p = project_name.empty() ? nullptr : &cfg.find(project_name);
      const Sampling sampling{samples, cf.log ? Spacing::Log : Spacing::Uniform, gap};
      emit_grid(detail::build_curve(cf, p, sampling));
    }
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.code());
    result.err = std::string(e.what()) + "\n";
    result.out.clear();
  }
  return result;
}

}  // namespace treslev::app

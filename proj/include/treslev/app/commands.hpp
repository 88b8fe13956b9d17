#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "treslev/app/config.hpp"
#include "treslev/app/report.hpp"
#include "treslev/cost_behavior.hpp"
#include "treslev/curves.hpp"
#include "treslev/performance.hpp"
#include "treslev/risk_scenarios.hpp"
#include "treslev/thresholds.hpp"

namespace treslev::app {

// Process exit codes; a stable contract for scripts.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNonViable = 3,
  kExitSingular = 4,
  kExitComputation = 5,
  kExitIo = 6,
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::InvalidArgument:
    case ErrorCode::MissingLife:
    case ErrorCode::ZeroCapital:
    case ErrorCode::EmptyRange:
    case ErrorCode::RangeOutsideDomain:
    case ErrorCode::VolumeExceedsCapacity:
    case ErrorCode::NegativeVolume:
      return kExitConfig;
    case ErrorCode::NonViable:
    case ErrorCode::NonPositiveMargin:
    case ErrorCode::MarginZero:
      return kExitNonViable;
    case ErrorCode::AtThreshold:
      return kExitSingular;
    case ErrorCode::IoFailure:
      return kExitIo;
    default:
      return kExitComputation;
  }
}

namespace detail {

inline std::string horizon_label(Horizon h) {
  return h == Horizon::Immediate ? "Liquidité immédiate (coûts fixes décaissables)"
                                 : "Liquidité à terme (coûts fixes totaux)";
}

inline Cell optional_cell(const std::optional<double>& v, Display d) {
  return v ? Cell::number(*v, d) : Cell::empty();
}

inline void require_viable(const ProjectSpec& p) {
  if (!p.combination.viable()) {
    fail(ErrorCode::NonViable, "project '" + p.name + "' has unit margin " +
                                   fmt::format("{}", p.combination.unit_margin()) + " <= 0");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// analyze

/// Flow summary, the 2x2 liquidity-break matrix and the leverage pair at the
/// project's reference volume.
inline Report analyze_report(const ProjectSpec& project) {
  const ProductiveCombination& c = project.combination;
  validate(c);
  detail::require_viable(project);
  const double q = project.reference();

  const FlowSummary flows = flow_summary(c, q);
  const LiquidityThresholds t = thresholds(c, q);
  const LeveragePair lev = leverage_pair(c, q);
  for (Horizon h : kHorizons) {
    if (!lev[h]) {
      fail(ErrorCode::AtThreshold, "reference volume sits on the " + std::string(to_string(h)) + " threshold");
    }
  }

  Report r;
  r.command = "analyze";
  r.tables.push_back({"combination",
                      "Combinaison productive : " + project.name,
                      {"valeur"},
                      {
                          {"unit_price", "Prix de vente unitaire", {fixed2(c.unit_price)}},
                          {"unit_variable_cost", "Coût variable unitaire", {fixed2(c.unit_variable_cost)}},
                          {"unit_margin", "Marge unitaire", {fixed2(c.unit_margin())}},
                          {"fixed_cash", "Coûts fixes décaissables", {integer(c.fixed_cash)}},
                          {"fixed_noncash", "Charges calculées", {integer(c.fixed_noncash)}},
                          {"fixed_total", "Coûts fixes totaux", {integer(c.fixed_total())}},
                          {"capacity", "Capacité de production", {integer(c.capacity)}},
                          {"reference_volume", "Volume de référence", {integer(q)}},
                      }});
  r.tables.push_back({"flows",
                      "Flux au volume de référence",
                      {"valeur"},
                      {
                          {"revenue", "Chiffre d'affaires", {integer(flows.revenue)}},
                          {"variable_total", "Coûts variables", {integer(flows.variable_total)}},
                          {"margin_total", "Marge totale", {integer(flows.margin_total)}},
                          {"result", "Résultat (trésorerie virtuelle à terme)", {integer(flows.result)}},
                          {"caf", "CAF (trésorerie virtuelle immédiate)", {integer(flows.caf)}},
                      }});
  r.tables.push_back({"liquidity_break",
                      "Indicateurs de rupture de la liquidité",
                      {"Production", "Marge"},
                      {
                          {"immediate", "Coûts fixes décaissables", {integer(t.q_star_immediate), fixed2(t.m_star_immediate)}},
                          {"term", "Coûts fixes totaux", {integer(t.q_star_term), fixed2(t.m_star_term)}},
                      }});

  Table levers{"leverage", "Effet de levier de trésorerie", {"coefficient", "zone"}, {}};
  for (Horizon h : kHorizons) {
    const double qs = t.q_star(h);
    const std::string zone = qs > 0.0 ? std::string(to_string(sensitivity_zone(q, qs))) : "NoFixedCosts";
    levers.rows.push_back({std::string(to_string(h)),
                           h == Horizon::Immediate ? "Effet de levier d'encaisse" : "Effet de levier d'exploitation",
                           {fixed2(*lev[h]), Cell::label(zone)}});
  }
  r.tables.push_back(std::move(levers));
  return r;
}

// ---------------------------------------------------------------------------
// compare

/// Side-by-side project performances at each project's reference volume.
inline Report compare_report(const std::vector<const ProjectSpec*>& projects) {
  if (projects.empty()) fail(ErrorCode::Config, "compare needs at least one project");
  Table t{"performances", "Performances des projets", {}, {}};
  std::vector<std::string> keys = {"investment_life", "capacity", "fixed_total", "fixed_noncash", "fixed_cash",
                                   "capital_invested", "unit_margin", "margin_total", "profit", "profitability",
                                   "leverage_immediate", "leverage_term"};
  std::vector<std::string> labels = {"Durée de vie de l'investissement (année)",
                                     "Capacité de production",
                                     "Coûts fixes totaux",
                                     "Charges calculées (amortissement annuel)",
                                     "Coûts fixes décaissables",
                                     "Capital investi (amortissement annuel × durée de vie)",
                                     "Marge unitaire",
                                     "Marge totale",
                                     "Bénéfice",
                                     "Rentabilité (bénéfices/Capital investi)",
                                     "Levier de trésorerie immédiate",
                                     "Levier de trésorerie à terme"};
  for (std::size_t i = 0; i < keys.size(); ++i) t.rows.push_back({keys[i], labels[i], {}});

  for (const ProjectSpec* p : projects) {
    const ProductiveCombination& c = p->combination;
    validate(c);
    detail::require_viable(*p);
    const double q = p->reference();
    const ProjectPerformance perf = performance_summary(c, q);
    const FlowSummary flows = flow_summary(c, q);
    t.columns.push_back(p->name);
    std::vector<Cell> col = {integer(*c.investment_life),
                             integer(c.capacity),
                             integer(c.fixed_total()),
                             integer(c.fixed_noncash),
                             integer(c.fixed_cash),
                             integer(perf.capital_invested),
                             fixed2(c.unit_margin()),
                             integer(flows.margin_total),
                             integer(perf.profit),
                             fixed2(perf.profitability),
                             detail::optional_cell(perf.leverage_immediate, Display::Fixed2),
                             detail::optional_cell(perf.leverage_term, Display::Fixed2)};
    for (std::size_t i = 0; i < col.size(); ++i) t.rows[i].cells.push_back(col[i]);
  }
  return {"compare", {std::move(t)}};
}

// ---------------------------------------------------------------------------
// transform

namespace detail {

// Base margin row, then one row per candidate new margin.
inline Table threshold_evolution(const TransformationAssessment& a, Horizon h, const std::vector<double>& margins) {
  const HorizonTransformation& ht = a[h];
  const bool immediate = h == Horizon::Immediate;
  const std::string which = immediate ? "décaissables" : "totaux";
  Table t{immediate ? "threshold_evolution_immediate" : "threshold_evolution_term",
          immediate ? "Evolution du seuil de liquidité immédiate" : "Evolution du seuil de liquidité à terme",
          {fmt::format("f0 {} = {:.0f}", which, ht.fixed_before), fmt::format("f1 {} = {:.0f}", which, ht.fixed_after)},
          {}};
  const double m0 = a.before.unit_margin();
  t.rows.push_back({"m0", "m0 = " + format_cell(fixed2(m0)), {integer(ht.q_star_before), Cell::empty()}});
  for (double m1 : margins) {
    t.rows.push_back({"m1=" + format_number(m1), "m1 = " + format_cell(fixed2(m1)),
                      {Cell::empty(), integer(liquidity_threshold(ht.fixed_after, m1))}});
  }
  return t;
}

}  // namespace detail

inline Report transform_report(const ProjectSpec& project, const TransformationPlan& plan) {
  detail::require_viable(project);
  const TransformationAssessment a = assess_transformation(plan);
  const ProductiveCombination& b = a.before;
  const ProductiveCombination& n = a.after;
  const double price = b.unit_price;

  Report r;
  r.command = "transform";
  r.tables.push_back(
      {"structure",
       "Changement de structure d'exploitation : " + project.name,
       {"avant", "après"},
       {
           {"fixed_cash", "Coûts fixes décaissables", {integer(b.fixed_cash), integer(n.fixed_cash)}},
           {"fixed_noncash", "Charges calculées", {integer(b.fixed_noncash), integer(n.fixed_noncash)}},
           {"fixed_total", "Coûts fixes totaux", {integer(b.fixed_total()), integer(n.fixed_total())}},
           {"unit_variable_cost", a.variable_cost_solved ? "Coût variable unitaire (plancher résolu)" : "Coût variable unitaire (donné)",
            {fixed2(b.unit_variable_cost), fixed2(n.unit_variable_cost)}},
           {"unit_margin", "Marge unitaire", {fixed2(b.unit_margin()), fixed2(n.unit_margin())}},
           {"margin_elasticity", "Elasticité de la marge / coût variable",
            {fixed2(margin_elasticity_wrt_v(b.unit_variable_cost, price)),
             fixed2(margin_elasticity_wrt_v(n.unit_variable_cost, n.unit_price))}},
       }});

  Table optimal{"optimal_elasticity",
                "Elasticité optimale et coût variable maximal",
                {"E*", "f0", "v0", "m0", "Δf", "Δv", "f1", "v1", "m1"},
                {}};
  std::vector<double> margins;
  for (Horizon h : kHorizons) {
    const HorizonTransformation& ht = a[h];
    std::vector<Cell> cells = {detail::optional_cell(ht.optimal_elasticity, Display::Fixed3),
                               integer(ht.fixed_before),
                               fixed2(b.unit_variable_cost),
                               fixed2(b.unit_margin()),
                               integer(ht.fixed_after - ht.fixed_before)};
    if (ht.variable_cost_floor) {
      const double v1 = *ht.variable_cost_floor;
      cells.insert(cells.end(), {fixed2(b.unit_variable_cost - v1), integer(ht.fixed_after), fixed2(v1), fixed2(price - v1)});
      margins.push_back(price - v1);
    } else {
      cells.insert(cells.end(), {Cell::empty(), integer(ht.fixed_after),
                                 ht.infeasible ? Cell::label("infeasible") : Cell::empty(), Cell::empty()});
    }
    optimal.rows.push_back({std::string(to_string(h)), detail::horizon_label(h), std::move(cells)});
  }
  r.tables.push_back(std::move(optimal));

  margins.push_back(n.unit_margin());
  std::sort(margins.begin(), margins.end());
  margins.erase(std::unique(margins.begin(), margins.end(),
                            [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y)); }),
                margins.end());
  margins.erase(std::remove_if(margins.begin(), margins.end(), [](double m) { return !(m > 0.0); }), margins.end());
  for (Horizon h : kHorizons) r.tables.push_back(detail::threshold_evolution(a, h, margins));

  Table verdicts{"verdicts", "Sensibilité de la trésorerie", {"seuil avant", "seuil après", "verdict"}, {}};
  for (Horizon h : kHorizons) {
    const HorizonTransformation& ht = a[h];
    verdicts.rows.push_back({std::string(to_string(h)), detail::horizon_label(h),
                             {integer(ht.q_star_before), integer(ht.q_star_after), Cell::label(std::string(to_string(ht.verdict)))}});
  }
  r.tables.push_back(std::move(verdicts));
  return r;
}

// ---------------------------------------------------------------------------
// expand

struct PriceSelection {
  bool term = true;
  bool immediate = true;
};

inline ExpansionPlan expansion_plan(const ProjectSpec& project, const ExpansionSpec& spec) {
  const ProductiveCombination& c = project.combination;
  ExpansionPlan plan = unchanged_expansion(c);
  plan.new_capacity = spec.new_capacity.value_or(c.capacity);
  plan.new_fixed_cash = spec.new_fixed_cash.value_or(c.fixed_cash);
  plan.new_fixed_noncash = spec.new_fixed_noncash.value_or(c.fixed_noncash);
  plan.new_unit_variable_cost = spec.new_unit_variable_cost.value_or(c.unit_variable_cost);
  plan.new_unit_price = spec.new_unit_price;
  return plan;
}

inline Report expand_report(const ProjectSpec& project, const ExpansionPlan& plan, const ExpansionOptions& options = {},
                            PriceSelection prices = {}) {
  detail::require_viable(project);
  const ExpansionAssessment a = assess_expansion(plan, options);
  const ProductiveCombination& b = a.before;
  const ProductiveCombination& n = a.after;

  Report r;
  r.command = "expand";
  r.tables.push_back(
      {"parameters",
       "Paramètres de production : " + project.name,
       {"avant", "après"},
       {
           {"capacity", "Capacité de production", {integer(b.capacity), integer(n.capacity)}},
           {"fixed_noncash", "Charges calculées", {integer(b.fixed_noncash), integer(n.fixed_noncash)}},
           {"fixed_cash", "Charges fixes décaissables", {integer(b.fixed_cash), integer(n.fixed_cash)}},
           {"fixed_total", "Charges fixes totales", {integer(b.fixed_total()), integer(n.fixed_total())}},
           {"unit_variable_cost", "Coûts variables unitaires", {fixed2(b.unit_variable_cost), fixed2(n.unit_variable_cost)}},
           {"unit_price", "Prix de vente", {fixed2(b.unit_price), fixed2(n.unit_price)}},
           {"result", "Résultat", {integer(a.flows_before.result), integer(a.flows_after.result)}},
           {"caf", "CAF", {integer(a.flows_before.caf), integer(a.flows_after.caf)}},
       }});
  const ExpansionHorizon& im = a[Horizon::Immediate];
  const ExpansionHorizon& tm = a[Horizon::Term];
  r.tables.push_back({"indicators",
                      "Indicateurs de la sensibilité de la trésorerie",
                      {"avant", "après"},
                      {
                          {"q_star_immediate", "Seuil de liquidité immédiate", {integer(im.q_star_before), integer(im.q_star_after)}},
                          {"q_star_term", "Seuil de liquidité à terme", {integer(tm.q_star_before), integer(tm.q_star_after)}},
                          {"leverage_immediate", "Effet de levier d'encaisse", {fixed3(im.leverage_before), fixed3(im.leverage_after)}},
                          {"leverage_term", "Effet de levier d'exploitation", {fixed3(tm.leverage_before), fixed3(tm.leverage_after)}},
                      }});

  Table cmp{"comparison", "Comparaison Q1/Q2 et Q*1/Q*2", {"Q1/Q2", "Q*1/Q*2", "verdict"}, {}};
  for (const ExpansionHorizon& eh : a.horizons) {
    cmp.rows.push_back({std::string(to_string(eh.horizon)), detail::horizon_label(eh.horizon),
                        {fixed3(eh.volume_ratio), detail::optional_cell(eh.threshold_ratio, Display::Fixed3),
                         Cell::label(std::string(to_string(eh.verdict)))}});
  }
  r.tables.push_back(std::move(cmp));

  Table pt{"prices",
           "Prix de vente maintenant le levier initial",
           {"levier cible", "prix", fmt::format("cible arrondie ({} déc.)", options.target_digits), "prix (cible arrondie)"},
           {}};
  for (Horizon h : {Horizon::Term, Horizon::Immediate}) {
    if ((h == Horizon::Term && !prices.term) || (h == Horizon::Immediate && !prices.immediate)) continue;
    const ExpansionHorizon& eh = a[h];
    pt.rows.push_back({std::string(to_string(h)),
                       h == Horizon::Term ? "Maintien de la liquidité à terme" : "Maintien de la liquidité immédiate",
                       {Cell::number(eh.leverage_before, Display::Fixed3), detail::optional_cell(eh.price_to_maintain, Display::Fixed2),
                        Cell::number(eh.rounded_target, Display::Fixed3),
                        detail::optional_cell(eh.price_to_maintain_rounded, Display::Fixed2)}});
  }
  if (!pt.rows.empty()) r.tables.push_back(std::move(pt));
  return r;
}

// ---------------------------------------------------------------------------
// fit-costs

inline Report fit_report(const CostBehaviorModel& model, const std::vector<CostPoint>& points) {
  Report r;
  r.command = "fit-costs";
  r.tables.push_back({"model",
                      "Comportement des coûts v = af + b",
                      {"valeur"},
                      {
                          {"a", "a (pente)", {significant(model.slope)}},
                          {"b", "b (coût variable plafond)", {significant(model.intercept)}},
                          {"domain_limit", "Limite du domaine -b/a", {integer(model.domain_limit())}},
                          {"unit_crossover", "Elasticité -1 en f = -b/2a", {integer(model.unit_crossover())}},
                      }});
  Table e{"elasticities", "Elasticité relative aux points donnés", {"f", "v", "E v/f", "plage"}, {}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CostPoint& p = points[i];
    std::vector<Cell> cells = {integer(p.fixed), fixed2(p.variable)};
    if (model.in_domain(p.fixed) && p.fixed > 0.0) {
      const double el = relative_elasticity_vf(p.fixed, model);
      cells.push_back(fixed2(el));
      cells.push_back(Cell::label(std::string(to_string(classify_elasticity(el)))));
    } else {
      cells.insert(cells.end(), {Cell::empty(), Cell::label("hors domaine")});
    }
    e.rows.push_back({"point" + std::to_string(i + 1), fmt::format("Point {}", i + 1), std::move(cells)});
  }
  if (points.size() == 2) {
    const double arc = arc_elasticity_vf(points[0].fixed, points[0].variable, points[1].fixed, points[1].variable);
    e.rows.push_back({"arc", "Elasticité d'arc (point 1 → point 2)", {Cell::empty(), Cell::empty(), fixed2(arc), Cell::empty()}});
  }
  r.tables.push_back(std::move(e));
  return r;
}

}  // namespace treslev::app

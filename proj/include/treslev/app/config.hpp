#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "treslev/core_model.hpp"
#include "treslev/cost_behavior.hpp"
#include "treslev/error.hpp"
#include "treslev/risk_scenarios.hpp"

namespace treslev::app {

struct TransformationSpec {
  double delta_fixed_cash = 0.0;
  double delta_fixed_noncash = 0.0;
  std::optional<double> new_unit_variable_cost;
};

// Unset fields keep the base project's value.
struct ExpansionSpec {
  std::optional<double> new_capacity;
  std::optional<double> new_fixed_cash;
  std::optional<double> new_fixed_noncash;
  std::optional<double> new_unit_variable_cost;
  std::optional<double> new_unit_price;
};

struct ProjectSpec {
  std::string name;
  ProductiveCombination combination;
  std::optional<double> reference_volume;
  std::optional<CostBehaviorModel> cost_behavior;
  std::optional<TransformationSpec> transformation;
  std::optional<ExpansionSpec> expansion;

  double reference() const { return reference_volume.value_or(combination.capacity); }
};

struct ProjectConfig {
  std::vector<ProjectSpec> projects;

  const ProjectSpec& find(std::string_view name) const {
    auto it = std::find_if(projects.begin(), projects.end(), [&](const ProjectSpec& p) { return p.name == name; });
    if (it == projects.end()) fail(ErrorCode::Config, "unknown project '" + std::string(name) + "'");
    return *it;
  }
};

namespace detail {

using Json = nlohmann::json;

class FieldReader {
 public:
  FieldReader(const Json& obj, std::string path, std::string_view source) : obj_(obj), path_(std::move(path)), source_(source) {
    if (!obj_.is_object()) error("expected an object");
  }

  [[noreturn]] void error(const std::string& what, std::string_view field = {}) const {
    std::string where = path_;
    if (!field.empty()) where += (where.empty() ? "" : ".") + std::string(field);
    fail(ErrorCode::Config, std::string(source_) + ": " + where + ": " + what);
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, _] : obj_.items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) error("unknown field", k);
    }
  }

  bool has(std::string_view key) const { return obj_.contains(std::string(key)); }

  std::optional<double> optional_number(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    const Json& v = obj_.at(std::string(key));
    if (!v.is_number()) error("expected a number", key);
    const double x = v.get<double>();
    if (!std::isfinite(x)) error("must be finite", key);
    return x;
  }

  double number(std::string_view key) const {
    auto v = optional_number(key);
    if (!v) error("missing required field", key);
    return *v;
  }

  std::string string(std::string_view key) const {
    if (!has(key)) error("missing required field", key);
    const Json& v = obj_.at(std::string(key));
    if (!v.is_string()) error("expected a string", key);
    return v.get<std::string>();
  }

  FieldReader child(std::string_view key) const {
    return FieldReader(obj_.at(std::string(key)), path_ + "." + std::string(key), source_);
  }

  const std::string& path() const { return path_; }

 private:
  const Json& obj_;
  std::string path_;
  std::string_view source_;
};

inline void check(const FieldReader& r, bool ok, std::string_view field, const char* what) {
  if (!ok) r.error(what, field);
}

inline ProjectSpec read_project(const FieldReader& r) {
  r.allow_only({"name", "unit_price", "unit_variable_cost", "fixed_cash", "fixed_noncash", "capacity",
                "investment_life", "reference_volume", "cost_behavior", "transformation", "expansion"});
  ProjectSpec p;
  p.name = r.string("name");
  if (p.name.empty()) r.error("must not be empty", "name");
  ProductiveCombination& c = p.combination;
  c.unit_price = r.number("unit_price");
  c.unit_variable_cost = r.number("unit_variable_cost");
  c.fixed_cash = r.number("fixed_cash");
  c.fixed_noncash = r.number("fixed_noncash");
  c.capacity = r.number("capacity");
  c.investment_life = r.optional_number("investment_life");
  p.reference_volume = r.optional_number("reference_volume");

  check(r, c.unit_price > 0.0, "unit_price", "must be > 0");
  check(r, c.unit_variable_cost >= 0.0, "unit_variable_cost", "must be >= 0");
  check(r, c.fixed_cash >= 0.0, "fixed_cash", "must be >= 0");
  check(r, c.fixed_noncash >= 0.0, "fixed_noncash", "must be >= 0");
  check(r, c.capacity > 0.0, "capacity", "must be > 0");
  if (c.investment_life) check(r, *c.investment_life > 0.0, "investment_life", "must be > 0");
  if (p.reference_volume) {
    check(r, *p.reference_volume > 0.0 && *p.reference_volume <= c.capacity, "reference_volume",
          "must be in (0, capacity]");
  }

  if (r.has("cost_behavior")) {
    const FieldReader cb = r.child("cost_behavior");
    cb.allow_only({"a", "b"});
    const double a = cb.number("a");
    const double b = cb.number("b");
    check(cb, a < 0.0, "a", "must be < 0");
    check(cb, b > 0.0, "b", "must be > 0");
    p.cost_behavior = CostBehaviorModel{a, b};
  }
  if (r.has("transformation")) {
    const FieldReader t = r.child("transformation");
    t.allow_only({"delta_fixed_cash", "delta_fixed_noncash", "new_unit_variable_cost"});
    TransformationSpec s;
    s.delta_fixed_cash = t.optional_number("delta_fixed_cash").value_or(0.0);
    s.delta_fixed_noncash = t.optional_number("delta_fixed_noncash").value_or(0.0);
    s.new_unit_variable_cost = t.optional_number("new_unit_variable_cost");
    check(t, c.fixed_cash + s.delta_fixed_cash >= 0.0, "delta_fixed_cash", "would make fixed_cash negative");
    check(t, c.fixed_noncash + s.delta_fixed_noncash >= 0.0, "delta_fixed_noncash",
          "would make fixed_noncash negative");
    if (s.new_unit_variable_cost) check(t, *s.new_unit_variable_cost >= 0.0, "new_unit_variable_cost", "must be >= 0");
    p.transformation = s;
  }
  if (r.has("expansion")) {
    const FieldReader e = r.child("expansion");
    e.allow_only({"new_capacity", "new_fixed_cash", "new_fixed_noncash", "new_unit_variable_cost", "new_unit_price"});
    ExpansionSpec s;
    s.new_capacity = e.optional_number("new_capacity");
    s.new_fixed_cash = e.optional_number("new_fixed_cash");
    s.new_fixed_noncash = e.optional_number("new_fixed_noncash");
    s.new_unit_variable_cost = e.optional_number("new_unit_variable_cost");
    s.new_unit_price = e.optional_number("new_unit_price");
    if (s.new_capacity) check(e, *s.new_capacity >= c.capacity, "new_capacity", "must be >= capacity");
    if (s.new_fixed_cash) check(e, *s.new_fixed_cash >= 0.0, "new_fixed_cash", "must be >= 0");
    if (s.new_fixed_noncash) check(e, *s.new_fixed_noncash >= 0.0, "new_fixed_noncash", "must be >= 0");
    if (s.new_unit_variable_cost) check(e, *s.new_unit_variable_cost >= 0.0, "new_unit_variable_cost", "must be >= 0");
    if (s.new_unit_price) check(e, *s.new_unit_price > 0.0, "new_unit_price", "must be > 0");
    p.expansion = s;
  }
  return p;
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// Parses a project file. Errors carry `source:line:col` for syntax problems
/// and `source: projects[i].field` for invalid values.
inline ProjectConfig parse_config(std::string_view text, std::string_view source = "<config>") {
  detail::Json doc;
  try {
    doc = detail::Json::parse(text);
  } catch (const detail::Json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    fail(ErrorCode::Config, std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                ": invalid JSON: " + e.what());
  }
  const detail::FieldReader root(doc, "", source);
  root.allow_only({"projects"});
  if (!root.has("projects") || !doc.at("projects").is_array()) root.error("expected an array", "projects");

  ProjectConfig cfg;
  const auto& arr = doc.at("projects");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const detail::FieldReader r(arr[i], "projects[" + std::to_string(i) + "]", source);
    ProjectSpec p = detail::read_project(r);
    for (const auto& other : cfg.projects) {
      if (other.name == p.name) r.error("duplicate project name '" + p.name + "'", "name");
    }
    cfg.projects.push_back(std::move(p));
  }
  if (cfg.projects.empty()) root.error("must contain at least one project", "projects");
  return cfg;
}

inline ProjectConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Config, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace treslev::app

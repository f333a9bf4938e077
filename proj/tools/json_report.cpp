#include "json_report.hpp"

namespace sscx::report {

ordered_json to_json(const Calibration& cal) {
  return {{"hsigma", cal.hsigma},
          {"hsigma_source", cal.hsigma_estimated ? "estimated" : "override"},
          {"hsigma_min_rule", cal.hsigma_min_rule},
          {"hsigma_stabilized", cal.hsigma_stabilized},
          {"hsigma_levels", cal.hsigma_levels},
          {"magic_level", cal.magic},
          {"delta", cal.delta},
          {"epsilon", cal.epsilon},
          {"epsilon_source", cal.epsilon_default ? "default" : "override"}};
}

ordered_json to_json(const ConeTypeReport& rep) {
  ordered_json levels = ordered_json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"level", l.level},
                      {"count", l.count},
                      {"cumulative", l.cumulative},
                      {"new", l.new_type_hashes.size()},
                      {"sampled", l.sampled},
                      {"new_type_hashes", l.new_type_hashes}});
  return {{"hsigma", rep.hsigma}, {"stable", rep.stable()}, {"levels", levels}};
}

ordered_json to_json(const BoundedDegreeStats& st) {
  ordered_json cells = ordered_json::array();
  bool holds = true;
  for (const auto& c : st.cells) {
    holds = holds && c.bound_holds;
    cells.push_back({{"level", c.level},
                     {"k", c.k},
                     {"max_count", c.max_count},
                     {"max_diameter", c.max_diameter},
                     {"max_component_diameter", c.max_component_diameter},
                     {"balls", c.balls},
                     {"bound_holds", c.bound_holds}});
  }
  ordered_json j = {{"r", st.r},
                    {"C_observed", st.C_observed},
                    {"D_observed", st.D_observed},
                    {"diameter_bound", (2 * st.r + 1) * (st.C_observed + 1)},
                    {"component_diameter", st.component_diameter},
                    {"stable_level", nullptr},
                    {"constant_in_k", st.constant_in_k},
                    {"bound_holds", holds},
                    {"cells", cells}};
  if (st.stable_level) j["stable_level"] = *st.stable_level;
  return j;
}

ordered_json to_json(const DynatlasReport& rep) {
  ordered_json forms = ordered_json::array();
  for (const auto& f : rep.forms)
    forms.push_back({{"hash", f.hash}, {"first_level", f.first_level}, {"first_k", f.first_k}, {"degree", f.degree}});
  return {{"r", rep.r},
          {"hsigma", rep.hsigma},
          {"D", rep.D},
          {"levels", {rep.first_level, rep.last_level}},
          {"k", {rep.first_k, rep.last_k}},
          {"form_count", rep.forms.size()},
          {"new_per_k", rep.new_per_k},
          {"cumulative_per_k", rep.cumulative_per_k},
          {"p", rep.p},
          {"stabilized", rep.stabilized},
          {"notes", rep.notes},
          {"forms", forms}};
}

ordered_json to_json(const LocalDegree& deg) {
  return {{"first_n", deg.first_n},
          {"value", deg.value},
          {"stabilized", deg.stabilized},
          {"sandwich_agrees", deg.sandwich_agrees},
          {"exact", deg.exact},
          {"under", deg.under},
          {"over", deg.over}};
}

ordered_json to_json(const PreimageReport& rep) {
  ordered_json classes = ordered_json::array();
  for (const auto& c : rep.classes) {
    ordered_json letters = ordered_json::array();
    for (auto y : c.letters) letters.push_back(static_cast<int>(y));
    classes.push_back({{"letters", letters}, {"degree", to_json(c.degree)}});
  }
  return {{"ray", rep.ray.str()},
          {"degree_sum", rep.degree_sum},
          {"relation_consistent", rep.relation_consistent},
          {"classes", classes}};
}

ordered_json to_json(const DiameterReport& rep) {
  ordered_json rows = ordered_json::array();
  bool inclusion = true;
  for (const auto& r : rep.rows) {
    inclusion = inclusion && r.inclusion;
    rows.push_back({{"t", r.t},
                    {"samples", r.samples},
                    {"shadow_diameter", r.shadow_diameter},
                    {"umbra_diameter", r.umbra_diameter},
                    {"ratio", r.ratio},
                    {"inclusion", r.inclusion}});
  }
  return {{"ray", rep.ray.str()},
          {"c", rep.c},
          {"epsilon", rep.params.epsilon},
          {"K", rep.params.K()},
          {"band_min", rep.band_min},
          {"band_max", rep.band_max},
          {"band_ratio", rep.band_ratio()},
          {"inclusion", inclusion},
          {"rows", rows}};
}

ordered_json to_json(const VerifyReport& rep) {
  ordered_json checks = ordered_json::array();
  std::size_t passed = 0;
  for (const auto& c : rep.checks) {
    passed += c.pass ? 1 : 0;
    checks.push_back({{"module", c.module}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return {{"all_pass", rep.all_pass()}, {"passed", passed}, {"total", rep.checks.size()}, {"checks", checks}};
}

}  // namespace sscx::report

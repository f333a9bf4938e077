#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "json_report.hpp"
#include "sscx/error.hpp"
#include "sscx/group_io.hpp"

#ifndef SSCX_VERSION
#define SSCX_VERSION "0.0.0"
#endif

namespace {

using namespace sscx;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCap = 3;
constexpr int kExitProperty = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Range {
  int first = 0;
  int last = 0;
};

Range parse_range(const std::string& text, const char* flag) {
  Range r;
  auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      r.first = r.last = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
      r.first = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(text);
      r.last = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw ConfigError(std::string(flag) + " expects A..B, got '" + text + "'");
  }
  if (r.first < 0 || r.last < r.first) throw ConfigError(std::string(flag) + " needs 0 <= A <= B, got '" + text + "'");
  return r;
}

struct RunConfig {
  std::string group_file;
  std::string builtin;
  std::optional<int> hsigma;
  std::optional<double> epsilon;
  std::string levels;
  std::string k;
  std::optional<int> depth;
  std::uint64_t seed = 1;
  std::string json_path;
  std::string dot_path;
  // command-specific
  int radius = 1;
  int max_centers = 64;
  int samples = 0;
  int L = 1;
  std::vector<std::string> rays;
  std::uint64_t state_cap = 0;
  int max_rounds = 0;

  Range level_range(Range fallback) const { return levels.empty() ? fallback : parse_range(levels, "--levels"); }
  Range k_range(Range fallback) const { return k.empty() ? fallback : parse_range(k, "--k"); }
};

struct Session {
  WreathRecursion def;
  std::string name;
  std::unique_ptr<Group> group;
  std::unique_ptr<Complex> complex;
  std::optional<Calibration> cal;

  explicit Session(const RunConfig& cfg) {
    if (cfg.group_file.empty() == cfg.builtin.empty()) throw ConfigError("give exactly one of --group PATH or --builtin NAME");
    if (!cfg.builtin.empty()) {
      def = builtin_group(cfg.builtin).recursion;
      name = cfg.builtin;
    } else {
      def = load_group_file(cfg.group_file);
      name = std::filesystem::path(cfg.group_file).stem().string();
    }
    GroupLimits limits;
    if (cfg.state_cap > 0) limits.state_cap = cfg.state_cap;
    if (cfg.max_rounds > 0) limits.max_rounds = cfg.max_rounds;
    group = std::make_unique<Group>(def, limits);
  }

  Complex& cx() {
    if (!complex) complex = std::make_unique<Complex>(*group);
    return *complex;
  }

  const Calibration& calibration(const RunConfig& cfg) {
    if (!cal) cal = calibrate(cx(), cfg.hsigma, cfg.epsilon, cfg.seed);
    return *cal;
  }
};

ordered_json header(const std::string& command, Session& s, const RunConfig& cfg, const ordered_json& budgets) {
  const auto& cal = s.calibration(cfg);
  const auto& limits = s.group->limits();
  ordered_json b = budgets;
  b["state_cap"] = limits.state_cap;
  b["max_rounds"] = limits.max_rounds;
  b["ball_cap"] = limits.ball_cap;
  b["nucleus_cap"] = limits.nucleus_cap;
  b["vertex_budget"] = s.cx().options().vertex_budget;
  b["matrix_budget"] = s.cx().options().matrix_budget;
  return {{"tool", "sscx"},
          {"version", SSCX_VERSION},
          {"command", command},
          {"group", {{"name", s.name}, {"alphabet", s.def.alphabet}, {"hash", s.group->definition_hash()}}},
          {"hsigma", cal.hsigma},
          {"epsilon", cal.epsilon},
          {"seed", cfg.seed},
          {"budgets", b},
          {"calibration", report::to_json(cal)}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("cannot write " + path);
}

void emit(const RunConfig& cfg, const ordered_json& report, const std::string& summary) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.json_path.empty()) {
    std::cout << text;
  } else {
    write_text(cfg.json_path, text);
    std::cout << summary;
  }
}

std::vector<Ray> rays_from(const RunConfig& cfg, int d) {
  std::vector<std::string> texts = cfg.rays;
  if (texts.empty()) texts = {";0", ";1", "1;0", ";01", "0;1", "01;10", ";011", "11;0"};
  std::vector<Ray> out;
  for (const auto& t : texts) out.push_back(Ray::parse(t, d));
  return out;
}

// --- commands ----------------------------------------------------------------

int cmd_nucleus(const RunConfig& cfg) {
  Session s(cfg);
  const auto& nuc = s.group->nucleus();
  Range Ls = cfg.level_range({1, 3});
  ordered_json elements = ordered_json::array();
  for (auto id : nuc.elements) elements.push_back({{"element", s.group->describe(id)}, {"magic_level", s.group->magic_level_of(id)}});
  ordered_json magic = ordered_json::array();
  for (int L = Ls.first; L <= Ls.last; ++L) magic.push_back({{"L", L}, {"m", s.group->magic_level(L)}});
  ordered_json good = ordered_json::array();
  for (const auto& g : s.group->good_generators()) good.push_back(g.name);
  auto rep = header("nucleus", s, cfg, {{"levels", {Ls.first, Ls.last}}});
  rep["nucleus"] = {{"size", nuc.size()}, {"elements", elements}};
  rep["magic_levels"] = magic;
  rep["good_generators"] = good;
  std::ostringstream sum;
  sum << "nucleus size " << nuc.size() << "\n";
  emit(cfg, rep, sum.str());
  return kExitOk;
}

int cmd_graph(const RunConfig& cfg) {
  Session s(cfg);
  Range lv = cfg.level_range({0, 4});
  auto& c = s.cx();
  ordered_json levels = ordered_json::array();
  for (int n = lv.first; n <= lv.last; ++n) {
    auto g = c.level_graph(n);
    int diameter = 0;
    if (g->size() <= c.options().matrix_budget) {
      for (std::uint64_t v = 0; v < g->size(); ++v)
        for (int x : g->distances_from(v)) diameter = std::max(diameter, x);
    } else {
      for (int x : g->distances_from(0)) diameter = std::max(diameter, x);
    }
    levels.push_back({{"level", n}, {"vertices", g->size()}, {"connected", g->connected()},
                      {g->size() <= c.options().matrix_budget ? "diameter" : "eccentricity_of_root_word", diameter}});
  }
  if (!cfg.dot_path.empty()) write_text(cfg.dot_path, lv.first == lv.last ? c.level_dot(lv.first) : c.slice_dot(lv.last));
  auto rep = header("graph", s, cfg, {{"levels", {lv.first, lv.last}}});
  rep["levels"] = levels;
  emit(cfg, rep, "graph levels " + std::to_string(lv.first) + ".." + std::to_string(lv.last) + "\n");
  return kExitOk;
}

int cmd_cone_types(const RunConfig& cfg) {
  Session s(cfg);
  Range lv = cfg.level_range({1, 8});
  const int hs = s.calibration(cfg).hsigma;
  const std::uint64_t cap = cfg.samples > 0 ? static_cast<std::uint64_t>(cfg.samples) : (1u << 14);
  auto ct = enumerate_cone_types(s.cx(), lv.first, lv.last, hs, cap, cfg.seed);
  auto rep = header("cone-types", s, cfg, {{"levels", {lv.first, lv.last}}, {"max_vertices", cap}});
  rep["cone_types"] = report::to_json(ct);
  emit(cfg, rep, "cone types " + std::to_string(ct.levels.empty() ? 0 : ct.levels.back().cumulative) +
                     (ct.stable() ? " (stable)\n" : " (not stable)\n"));
  return kExitOk;
}

int cmd_shadow_types(const RunConfig& cfg) {
  Session s(cfg);
  auto& c = s.cx();
  const int hs = s.calibration(cfg).hsigma;
  const int D = cfg.depth.value_or(2 * cfg.radius + 1);
  Range lv = cfg.level_range({(D + 1) / 2 + 1, (D + 1) / 2 + 4});
  if (lv.first < (D + 1) / 2) throw Error(ErrorKind::LevelTooSmall, "levels must be at least ceil(D/2)");
  const std::uint64_t cap = cfg.samples > 0 ? static_cast<std::uint64_t>(cfg.samples) : 256;
  std::mt19937_64 rng(cfg.seed);
  std::set<std::string> seen;
  ordered_json levels = ordered_json::array();
  std::size_t last_new = 0;
  for (int n = lv.first; n <= lv.last; ++n) {
    const std::uint64_t size = level_size(c.alphabet(), static_cast<std::size_t>(n));
    std::vector<VertexIndex> centers;
    if (size <= cap) {
      for (VertexIndex v = 0; v < size; ++v) centers.push_back(v);
    } else {
      for (std::uint64_t i = 0; i < cap; ++i) centers.push_back(rng() % size);
    }
    std::set<std::string> here;
    std::size_t fresh = 0;
    for (auto v : centers) {
      HorizontalSet V{n, c.horizontal_ball({v}, n, cfg.radius)};
      auto h = shadow_type(c, V, D, hs).hash_hex();
      here.insert(h);
      if (seen.insert(h).second) ++fresh;
    }
    last_new = fresh;
    levels.push_back({{"level", n}, {"count", here.size()}, {"new", fresh}, {"cumulative", seen.size()},
                      {"sampled", size > cap}});
  }
  auto rep = header("shadow-types", s, cfg, {{"levels", {lv.first, lv.last}}, {"D", D}, {"max_centers", cap}});
  rep["shadow_types"] = {{"r", cfg.radius}, {"D", D}, {"total", seen.size()}, {"levels", levels}};
  emit(cfg, rep, "shadow types " + std::to_string(seen.size()) + ", new at last level " + std::to_string(last_new) + "\n");
  return kExitOk;
}

int cmd_dynatlas(const RunConfig& cfg) {
  Session s(cfg);
  Range lv = cfg.level_range({6, 8});
  Range ks = cfg.k_range({0, 5});
  const int hs = s.calibration(cfg).hsigma;
  auto stats = bounded_degree_stats(s.cx(), cfg.radius, lv.first, lv.last, std::max(ks.first, 1), ks.last,
                                    static_cast<std::uint64_t>(cfg.max_centers), cfg.seed);
  auto atlas = build_dynatlas(s.cx(), cfg.radius, hs, lv.first, lv.last, ks.first, ks.last, cfg.depth.value_or(0),
                              static_cast<std::uint64_t>(cfg.max_centers), cfg.seed);
  auto rep = header("dynatlas", s, cfg,
                    {{"levels", {lv.first, lv.last}}, {"k", {ks.first, ks.last}}, {"max_centers", cfg.max_centers}});
  rep["bounded_degree"] = report::to_json(stats);
  rep["dynatlas"] = report::to_json(atlas);
  bool holds = true;
  for (const auto& cell : stats.cells) holds = holds && cell.bound_holds;
  emit(cfg, rep, "dynatlas forms " + std::to_string(atlas.forms.size()) + ", p " + std::to_string(atlas.p) +
                     (atlas.stabilized ? " (stabilized)\n" : " (not stabilized)\n"));
  return holds ? kExitOk : kExitProperty;
}

int cmd_orbits(const RunConfig& cfg) {
  Session s(cfg);
  Group& g = *s.group;
  const int d = g.alphabet();
  const int N = static_cast<int>(g.nucleus().size());
  const int max_w = cfg.depth.value_or(4);
  const int count = cfg.samples > 0 ? cfg.samples : 60;
  const int m = g.magic_level((N + 1) * cfg.L);
  std::mt19937_64 rng(cfg.seed);
  ordered_json rows = ordered_json::array();
  int asserted = 0, violations = 0;
  std::size_t largest = 0;
  for (int i = 0; i < count; ++i) {
    Word v(static_cast<std::size_t>(m) + rng() % 3), w(1 + rng() % static_cast<std::uint64_t>(max_w));
    for (auto& x : v) x = static_cast<Letter>(rng() % static_cast<std::uint64_t>(d));
    for (auto& x : w) x = static_cast<Letter>(rng() % static_cast<std::uint64_t>(d));
    auto r = stabilizer_orbit(g, v, cfg.L, w);
    asserted += r.hypothesis ? 1 : 0;
    violations += r.pass ? 0 : 1;
    largest = std::max(largest, r.orbit_size);
    rows.push_back({{"v", format_word(v)}, {"w", format_word(w)}, {"orbit_size", r.orbit_size}, {"q", r.q},
                    {"bound", r.bound}, {"hypothesis", r.hypothesis}, {"pass", r.pass}});
  }
  auto rep = header("orbits", s, cfg, {{"L", cfg.L}, {"max_w", max_w}, {"samples", count}});
  rep["orbits"] = {{"L", cfg.L}, {"nucleus_size", N}, {"magic_required", m}, {"samples", count},
                   {"under_hypothesis", asserted}, {"violations", violations}, {"largest_orbit", largest},
                   {"triples", rows}};
  emit(cfg, rep, std::to_string(asserted) + " triples, " + std::to_string(violations) + " violations\n");
  return violations == 0 ? kExitOk : kExitProperty;
}

int cmd_boundary_degree(const RunConfig& cfg) {
  Session s(cfg);
  Range lv = cfg.level_range({2, 12});
  s.calibration(cfg);
  const int d = s.group->alphabet();
  ordered_json reports = ordered_json::array();
  bool ok = true;
  std::ostringstream sum;
  for (const auto& ray : rays_from(cfg, d)) {
    auto r = boundary_preimage_classes(s.cx(), ray, lv.first, lv.last);
    ok = ok && r.degree_sum == d && r.relation_consistent;
    sum << ray.str() << " degree sum " << r.degree_sum << "\n";
    reports.push_back(report::to_json(r));
  }
  auto rep = header("boundary degree", s, cfg, {{"levels", {lv.first, lv.last}}});
  rep["alphabet"] = d;
  rep["rays"] = reports;
  rep["all_sum_to_alphabet"] = ok;
  emit(cfg, rep, sum.str());
  return ok ? kExitOk : kExitProperty;
}

int cmd_boundary_metric(const RunConfig& cfg) {
  Session s(cfg);
  Range lv = cfg.level_range({3, 10});
  const auto& cal = s.calibration(cfg);
  auto params = visual_params(cal, cfg.depth.value_or(24));
  const std::size_t samples = cfg.samples > 0 ? static_cast<std::size_t>(cfg.samples) : 12;
  ordered_json reports = ordered_json::array();
  bool ok = true;
  std::ostringstream sum;
  auto rays = cfg.rays.empty() ? std::vector<Ray>{Ray::parse(";0", s.group->alphabet())} : rays_from(cfg, s.group->alphabet());
  for (const auto& ray : rays) {
    auto r = diameter_report(s.cx(), ray, lv.first, lv.last, params, samples, 2, cfg.seed);
    bool inclusion = true;
    for (const auto& row : r.rows) inclusion = inclusion && row.inclusion;
    ok = ok && inclusion && r.band_ratio() <= 1e3;
    sum << ray.str() << " band ratio " << r.band_ratio() << (inclusion ? ", inclusion holds\n" : ", inclusion fails\n");
    reports.push_back(report::to_json(r));
  }
  auto rep = header("boundary metric", s, cfg, {{"levels", {lv.first, lv.last}}, {"depth", params.depth}, {"samples", samples}});
  rep["rays"] = reports;
  rep["pass"] = ok;
  emit(cfg, rep, sum.str());
  return ok ? kExitOk : kExitProperty;
}

int cmd_verify(const RunConfig& cfg) {
  Session s(cfg);
  VerifyOptions opt;
  opt.seed = cfg.seed;
  auto rep_data = run_verify(s.cx(), s.calibration(cfg), opt);
  auto rep = header("verify", s, cfg,
                    {{"distance_level", opt.distance_level}, {"product_level", opt.product_level},
                     {"triangle_samples", opt.triangle_samples}, {"ultrametric_triples", opt.ultrametric_triples}});
  rep["verify"] = report::to_json(rep_data);
  std::ostringstream sum;
  for (const auto& c : rep_data.checks) sum << (c.pass ? "PASS " : "FAIL ") << c.module << "/" << c.name << "\n";
  emit(cfg, rep, sum.str());
  return rep_data.all_pass() ? kExitOk : kExitProperty;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::StateCapExceeded:
    case ErrorKind::NotContractingWithinBound:
    case ErrorKind::LevelTooLarge:
    case ErrorKind::UndecidedEquivalence:
    case ErrorKind::NotStabilized:
      return kExitCap;
    case ErrorKind::NotAnIterate:
    case ErrorKind::ZeroInradius:
      return kExitProperty;
    default:
      return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selfsimilarity complexes of contracting selfsimilar groups", "sscx"};
  app.set_version_flag("--version", SSCX_VERSION);
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-g,--group", cfg.group_file, "group definition JSON file");
    sub->add_option("--builtin", cfg.builtin, "builtin group: odometer, grigorchuk, basilica");
    sub->add_option("--hsigma", cfg.hsigma, "override the estimated HΣ")->check(CLI::PositiveNumber);
    sub->add_option("--epsilon", cfg.epsilon, "visual parameter ε")->check(CLI::PositiveNumber);
    sub->add_option("--levels", cfg.levels, "level range A..B");
    sub->add_option("--k", cfg.k, "iterate range A..B");
    sub->add_option("--depth", cfg.depth, "depth budget")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--json", cfg.json_path, "write the JSON report here instead of stdout");
    sub->add_option("--dot", cfg.dot_path, "write a DOT graph here");
    sub->add_option("--state-cap", cfg.state_cap, "element table cap");
    sub->add_option("--max-rounds", cfg.max_rounds, "nucleus iteration bound");
  };

  std::vector<std::pair<CLI::App*, std::function<int(const RunConfig&)>>> commands;
  auto add = [&](CLI::App* parent, const char* name, const char* help, std::function<int(const RunConfig&)> fn) {
    auto* sub = parent->add_subcommand(name, help);
    common(sub);
    commands.emplace_back(sub, std::move(fn));
    return sub;
  };

  add(&app, "nucleus", "nucleus and magic levels (--levels ranges L)", cmd_nucleus);
  add(&app, "graph", "level graph statistics and DOT export", cmd_graph);
  add(&app, "cone-types", "cumulative cone-type counts", cmd_cone_types)
      ->add_option("--samples", cfg.samples, "max vertices per level before sampling");
  auto* shadow = add(&app, "shadow-types", "shadow types of horizontal balls (--depth is D)", cmd_shadow_types);
  shadow->add_option("--radius", cfg.radius, "ball radius")->check(CLI::NonNegativeNumber);
  shadow->add_option("--samples", cfg.samples, "max centers per level");
  auto* dyn = add(&app, "dynatlas", "bounded degree and model maps of iterates (--depth is D)", cmd_dynatlas);
  dyn->add_option("--radius", cfg.radius, "ball radius")->check(CLI::NonNegativeNumber);
  dyn->add_option("--centers", cfg.max_centers, "max centers per level")->check(CLI::PositiveNumber);
  auto* orb = add(&app, "orbits", "stabilizer-orbit sweep (--depth bounds |w|)", cmd_orbits);
  orb->add_option("--L", cfg.L, "ball radius in the group")->check(CLI::PositiveNumber);
  orb->add_option("--samples", cfg.samples, "number of sampled triples")->check(CLI::PositiveNumber);

  auto* boundary = app.add_subcommand("boundary", "boundary dynamics");
  boundary->require_subcommand(1);
  auto* deg = add(boundary, "degree", "preimage classes and local degrees", cmd_boundary_degree);
  deg->add_option("--ray", cfg.rays, "eventually periodic ray 'pre;per' (repeatable)");
  auto* met = add(boundary, "metric", "shadow diameter table (--depth is the visual depth)", cmd_boundary_metric);
  met->add_option("--ray", cfg.rays, "eventually periodic ray 'pre;per' (repeatable)");
  met->add_option("--samples", cfg.samples, "boundary samples per t")->check(CLI::PositiveNumber);

  add(&app, "verify", "full invariant suite", cmd_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (auto& [sub, fn] : commands)
      if (sub->parsed()) return fn(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

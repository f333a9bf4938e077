#include "sscx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "sscx/dynamics.hpp"
#include "sscx/error.hpp"
#include "sscx/geometry.hpp"

namespace sscx {

namespace {

int exhaustive_levels(const Complex& complex) {
  int n = 0;
  while (level_size(complex.alphabet(), static_cast<std::size_t>(n + 1)) <= complex.options().matrix_budget) ++n;
  return n;
}

}  // namespace

Calibration calibrate(Complex& complex, std::optional<int> hsigma, std::optional<double> epsilon, std::uint64_t seed) {
  Calibration cal;
  const int top = exhaustive_levels(complex);
  if (hsigma) {
    cal.hsigma = *hsigma;
    cal.hsigma_min_rule = *hsigma;
    cal.hsigma_estimated = false;
    cal.hsigma_stabilized = true;
  } else {
    auto est = complex.estimate_HSigma(top, seed);
    cal.hsigma = est.value;
    cal.hsigma_min_rule = est.min_rule_value;
    cal.hsigma_stabilized = est.stabilized;
    cal.hsigma_levels = top;
  }
  cal.delta = complex.estimate_delta(2000, std::min(top, 8), seed).delta;
  cal.magic = complex.group().magic_level(cal.hsigma);
  if (epsilon) {
    if (*epsilon <= 0) throw Error(ErrorKind::InvalidInput, "epsilon must be positive");
    cal.epsilon = *epsilon;
    cal.epsilon_default = false;
  } else {
    cal.epsilon = VisualParams::default_epsilon(cal.magic);
  }
  return cal;
}

VisualParams visual_params(const Calibration& cal, int depth) {
  VisualParams p;
  p.epsilon = cal.epsilon;
  p.depth = depth;
  p.delta = cal.delta;
  p.magic = cal.magic;
  return p;
}

int TruncatedDistances::at(const Word& w) const {
  const std::uint64_t offset = (level_size(alphabet, w.size()) - 1) / static_cast<std::uint64_t>(alphabet - 1);
  return dist[offset + word_index(w, alphabet)];
}

TruncatedDistances truncated_distances(Complex& complex, int max_level, const std::function<bool(const Word&)>& source) {
  const int d = complex.alphabet();
  TruncatedDistances out;
  out.alphabet = d;
  out.max_level = max_level;
  std::vector<std::uint64_t> offset(static_cast<std::size_t>(max_level) + 2, 0);
  for (int l = 0; l <= max_level; ++l)
    offset[static_cast<std::size_t>(l) + 1] = offset[static_cast<std::size_t>(l)] + level_size(d, static_cast<std::size_t>(l));
  out.dist.assign(offset.back(), -1);
  std::deque<std::pair<int, VertexIndex>> queue;
  for (int l = 0; l <= max_level; ++l)
    for (VertexIndex v = 0; v < level_size(d, static_cast<std::size_t>(l)); ++v)
      if (source(word_from_index(v, static_cast<std::size_t>(l), d))) {
        out.dist[offset[static_cast<std::size_t>(l)] + v] = 0;
        queue.emplace_back(l, v);
      }
  while (!queue.empty()) {
    auto [l, v] = queue.front();
    queue.pop_front();
    const int here = out.dist[offset[static_cast<std::size_t>(l)] + v];
    auto visit = [&](int level, VertexIndex w) {
      auto& slot = out.dist[offset[static_cast<std::size_t>(level)] + w];
      if (slot < 0) {
        slot = here + 1;
        queue.emplace_back(level, w);
      }
    };
    for (int s = 0; s < complex.generator_count(); ++s) visit(l, complex.neighbor(v, l, s));
    if (l > 0) visit(l - 1, v % level_size(d, static_cast<std::size_t>(l - 1)));
    if (l < max_level)
      for (int x = 0; x < d; ++x) visit(l + 1, static_cast<VertexIndex>(x) * level_size(d, static_cast<std::size_t>(l)) + v);
  }
  return out;
}

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

struct Suite {
  Complex& complex;
  Group& group;
  const Calibration& cal;
  const VerifyOptions& opt;
  std::mt19937_64 rng;
  std::vector<CheckResult> out;
  int d;

  Suite(Complex& c, const Calibration& k, const VerifyOptions& o)
      : complex(c), group(c.group()), cal(k), opt(o), rng(o.seed), d(c.alphabet()) {}

  void record(std::string module, std::string name, bool pass, std::string detail) {
    out.push_back({std::move(module), std::move(name), pass, std::move(detail)});
  }

  template <class F>
  void guarded(const std::string& module, const std::string& name, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      record(module, name, false, std::string("error: ") + e.what());
    }
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

  Word random_word(int length) {
    Word w(static_cast<std::size_t>(length));
    for (auto& x : w) x = static_cast<Letter>(below(static_cast<std::uint64_t>(d)));
    return w;
  }

  SymbolWord random_symbols(int max_length) {
    const int gens = static_cast<int>(group.definition().generators.size());
    SymbolWord w(below(static_cast<std::uint64_t>(max_length) + 1));
    for (auto& s : w) s = {static_cast<int>(below(static_cast<std::uint64_t>(gens))), below(2) == 1};
    return w;
  }

  ElementId random_element(int max_length) { return group.id_of(random_symbols(max_length)); }

  // --- automaton ------------------------------------------------------------
  void automaton_checks() {
    guarded("automaton", "right_action", [&] {
      int bad = 0;
      for (int i = 0; i < 300; ++i) {
        auto g = random_element(6), h = random_element(6);
        auto w = random_word(static_cast<int>(below(9)));
        if (group.act(group.multiply(g, h), w) != group.act(h, group.act(g, w))) ++bad;
      }
      record("automaton", "right_action", bad == 0, std::to_string(bad) + " violations in 300 samples");
    });
    guarded("automaton", "restriction_cocycle", [&] {
      int bad = 0;
      for (int i = 0; i < 300; ++i) {
        auto g = random_element(6), h = random_element(6);
        auto v = random_word(static_cast<int>(below(6)));
        auto lhs = group.restrict(group.multiply(g, h), v);
        auto rhs = group.multiply(group.restrict(g, v), group.restrict(h, group.act(g, v)));
        if (lhs != rhs) ++bad;
      }
      record("automaton", "restriction_cocycle", bad == 0, std::to_string(bad) + " violations in 300 samples");
    });
    guarded("automaton", "restriction_composition", [&] {
      int bad = 0;
      for (int i = 0; i < 300; ++i) {
        auto g = random_element(6);
        auto u = random_word(static_cast<int>(below(4))), v = random_word(static_cast<int>(below(4)));
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        if (group.restrict(g, uv) != group.restrict(group.restrict(g, u), v)) ++bad;
        // the action agrees with the formal word layer
        auto sw = random_symbols(5);
        auto w = random_word(6);
        if (group.act(sw, w) != group.act(group.id_of(sw), w)) ++bad;
      }
      record("automaton", "restriction_composition", bad == 0, std::to_string(bad) + " violations in 300 samples");
    });
    guarded("automaton", "nucleus_invariants", [&] {
      const auto& nuc = group.nucleus();
      bool ok = nuc.contains(Group::identity());
      for (auto n : nuc.elements) {
        ok = ok && nuc.contains(group.inverse(n));
        for (int x = 0; x < d; ++x) ok = ok && nuc.contains(group.child(n, static_cast<Letter>(x)));
      }
      std::ostringstream detail;
      detail << "size " << nuc.size() << ":";
      for (auto n : nuc.elements) detail << " " << group.describe(n);
      record("automaton", "nucleus_invariants", ok, detail.str());
    });
    guarded("automaton", "norm_non_increase", [&] {
      const int L = group.nucleus().size() > 5 ? 4 : 6;
      int bad = 0;
      auto ball = group.group_ball(L);
      for (const auto& e : ball)
        for (int x = 0; x < d; ++x) {
          auto n = group.norm(group.child(e.id, static_cast<Letter>(x)), e.norm);
          if (!n || *n > e.norm) ++bad;
        }
      record("automaton", "norm_non_increase", bad == 0,
             std::to_string(ball.size()) + " elements of norm <= " + std::to_string(L) + ", " + std::to_string(bad) + " violations");
    });
    guarded("automaton", "equality_equivalence", [&] {
      int bad = 0;
      const int gens = static_cast<int>(group.definition().generators.size());
      for (int i = 0; i < 200; ++i) {
        auto a = random_symbols(5);
        // b is a with a cancelling pair inserted; c appends a relation-free detour
        auto b = a;
        GeneratorSymbol s{static_cast<int>(below(static_cast<std::uint64_t>(gens))), false};
        auto at = b.begin() + static_cast<std::ptrdiff_t>(below(b.size() + 1));
        at = b.insert(at, GeneratorSymbol{s.index, true});
        b.insert(at, s);
        auto c = random_symbols(5);
        if (!group.equal(a, a)) ++bad;
        if (group.equal(a, b) != group.equal(b, a)) ++bad;
        if (!group.equal(a, b)) ++bad;
        if (group.equal(a, b) && group.equal(b, c) && !group.equal(a, c)) ++bad;
      }
      record("automaton", "equality_equivalence", bad == 0, std::to_string(bad) + " violations in 200 samples");
    });
  }

  // --- complex --------------------------------------------------------------
  void complex_checks() {
    const int top = std::min(10, exhaustive_levels(complex));
    guarded("complex", "augmented_tree", [&] {
      int bad = 0;
      std::uint64_t edges = 0;
      for (int n = 1; n <= top; ++n) {
        auto g = complex.level_graph(n);
        auto lower = complex.level_graph(n - 1);
        const std::uint64_t mod = lower->size();
        for (std::uint64_t v = 0; v < g->size(); ++v)
          for (int s = 0; s < g->generator_count; ++s) {
            ++edges;
            const std::uint64_t a = v % mod, b = g->step(v, s) % mod;
            if (a == b) continue;
            bool adjacent = false;
            for (int t = 0; t < lower->generator_count && !adjacent; ++t) adjacent = lower->step(a, t) == b;
            if (!adjacent) ++bad;
          }
      }
      record("complex", "augmented_tree", bad == 0,
             std::to_string(edges) + " edges at levels 1.." + std::to_string(top) + ", " + std::to_string(bad) + " violations");
    });
    guarded("complex", "distance_oracle", [&] {
      const int L = opt.distance_level;
      std::vector<Word> all;
      for (int l = 0; l <= L; ++l)
        for (VertexIndex v = 0; v < level_size(d, static_cast<std::size_t>(l)); ++v)
          all.push_back(word_from_index(v, static_cast<std::size_t>(l), d));
      std::uint64_t mismatches = 0, pairs = 0;
      for (const auto& u : all) {
        auto bfs = truncated_distances(complex, L, [&](const Word& w) { return w == u; });
        for (const auto& v : all) {
          ++pairs;
          if (bfs.at(v) != complex.graph_distance(u, v)) ++mismatches;
        }
      }
      record("complex", "distance_oracle", mismatches == 0,
             std::to_string(pairs) + " pairs up to level " + std::to_string(L) + ", " + std::to_string(mismatches) + " mismatches");
    });
    guarded("complex", "metric_axioms", [&] {
      const int L = std::min(8, top);
      int bad = 0;
      for (int i = 0; i < opt.triangle_samples; ++i) {
        Word a = random_word(static_cast<int>(below(static_cast<std::uint64_t>(L) + 1)));
        Word b = random_word(static_cast<int>(below(static_cast<std::uint64_t>(L) + 1)));
        Word c = random_word(static_cast<int>(below(static_cast<std::uint64_t>(L) + 1)));
        const int ab = complex.graph_distance(a, b), ba = complex.graph_distance(b, a);
        const int bc = complex.graph_distance(b, c), ac = complex.graph_distance(a, c);
        if (ab != ba || ac > ab + bc || (ab == 0) != (a == b)) ++bad;
      }
      record("complex", "metric_axioms", bad == 0,
             std::to_string(opt.triangle_samples) + " triples, " + std::to_string(bad) + " violations");
    });
    guarded("complex", "level_transitivity", [&] {
      bool ok = true;
      for (int n = 0; n <= top; ++n) ok = ok && complex.level_graph(n)->connected();
      record("complex", "level_transitivity", ok, "levels 0.." + std::to_string(top));
    });
    guarded("complex", "shift_contracts_distance", [&] {
      int bad = 0;
      for (int i = 0; i < 2000; ++i) {
        Word u = random_word(1 + static_cast<int>(below(8))), v = random_word(1 + static_cast<int>(below(8)));
        if (complex.graph_distance(shift(u), shift(v)) > complex.graph_distance(u, v)) ++bad;
      }
      record("complex", "shift_contracts_distance", bad == 0, std::to_string(bad) + " violations in 2000 samples");
    });
  }

  // --- geometry -------------------------------------------------------------
  HorizontalSet random_ball(int level, int r) {
    VertexIndex v = below(level_size(d, static_cast<std::size_t>(level)));
    return HorizontalSet{level, complex.horizontal_ball({v}, level, r)};
  }

  void geometry_checks() {
    const int hs = cal.hsigma;
    guarded("geometry", "shadow_pushdown", [&] {
      int bad = 0;
      for (int i = 0; i < 10; ++i) {
        auto V = random_ball(3 + static_cast<int>(below(3)), 1);
        for (int j = 1; j <= 3; ++j)
          for (const auto& u : shadow_level(V, j, d))
            for (int s = 0; s < complex.generator_count(); ++s) {
              Word w = complex.neighbor(u, s);
              if (!shadow_contains(V, w, d)) continue;
              Word a = push_down(u, 1), b = push_down(w, 1);
              if (!shadow_contains(V, a, d) || !shadow_contains(V, b, d) || complex.horizontal_distance(a, b, 1) > 1) ++bad;
            }
      }
      record("geometry", "shadow_pushdown", bad == 0, std::to_string(bad) + " violations over 10 shadows");
    });
    guarded("geometry", "quasiconvexity", [&] {
      int bad = 0, worst = 0;
      for (int i = 0; i < 6; ++i) {
        auto V = random_ball(4, 1);
        const int diam = horizontal_diameter(complex, V.level, V.vertices);
        const int Q = std::max((diam + 1) / 2, (hs + 1) / 2) + 1;
        const int top = V.level + 3;
        auto dist = truncated_distances(complex, top, [&](const Word& w) { return shadow_contains(V, w, d); });
        for (int p = 0; p < 20; ++p) {
          auto pick = [&]() {
            auto lvl = shadow_level(V, static_cast<int>(below(4)), d);
            return lvl[below(lvl.size())];
          };
          Word u1 = pick(), u2 = pick();
          auto info = complex.geodesic(u1, u2);
          for (const auto& w : geodesic_vertices(u1, u2, info.max_level)) {
            const int x = dist.at(w);
            worst = std::max(worst, x);
            if (x < 0 || x > Q) ++bad;
          }
        }
      }
      record("geometry", "quasiconvexity", bad == 0,
             "max distance to the shadow " + std::to_string(worst) + ", " + std::to_string(bad) + " violations");
    });
    guarded("geometry", "shadow_separation", [&] {
      int bad = 0, tested = 0;
      for (int i = 0; i < 40 && tested < 8; ++i) {
        const int level = 4;
        Word a = random_word(level), b = random_word(level);
        if (complex.horizontal_distance(a, b, 2) < 2) continue;
        ++tested;
        HorizontalSet V1 = HorizontalSet::from_words({a}, d), V2 = HorizontalSet::from_words({b}, d);
        auto dist = truncated_distances(complex, level + 3, [&](const Word& w) { return shadow_contains(V1, w, d); });
        for (int j = 0; j <= 3; ++j)
          for (const auto& w : shadow_level(V2, j, d))
            if (dist.at(w) < 2) ++bad;
      }
      record("geometry", "shadow_separation", bad == 0,
             std::to_string(tested) + " separated pairs, " + std::to_string(bad) + " violations");
    });
    guarded("geometry", "component_separation", [&] {
      int bad = 0;
      const int L = 5;
      for (int i = 0; i < 5; ++i) {
        std::set<Word> set;
        for (int j = 0; j < 12; ++j) set.insert(random_word(static_cast<int>(below(L + 1))));
        // components of the induced subcomplex
        std::map<Word, int> comp;
        int count = 0;
        for (const auto& w : set) {
          if (comp.count(w)) continue;
          std::vector<Word> stack{w};
          comp[w] = count;
          while (!stack.empty()) {
            Word x = stack.back();
            stack.pop_back();
            std::vector<Word> nb = complex.horizontal_neighbors(x);
            if (!x.empty()) nb.push_back(push_down(x, 1));
            for (int y = 0; y < d; ++y) {
              Word up{static_cast<Letter>(y)};
              up.insert(up.end(), x.begin(), x.end());
              nb.push_back(up);
            }
            for (auto& z : nb)
              if (set.count(z) && !comp.count(z)) {
                comp[z] = count;
                stack.push_back(z);
              }
          }
          ++count;
        }
        for (const auto& a : set)
          for (const auto& b : set)
            if (comp[a] != comp[b] && complex.graph_distance(a, b) < 2) ++bad;
      }
      record("geometry", "component_separation", bad == 0, std::to_string(bad) + " violations over 5 random sets");
    });
    guarded("geometry", "unit_speed_penetration", [&] {
      int bad = 0, tested = 0;
      for (int i = 0; i < 6; ++i) {
        auto V = random_ball(4, 1);
        const int top = V.level + 5;
        auto dist = truncated_distances(complex, top, [&](const Word& w) { return !shadow_contains(V, w, d); });
        for (int j = 1; j <= 2; ++j)
          for (const auto& u : shadow_level(V, j, d)) {
            if (!umbra_contains(complex, V, u)) continue;
            for (int k = 0; k + j + V.level <= top; ++k) {
              Word v = random_word(k);
              v.insert(v.end(), u.begin(), u.end());
              ++tested;
              const int bound = static_cast<int>(v.size()) - (static_cast<int>(u.size()) + cal.magic);
              if (dist.at(v) < bound) ++bad;
            }
          }
      }
      record("geometry", "unit_speed_penetration", bad == 0,
             std::to_string(tested) + " umbra cone vertices, " + std::to_string(bad) + " violations");
    });
    guarded("geometry", "canonical_form_soundness", [&] {
      int bad = 0;
      for (int i = 0; i < 10; ++i) {
        auto V = random_ball(4 + static_cast<int>(below(2)), 1);
        LabelledGraph g = hull_graph(complex, hull(complex, V, 2, std::min(hs, 3)));
        std::vector<std::uint32_t> perm(g.size());
        for (std::uint32_t j = 0; j < perm.size(); ++j) perm[j] = j;
        std::shuffle(perm.begin(), perm.end(), rng);
        auto f = canonical_form(g);
        if (!(canonical_form(permute(g, perm)) == f)) ++bad;
        if (!g.edges.empty()) {
          LabelledGraph h = g;
          h.edges[below(h.edges.size())].label = 1000;
          if (canonical_form(h) == f) ++bad;
          LabelledGraph m = g;
          m.colors[below(m.size())] += 7;
          if (canonical_form(m) == f) ++bad;
        }
      }
      record("geometry", "canonical_form_soundness", bad == 0, std::to_string(bad) + " violations over 10 hull graphs");
    });
  }

  std::vector<Word> geodesic_vertices(const Word& u, const Word& v, int level) {
    std::vector<Word> path;
    for (int l = static_cast<int>(u.size()); l >= level; --l) path.push_back(push_down(u, u.size() - static_cast<std::size_t>(l)));
    Word a = path.back();
    Word b = push_down(v, v.size() - static_cast<std::size_t>(level));
    // one shortest horizontal path from a to b
    std::map<Word, Word> parent{{a, a}};
    std::deque<Word> queue{a};
    while (!queue.empty() && !parent.count(b)) {
      Word x = queue.front();
      queue.pop_front();
      for (auto& y : complex.horizontal_neighbors(x))
        if (!parent.count(y)) {
          parent[y] = x;
          queue.push_back(y);
        }
    }
    std::vector<Word> mid;
    for (Word x = b; x != a; x = parent[x]) mid.push_back(x);
    path.insert(path.end(), mid.rbegin(), mid.rend());
    for (int l = level + 1; l <= static_cast<int>(v.size()); ++l) path.push_back(push_down(v, v.size() - static_cast<std::size_t>(l)));
    return path;
  }

  // --- dynamics -------------------------------------------------------------
  void dynamics_checks() {
    const int hs = std::min(cal.hsigma, 3);
    guarded("dynamics", "balls_map_to_balls", [&] {
      int bad = 0;
      for (int n = 2; n <= 4; ++n)
        for (VertexIndex v = 0; v < level_size(d, static_cast<std::size_t>(n)); ++v)
          for (int k = 1; k <= 2; ++k)
            for (int r = 1; r <= 2; ++r) {
              auto target = complex.horizontal_ball({v}, n, r);
              for (const auto& vt : vertex_preimages(word_from_index(v, static_cast<std::size_t>(n), d), k, d)) {
                std::set<VertexIndex> image;
                for (auto u : complex.horizontal_ball({word_index(vt, d)}, n + k, r)) image.insert(shift(u, k, d));
                if (std::vector<VertexIndex>(image.begin(), image.end()) != target) ++bad;
              }
            }
      record("dynamics", "balls_map_to_balls", bad == 0, "levels 2..4, k<=2, r<=2, " + std::to_string(bad) + " violations");
    });
    guarded("dynamics", "pullback_components", [&] {
      int bad = 0;
      for (int i = 0; i < 10; ++i) {
        auto V = random_ball(3 + static_cast<int>(below(3)), 1);
        const int k = 1 + static_cast<int>(below(3));
        auto comps = pullback_components(complex, V, k);
        std::size_t marked = 0;
        for (const auto& c : comps) marked += c.marked.size();
        if (marked != V.size() * level_size(d, static_cast<std::size_t>(k))) ++bad;
        for (std::size_t a = 0; a < comps.size(); ++a)
          for (std::size_t b = a + 1; b < comps.size(); ++b)
            for (auto x : comps[a].vertices)
              for (auto y : comps[b].vertices)
                if (complex.horizontal_distance(x, y, V.level + k, 1) < 2) ++bad;
      }
      record("dynamics", "pullback_components", bad == 0, std::to_string(bad) + " violations over 10 pullbacks");
    });
    guarded("dynamics", "pullback_shadows", [&] {
      int bad = 0;
      for (int i = 0; i < 6; ++i) {
        const int n = 3, k = 1 + static_cast<int>(below(2)), r = 1;
        VertexIndex v = below(level_size(d, n));
        HorizontalSet S{n, complex.horizontal_ball({v}, n, r)};
        std::vector<HorizontalSet> lifts;
        for (const auto& vt : vertex_preimages(word_from_index(v, n, d), k, d))
          lifts.push_back(HorizontalSet{n + k, complex.horizontal_ball({word_index(vt, d)}, n + k, r)});
        for (int j = 0; j <= 3; ++j) {
          const int level = n + k + j;
          for (VertexIndex u = 0; u < level_size(d, static_cast<std::size_t>(level)); ++u) {
            Word w = word_from_index(u, static_cast<std::size_t>(level), d);
            const bool lhs = shadow_contains(S, shift(w, k), d);
            bool rhs = false;
            for (const auto& L : lifts) rhs = rhs || shadow_contains(L, w, d);
            if (lhs != rhs) ++bad;
          }
        }
      }
      record("dynamics", "pullback_shadows", bad == 0, std::to_string(bad) + " violations");
    });
    guarded("dynamics", "hull_and_umbra_naturality", [&] {
      int bad = 0, tested = 0;
      for (int n = 2; n <= 3; ++n)
        for (VertexIndex v = 0; v < level_size(d, static_cast<std::size_t>(n)); ++v) {
          HorizontalSet V{n, complex.horizontal_ball({v}, n, 1)};
          for (int k = 1; k <= 2; ++k)
            for (const auto& pc : pullback_components(complex, V, k)) {
              HorizontalSet Vt{n + k, pc.vertices};
              ++tested;
              if (!hull_naturality(complex, Vt, V, k, 2, hs)) ++bad;
              if (!umbra_naturality(complex, Vt, V, k, 2)) ++bad;
            }
        }
      record("dynamics", "hull_and_umbra_naturality", bad == 0,
             std::to_string(tested) + " components, " + std::to_string(bad) + " violations");
    });
    guarded("dynamics", "bounded_degree", [&] {
      auto st = bounded_degree_stats(complex, 1, 4, 7, 1, 3, 32, rng());
      bool ok = std::all_of(st.cells.begin(), st.cells.end(), [](const DegreeCell& c) { return c.bound_holds; });
      record("dynamics", "bounded_degree", ok,
             "C=" + std::to_string(st.C_observed) + " D=" + std::to_string(st.D_observed) + " over levels 4..7, k 1..3");
    });
    guarded("dynamics", "stabilizer_orbits", [&] {
      int bad = 0, asserted = 0;
      const int N = static_cast<int>(group.nucleus().size());
      const int L = 1;
      const int m = group.magic_level((N + 1) * L);
      for (int i = 0; i < 20; ++i) {
        Word v = random_word(m + static_cast<int>(below(3)));
        Word w = random_word(1 + static_cast<int>(below(4)));
        auto res = stabilizer_orbit(group, v, L, w);
        if (res.hypothesis) ++asserted;
        if (!res.pass) ++bad;
      }
      record("dynamics", "stabilizer_orbits", bad == 0 && asserted > 0,
             std::to_string(asserted) + " triples under the hypothesis, " + std::to_string(bad) + " violations");
    });
    guarded("dynamics", "dynatlas_monotone", [&] {
      auto rep = build_dynatlas(complex, 1, hs, 4, 4, 0, 2, 0, 4, rng());
      bool ok = std::is_sorted(rep.cumulative_per_k.begin(), rep.cumulative_per_k.end());
      std::size_t total = 0;
      for (auto x : rep.new_per_k) total += x;
      ok = ok && total == rep.forms.size();
      record("dynamics", "dynatlas_monotone", ok, std::to_string(rep.forms.size()) + " forms, p=" + std::to_string(rep.p));
    });
  }

  // --- boundary -------------------------------------------------------------
  Ray random_ray() {
    Ray r;
    r.preperiod = random_word(static_cast<int>(below(4)));
    r.period = random_word(1 + static_cast<int>(below(3)));
    return r;
  }

  void boundary_checks() {
    const auto params = visual_params(cal);
    guarded("boundary", "products_comparable", [&] {
      const int L = opt.product_level;
      std::vector<Word> all;
      for (int l = 0; l <= L; ++l)
        for (VertexIndex v = 0; v < level_size(d, static_cast<std::size_t>(l)); ++v)
          all.push_back(word_from_index(v, static_cast<std::size_t>(l), d));
      int bad = 0;
      for (const auto& u : all)
        for (const auto& v : all) {
          auto info = complex.geodesic(u, v);
          const double gromov = 0.5 * (static_cast<double>(u.size() + v.size()) - info.distance);
          const double lp = info.max_level;
          if (!(lp - cal.hsigma / 2.0 <= gromov && gromov <= lp)) ++bad;
        }
      record("boundary", "products_comparable", bad == 0,
             "all pairs up to level " + std::to_string(L) + ", " + std::to_string(bad) + " violations");
    });
    std::vector<Ray> rays;
    for (auto lit : {";0", ";1", "1;0", ";01", "0;1", ";011"}) rays.push_back(Ray::parse(lit, d));
    guarded("boundary", "degree_sum", [&] {
      int bad = 0;
      std::ostringstream detail;
      for (const auto& r : rays) {
        auto rep = boundary_preimage_classes(complex, r, 2, 12);
        detail << r.str() << ":" << rep.degree_sum << " ";
        if (rep.degree_sum != d || !rep.relation_consistent) ++bad;
        for (const auto& c : rep.classes) {
          const auto& e = c.degree.exact;
          if (!std::is_sorted(e.rbegin(), e.rend()) || e.back() < 1) ++bad;
        }
      }
      record("boundary", "degree_sum", bad == 0, detail.str());
    });
    guarded("boundary", "divergence_level_agreement", [&] {
      int bad = 0, tested = 0;
      for (int i = 0; i < 30; ++i) {
        Ray a = random_ray(), b = random_ray();
        auto div = divergence_product(complex, a, b);
        if (!div) continue;
        for (int T = *div + 1; T <= *div + cal.magic + 2; ++T) {
          const int lp = complex.level_product(a.vertex(static_cast<std::size_t>(T)), b.vertex(static_cast<std::size_t>(T)));
          ++tested;
          if (lp < *div || lp > *div + cal.magic) ++bad;
        }
      }
      record("boundary", "divergence_level_agreement", bad == 0,
             std::to_string(tested) + " (pair, T) cases, " + std::to_string(bad) + " violations");
    });
    guarded("boundary", "equivalence_relation", [&] {
      int bad = 0;
      for (int i = 0; i < 20; ++i) {
        Ray r = random_ray();
        std::vector<Ray> cand;
        for (int y = 0; y < d; ++y) cand.push_back(r.prepend(static_cast<Letter>(y)));
        for (const auto& a : cand)
          for (const auto& b : cand) {
            const bool ab = rays_equivalent(complex, a, b).kind == Verdict::Equivalent;
            const bool ba = rays_equivalent(complex, b, a).kind == Verdict::Equivalent;
            if (ab != ba) ++bad;
            for (const auto& c : cand)
              if (ab && rays_equivalent(complex, b, c).kind == Verdict::Equivalent &&
                  rays_equivalent(complex, a, c).kind != Verdict::Equivalent)
                ++bad;
          }
        if (rays_equivalent(complex, r, r).kind != Verdict::Equivalent) ++bad;
      }
      record("boundary", "equivalence_relation", bad == 0, std::to_string(bad) + " violations over 20 candidate sets");
    });
    guarded("boundary", "quasi_ultrametric", [&] {
      std::vector<Ray> pool = shadow_boundary_sample(complex, rays[0], 2, 4, 30, rng());
      for (int i = 0; i < 10; ++i) pool.push_back(random_ray());
      const std::size_t n = pool.size();
      std::vector<double> dist(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = visual_distance(complex, pool[i], pool[j], params);
      int bad = 0;
      double worst = 0.0;
      for (int t = 0; t < opt.ultrametric_triples; ++t) {
        auto a = below(n), b = below(n), c = below(n);
        const double m = std::max(dist[a * n + b], dist[b * n + c]);
        if (m > 0) worst = std::max(worst, dist[a * n + c] / m);
        if (dist[a * n + c] > params.K() * m + 1e-12) ++bad;
      }
      std::ostringstream detail;
      detail << opt.ultrametric_triples << " triples, worst ratio " << worst << ", K " << params.K() << ", "
             << bad << " violations";
      record("boundary", "quasi_ultrametric", bad == 0, detail.str());
    });
    guarded("boundary", "expansion_and_inclusion", [&] {
      auto rep = diameter_report(complex, rays[0], 1, 6, params, 8, 1, rng());
      bool inclusion = std::all_of(rep.rows.begin(), rep.rows.end(), [](const DiameterRow& r) { return r.inclusion; });
      bool shrinking = rep.rows.back().shadow_diameter < rep.rows.front().shadow_diameter;
      std::ostringstream detail;
      detail << "band ratio " << rep.band_ratio() << ", inclusion " << (inclusion ? "holds" : "fails");
      record("boundary", "expansion_and_inclusion", inclusion && shrinking, detail.str());
    });
    guarded("boundary", "roundness", [&] {
      const Ray& r = rays[0];
      const int t = 3;
      auto inside = shadow_boundary_sample(complex, r, t, 2, 10, rng());
      std::vector<double> in, outside;
      for (const auto& x : inside) in.push_back(visual_distance(complex, r, x, params));
      auto V = HorizontalSet::from_words(complex.horizontal_ball({r.vertex(t)}, 1), d);
      for (int i = 0; i < 40; ++i) {
        Ray x = random_ray();
        if (!V.contains(word_index(x.vertex(t), d))) outside.push_back(visual_distance(complex, r, x, params));
      }
      const double round = roundness(in, outside);
      std::ostringstream detail;
      detail << "Round = " << round;
      record("boundary", "roundness", std::isfinite(round) && round >= 1.0, detail.str());
    });
  }
};

}  // namespace

VerifyReport run_verify(Complex& complex, const Calibration& cal, const VerifyOptions& options) {
  Suite suite(complex, cal, options);
  suite.automaton_checks();
  suite.complex_checks();
  suite.geometry_checks();
  suite.dynamics_checks();
  suite.boundary_checks();
  VerifyReport report;
  report.calibration = cal;
  report.checks = std::move(suite.out);
  return report;
}

}  // namespace sscx

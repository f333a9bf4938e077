#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sscx/error.hpp"
#include "sscx/group_io.hpp"

using namespace sscx;

namespace {

struct Fixture {
  WreathRecursion def;
  Group group;
  Complex complex;
  std::vector<SymbolWord> gens;
  explicit Fixture(const std::string& name)
      : def(builtin_group(name).recursion), group(def), complex(group), gens(oracle::good_words(group)) {}
};

// Horizontal distance at the common level through the oracle action.
int oracle_horizontal(Fixture& f, const Word& u, const Word& v) {
  auto d = oracle::level_bfs(f.def, f.gens, u);
  return d.at(v);
}

}  // namespace

TEST_CASE("level graphs follow the generator action") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    for (int n = 0; n <= 7; ++n) {
      auto g = f.complex.level_graph(n);
      REQUIRE(g->size() == level_size(f.def.alphabet, static_cast<std::size_t>(n)));
      for (std::uint64_t v = 0; v < g->size(); ++v)
        for (int s = 0; s < g->generator_count; ++s)
          CHECK(g->vertex(g->step(v, s)) == oracle::act(f.def, f.gens[static_cast<std::size_t>(s)], g->vertex(v)));
    }
  }
}

TEST_CASE("augmented tree law: pushing down preserves adjacency") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    for (int n = 1; n <= 8; ++n) {
      auto g = f.complex.level_graph(n);
      for (std::uint64_t v = 0; v < g->size(); ++v)
        for (int s = 0; s < g->generator_count; ++s) {
          Word a = push_down(g->vertex(v), 1), b = push_down(g->vertex(g->step(v, s)), 1);
          CHECK(f.complex.horizontal_distance(a, b) <= 1);
        }
    }
  }
}

TEST_CASE("levels are connected up to level 10") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    for (int n = 0; n <= 10; ++n) CHECK(f.complex.level_graph(n)->connected());
  }
}

TEST_CASE("graph distance equals truncated BFS for all pairs up to level 4") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    const auto all = oracle::all_words(f.def.alphabet, 4);
    for (const auto& u : all) {
      auto dist = oracle::bfs(f.def, f.gens, u, 4);
      for (const auto& v : all) CHECK(f.complex.graph_distance(u, v) == dist.at(v));
    }
  }
}

TEST_CASE("horizontal distances match level BFS, with limits") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    std::mt19937_64 rng(9);
    for (int n : {3, 7, 12}) {
      for (int t = 0; t < 10; ++t) {
        Word u = word_from_index(rng() % level_size(2, static_cast<std::size_t>(n)), static_cast<std::size_t>(n), 2);
        auto dist = oracle::level_bfs(f.def, f.gens, u);
        for (int r = 0; r < 10; ++r) {
          Word v = word_from_index(rng() % level_size(2, static_cast<std::size_t>(n)), static_cast<std::size_t>(n), 2);
          const int ref = dist.at(v);
          CHECK(f.complex.horizontal_distance(u, v) == ref);
          CHECK(f.complex.horizontal_distance(u, v, 2) == std::min(ref, 3));
        }
      }
    }
    CHECK_THROWS_AS(f.complex.horizontal_distance(Word{0}, Word{0, 1}), Error);
  }
}

TEST_CASE("geodesic info describes realizing normal forms") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    const auto all = oracle::all_words(f.def.alphabet, 5);
    std::mt19937_64 rng(13);
    for (int t = 0; t < 400; ++t) {
      const Word& u = all[rng() % all.size()];
      const Word& v = all[rng() % all.size()];
      auto info = f.complex.geodesic(u, v);
      // brute force over drop levels
      int best = 1 << 30, lo = -1, hi = -1;
      const int top = static_cast<int>(std::min(u.size(), v.size()));
      std::vector<int> h(static_cast<std::size_t>(top) + 1);
      for (int l = 0; l <= top; ++l) {
        h[static_cast<std::size_t>(l)] = oracle_horizontal(f, push_down(u, u.size() - static_cast<std::size_t>(l)),
                                                           push_down(v, v.size() - static_cast<std::size_t>(l)));
        const int len = static_cast<int>(u.size() + v.size()) - 2 * l + h[static_cast<std::size_t>(l)];
        if (len < best) {
          best = len;
          lo = hi = l;
        } else if (len == best) {
          hi = l;
        }
      }
      CHECK(info.distance == best);
      CHECK(info.min_level == lo);
      CHECK(info.max_level == hi);
      CHECK(info.horizontal_min == h[static_cast<std::size_t>(lo)]);
      CHECK(info.horizontal_max == h[static_cast<std::size_t>(hi)]);
      CHECK(f.complex.level_product(u, v) == hi);
      CHECK(f.complex.gromov_product(u, v) == doctest::Approx(0.5 * (static_cast<double>(u.size() + v.size()) - best)));
    }
  }
}

TEST_CASE("HSigma per level matches brute force at levels up to 6") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    auto est = f.complex.estimate_HSigma(6);
    int cum_max = 0, cum_min = 0;
    for (int n = 1; n <= 6; ++n) {
      int level_max = 0, level_min = 0;
      const auto words = oracle::all_words(f.def.alphabet, n);
      std::vector<std::map<Word, int>> hor(static_cast<std::size_t>(n) + 1);
      for (std::uint64_t i = 0; i < level_size(2, static_cast<std::size_t>(n)); ++i) {
        Word u = word_from_index(i, static_cast<std::size_t>(n), 2);
        auto full = oracle::bfs(f.def, f.gens, u, n);
        for (std::uint64_t j = 0; j < level_size(2, static_cast<std::size_t>(n)); ++j) {
          Word v = word_from_index(j, static_cast<std::size_t>(n), 2);
          const int dist = full.at(v);
          int lo_h = -1, hi_h = -1;
          for (int l = 0; l <= n; ++l) {
            Word a = push_down(u, static_cast<std::size_t>(n - l)), b = push_down(v, static_cast<std::size_t>(n - l));
            const int hl = oracle::level_bfs(f.def, f.gens, a).at(b);
            if (2 * (n - l) + hl == dist) {
              if (lo_h < 0) lo_h = hl;
              hi_h = hl;
            }
          }
          level_max = std::max(level_max, hi_h);
          level_min = std::max(level_min, lo_h);
        }
      }
      cum_max = std::max(cum_max, level_max);
      cum_min = std::max(cum_min, level_min);
      CAPTURE(n);
      const auto& lv = est.levels.at(static_cast<std::size_t>(n));
      CHECK(lv.level == n);
      CHECK(lv.max_horizontal == level_max);
      CHECK(lv.max_min_horizontal == level_min);
    }
    CHECK(est.value == cum_max);
    CHECK(est.min_rule_value == cum_min);
    CHECK(est.min_rule_value <= est.value);
  }
}

TEST_CASE("metric axioms on sampled triples") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    std::mt19937_64 rng(31);
    auto rand_word = [&] {
      Word w(rng() % 10);
      for (auto& x : w) x = static_cast<Letter>(rng() % 2);
      return w;
    };
    for (int t = 0; t < 500; ++t) {
      Word a = rand_word(), b = rand_word(), c = rand_word();
      const int ab = f.complex.graph_distance(a, b);
      CHECK(ab == f.complex.graph_distance(b, a));
      CHECK(f.complex.graph_distance(a, c) <= ab + f.complex.graph_distance(b, c));
      CHECK((ab == 0) == (a == b));
      CHECK(ab >= static_cast<int>(a.size() > b.size() ? a.size() - b.size() : b.size() - a.size()));
    }
  }
}

TEST_CASE("horizontal balls are BFS balls") {
  Fixture f("grigorchuk");
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const int n = 6;
    Word u = word_from_index(rng() % 64, n, 2);
    auto dist = oracle::level_bfs(f.def, f.gens, u);
    for (int r = 0; r <= 4; ++r) {
      std::vector<VertexIndex> ref;
      for (auto& [w, x] : dist)
        if (x <= r) ref.push_back(word_index(w, 2));
      std::sort(ref.begin(), ref.end());
      CHECK(f.complex.horizontal_ball({word_index(u, 2)}, n, r) == ref);
    }
  }
}

TEST_CASE("delta estimate is a finite four-point constant") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    auto est = f.complex.estimate_delta(300, 6, 3);
    CHECK(std::isfinite(est.delta));
    CHECK(est.delta >= 0.0);
    CHECK(est.samples == 300);
    CHECK(std::fmod(est.delta * 2.0, 1.0) == doctest::Approx(0.0));
  }
}

TEST_CASE("budgets and DOT output") {
  Group g(builtin_group("basilica").recursion);
  Complex small(g, ComplexOptions{1000, 64});
  CHECK_NOTHROW(small.level_graph(9));
  try {
    small.level_graph(12);
    FAIL("expected LevelTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LevelTooLarge);
  }
  Complex c(g);
  auto dot = c.level_dot(3);
  CHECK(dot.find("graph") != std::string::npos);
  CHECK(dot.find("000") != std::string::npos);
  auto slice = c.slice_dot(3);
  CHECK(slice.find("dashed") != std::string::npos);
}

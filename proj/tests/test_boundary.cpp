#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sscx/boundary.hpp"
#include "sscx/error.hpp"
#include "sscx/group_io.hpp"
#include "sscx/verify.hpp"

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

const std::vector<std::string> kRays = {";0", ";1", "1;0", ";01", "0;1", "01;10", ";011", "11;0"};

Ray random_ray(std::mt19937_64& rng) {
  Ray r;
  r.preperiod.resize(rng() % 4);
  for (auto& x : r.preperiod) x = static_cast<Letter>(rng() % 2);
  r.period.resize(1 + rng() % 3);
  for (auto& x : r.period) x = static_cast<Letter>(rng() % 2);
  return r;
}

std::set<Word> unit_ball(Fixture& f, const std::vector<Word>& centers) {
  std::set<Word> out(centers.begin(), centers.end());
  for (const auto& c : centers)
    for (const auto& g : f.gens) out.insert(oracle::act(f.def, g, c));
  return out;
}

}  // namespace

TEST_CASE("ray letters, vertices and shifts") {
  Ray r = Ray::parse("10;011", 2);
  CHECK(r.str() == "10;011");
  const Word letters = {1, 0, 0, 1, 1, 0, 1, 1, 0, 1, 1};
  for (std::size_t t = 1; t <= letters.size(); ++t) CHECK(r.letter(t) == letters[t - 1]);
  CHECK(r.vertex(4) == Word{1, 0, 0, 1});
  CHECK(r.vertex(0).empty());
  Ray p = r.prepend(0);
  CHECK(p.letter(1) == 0);
  for (std::size_t t = 1; t <= 10; ++t) CHECK(p.letter(t + 1) == r.letter(t));
  Ray s = r.shifted();
  for (std::size_t t = 1; t <= 10; ++t) CHECK(s.letter(t) == r.letter(t + 1));
  CHECK_THROWS_AS(Ray::parse("0;", 2), Error);
  CHECK_THROWS_AS(Ray::parse("2;0", 2), Error);
  CHECK_THROWS_AS(Ray::parse("01", 2), Error);
}

TEST_CASE("equivalence verdicts agree with level distances") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    std::mt19937_64 rng(23);
    int eq = 0, neq = 0;
    for (int t = 0; t < 80; ++t) {
      Ray a = random_ray(rng), b = random_ray(rng);
      if (t % 3 == 0) b = a.prepend(static_cast<Letter>(rng() % 2)).shifted();
      auto v = rays_equivalent(f.complex, a, b);
      REQUIRE(v.kind != Verdict::Unknown);
      if (v.kind == Verdict::Equivalent) {
        ++eq;
        for (std::size_t n = 1; n <= 24; ++n) CHECK(f.complex.horizontal_distance(a.vertex(n), b.vertex(n), 1) <= 1);
        CHECK_FALSE(divergence_product(f.complex, a, b).has_value());
      } else {
        ++neq;
        for (int n = 1; n < v.level; ++n)
          CHECK(f.complex.horizontal_distance(a.vertex(static_cast<std::size_t>(n)), b.vertex(static_cast<std::size_t>(n)), 1) <= 1);
        CHECK(f.complex.horizontal_distance(a.vertex(static_cast<std::size_t>(v.level)), b.vertex(static_cast<std::size_t>(v.level)), 1) > 1);
        auto div = divergence_product(f.complex, a, b);
        REQUIRE(div.has_value());
        CHECK(*div == v.level - 1);
      }
    }
    CHECK(eq > 0);
    CHECK(neq > 0);
  }
}

TEST_CASE("odometer identifies the all-zero and all-one rays") {
  Fixture f("odometer");
  auto v = rays_equivalent(f.complex, Ray::parse(";0", 2), Ray::parse(";1", 2));
  CHECK(v.kind == Verdict::Equivalent);
  for (std::size_t n = 1; n <= 20; ++n)
    CHECK(oracle::act(f.def, f.def.parse_symbols("a"), Word(n, 1)) == Word(n, 0));
  auto E = equivalent_vertices(f.complex, Ray::parse(";0", 2), 6);
  CHECK(E == std::vector<VertexIndex>{0, 63});
}

TEST_CASE("equivalent vertices stay within one step of the ray") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    for (const auto& text : kRays) {
      Ray r = Ray::parse(text, 2);
      for (int n = 1; n <= 10; ++n) {
        auto E = equivalent_vertices(f.complex, r, n);
        const auto self = word_index(r.vertex(static_cast<std::size_t>(n)), 2);
        CHECK(std::find(E.begin(), E.end(), self) != E.end());
        for (auto e : E) CHECK(f.complex.horizontal_distance(self, e, n, 1) <= 1);
      }
    }
  }
}

TEST_CASE("local degree recomputed from equivalent vertices") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    for (const auto& text : {"1;0", ";01", "0;1"}) {
      Ray r = Ray::parse(text, 2);
      auto deg = local_degree(f.complex, r, 3, 8);
      REQUIRE(deg.exact.size() == 6);
      for (int n = 3; n <= 8; ++n) {
        auto words = [&](const Ray& x, int level) {
          std::vector<Word> out;
          for (auto v : equivalent_vertices(f.complex, x, level)) out.push_back(word_from_index(v, static_cast<std::size_t>(level), 2));
          return out;
        };
        auto up = unit_ball(f, words(r, n + 1));
        auto down = unit_ball(f, words(r.shifted(), n));
        std::map<Word, int> fiber;
        for (const auto& u : up) {
          Word image(u.begin(), u.end() - 1);
          if (down.count(image)) ++fiber[image];
        }
        int ref = 0;
        for (auto& [w, c] : fiber) ref = std::max(ref, c);
        CHECK(deg.exact[static_cast<std::size_t>(n - 3)] == ref);
        CHECK(deg.under[static_cast<std::size_t>(n - 3)] >= 1);
      }
    }
  }
}

TEST_CASE("preimage classes partition the candidates and degrees sum to the alphabet size") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    for (const auto& text : kRays) {
      CAPTURE(text);
      auto rep = boundary_preimage_classes(f.complex, Ray::parse(text, 2), 2, 12);
      CHECK(rep.relation_consistent);
      std::set<Letter> covered;
      for (const auto& c : rep.classes) {
        for (auto y : c.letters) CHECK(covered.insert(y).second);
        CHECK(c.degree.value >= 1);
        CHECK(c.degree.stabilized);
      }
      CHECK(covered.size() == 2);
      CHECK(rep.degree_sum == 2);
    }
  }
}

TEST_CASE("odometer local degrees are all one") {
  Fixture f("odometer");
  for (const auto& text : kRays) {
    auto rep = boundary_preimage_classes(f.complex, Ray::parse(text, 2), 2, 10);
    for (const auto& c : rep.classes) CHECK(c.degree.value == 1);
  }
}

TEST_CASE("visual distance") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    VisualParams p;
    p.epsilon = 0.05;
    p.magic = f.group.magic_level(3);
    std::mt19937_64 rng(41);
    for (int t = 0; t < 40; ++t) {
      Ray a = random_ray(rng), b = random_ray(rng);
      const double ab = visual_distance(f.complex, a, b, p);
      CHECK(ab == doctest::Approx(visual_distance(f.complex, b, a, p)));
      CHECK(ab <= 1.0);
      CHECK(ab >= 0.0);
      const bool equivalent = rays_equivalent(f.complex, a, b).kind == Verdict::Equivalent;
      CHECK((ab == 0.0) == equivalent);
      if (!equivalent) {
        const int div = *divergence_product(f.complex, a, b);
        const auto T = static_cast<std::size_t>(std::max(p.depth, div + p.magic + 1));
        CHECK(ab == doctest::Approx(std::exp(-p.epsilon * f.complex.level_product(a.vertex(T), b.vertex(T)))));
      }
    }
    CHECK(visual_distance(f.complex, Ray::parse("0;1", 2), Ray::parse("0;1", 2), p) == 0.0);
  }
}

TEST_CASE("default epsilon and the quasi-ultrametric constant") {
  CHECK(VisualParams::default_epsilon(0) == doctest::Approx(0.1));
  CHECK(VisualParams::default_epsilon(3) == doctest::Approx(1.0 / 16));
  CHECK(VisualParams::default_epsilon(8) == doctest::Approx(1.0 / 36));
  VisualParams p;
  p.epsilon = 0.1;
  p.delta = 2;
  p.magic = 1;
  CHECK(p.C0() == doctest::Approx(300.0));
  CHECK(p.K() == doctest::Approx(std::exp(0.1 * 302.0)));
}

TEST_CASE("shadow boundary samples pass through the unit ball of R(t)") {
  Fixture f("basilica");
  Ray r = Ray::parse("1;0", 2);
  for (int t = 2; t <= 6; ++t) {
    auto ball = f.complex.horizontal_ball({r.vertex(static_cast<std::size_t>(t))}, 1);
    for (const auto& s : shadow_boundary_sample(f.complex, r, t, 3, 10, 5))
      CHECK(std::find(ball.begin(), ball.end(), s.vertex(static_cast<std::size_t>(t))) != ball.end());
  }
}

TEST_CASE("diameter reports") {
  Fixture f("grigorchuk");
  auto cal = calibrate(f.complex, 5, 0.0625);
  auto rep = diameter_report(f.complex, Ray::parse(";0", 2), 3, 7, visual_params(cal), 8, 1, 2);
  CHECK(rep.c == cal.magic + 3);
  REQUIRE(rep.rows.size() == 5);
  for (const auto& row : rep.rows) {
    CHECK(row.inclusion);
    CHECK(row.shadow_diameter > 0.0);
    CHECK(row.umbra_diameter <= row.shadow_diameter + 1e-12);
    CHECK(row.ratio == doctest::Approx(row.shadow_diameter * std::exp(cal.epsilon * row.t)));
    CHECK(row.ratio >= rep.band_min - 1e-12);
    CHECK(row.ratio <= rep.band_max + 1e-12);
  }
  CHECK(rep.band_ratio() >= 1.0);
}

TEST_CASE("roundness") {
  CHECK(roundness({0.1, 0.4}, {0.2, 0.9}) == doctest::Approx(2.0));
  CHECK(roundness({0.1, 0.4}, {}) == doctest::Approx(1.0));
  CHECK(roundness({0.5}, {0.9}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(roundness({0.1}, {0.0}), Error);
}

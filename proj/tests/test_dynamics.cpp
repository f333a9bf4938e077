#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "sscx/dynamics.hpp"
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

std::vector<Word> words_of(const std::vector<VertexIndex>& v, int level) {
  std::vector<Word> out;
  for (auto x : v) out.push_back(word_from_index(x, static_cast<std::size_t>(level), 2));
  return out;
}

}  // namespace

TEST_CASE("shift deletes the last letters and preimages prepend") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    Word w(3 + rng() % 6);
    for (auto& x : w) x = static_cast<Letter>(rng() % 2);
    const int k = static_cast<int>(rng() % 3);
    CHECK(shift(w, k) == Word(w.begin(), w.end() - k));
    CHECK(shift(word_index(w, 2), k, 2) == word_index(shift(w, k), 2));
    auto pre = vertex_preimages(w, k, 2);
    CHECK(pre.size() == level_size(2, static_cast<std::size_t>(k)));
    std::set<Word> distinct(pre.begin(), pre.end());
    CHECK(distinct.size() == pre.size());
    for (const auto& p : pre) CHECK(shift(p, k) == w);
  }
}

TEST_CASE("pullback components agree with union-find over preimages") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    std::mt19937_64 rng(10);
    for (int t = 0; t < 12; ++t) {
      const int n = 3 + static_cast<int>(rng() % 3), k = 1 + static_cast<int>(rng() % 3);
      VertexIndex c = rng() % level_size(2, static_cast<std::size_t>(n));
      HorizontalSet V{n, f.complex.horizontal_ball({c}, n, 1)};
      // oracle: all words y v with F^k(y v) in V
      std::vector<Word> pre;
      for (std::uint64_t i = 0; i < level_size(2, static_cast<std::size_t>(n + k)); ++i) {
        Word w = word_from_index(i, static_cast<std::size_t>(n + k), 2);
        if (V.contains(word_index(Word(w.begin(), w.end() - k), 2))) pre.push_back(w);
      }
      std::map<Word, Word> parent;
      for (auto& w : pre) parent[w] = w;
      std::function<Word(const Word&)> find = [&](const Word& x) {
        if (parent[x] == x) return x;
        return parent[x] = find(parent[x]);
      };
      for (auto& w : pre)
        for (const auto& g : f.gens) {
          Word y = oracle::act(f.def, g, w);
          if (parent.count(y)) parent[find(w)] = find(y);
        }
      std::set<Word> roots;
      for (auto& w : pre) roots.insert(find(w));
      auto comps = pullback_components(f.complex, V, k, {c});
      CHECK(comps.size() == roots.size());
      std::size_t total = 0, marked = 0;
      for (const auto& pc : comps) {
        total += pc.vertices.size();
        marked += pc.marked.size();
        auto ws = words_of(pc.vertices, n + k);
        for (auto& w : ws) CHECK(find(w) == find(ws.front()));
        for (auto& m : words_of(pc.marked, n + k)) {
          CHECK(word_index(Word(m.begin(), m.end() - k), 2) == c);
          CHECK(std::find(ws.begin(), ws.end(), m) != ws.end());
        }
      }
      CHECK(total == pre.size());
      CHECK(marked == level_size(2, static_cast<std::size_t>(k)));
    }
  }
}

TEST_CASE("horizontal diameter is the max pairwise level distance") {
  Fixture f("basilica");
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    std::vector<VertexIndex> set;
    for (int i = 0; i < 5; ++i) set.push_back(rng() % 64);
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    int ref = 0;
    for (auto a : set) {
      auto dist = oracle::level_bfs(f.def, f.gens, word_from_index(a, 6, 2));
      for (auto b : set) ref = std::max(ref, dist.at(word_from_index(b, 6, 2)));
    }
    CHECK(horizontal_diameter(f.complex, 6, set) == ref);
  }
}

TEST_CASE("geometric bound") {
  CHECK(geometric_bound(2, 3) == 15);
  CHECK(geometric_bound(0, 4) == 1);
  CHECK(geometric_bound(1, 5) == 6);
  CHECK(geometric_bound(3, 0) == 1);
  CHECK(geometric_bound(1000, 50) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("stabilizer orbits agree with brute force") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    std::mt19937_64 rng(15);
    const int maxL = name == "basilica" ? 1 : 2;
    for (int L = 1; L <= maxL; ++L) {
      // ball of radius L as symbol words, distinct by deep action table
      std::vector<SymbolWord> ball{{}}, sphere{{}};
      for (int r = 1; r <= L; ++r) {
        std::vector<SymbolWord> next;
        for (const auto& w : sphere)
          for (const auto& s : f.gens) {
            SymbolWord ws = w;
            ws.insert(ws.end(), s.begin(), s.end());
            next.push_back(ws);
          }
        ball.insert(ball.end(), next.begin(), next.end());
        sphere = std::move(next);
      }
      std::map<std::vector<std::uint32_t>, SymbolWord> distinct;
      for (const auto& w : ball) distinct.emplace(oracle::fingerprint(f.def, w, 12), w);
      CHECK(f.group.group_ball(L).size() == distinct.size());
      for (int t = 0; t < 8; ++t) {
        Word v(2 + rng() % 5), w(1 + rng() % 4);
        for (auto& x : v) x = static_cast<Letter>(rng() % 2);
        for (auto& x : w) x = static_cast<Letter>(rng() % 2);
        std::vector<SymbolWord> H;
        for (auto& [fp, g] : distinct)
          if (oracle::act(f.def, g, v) == v) H.push_back(g);
        Word start = v;
        start.insert(start.end(), w.begin(), w.end());
        std::set<Word> orbit{start};
        std::vector<Word> queue{start};
        for (std::size_t i = 0; i < queue.size(); ++i)
          for (const auto& h : H) {
            Word y = oracle::act(f.def, h, queue[i]);
            if (orbit.insert(y).second) queue.push_back(y);
          }
        auto res = stabilizer_orbit(f.group, v, L, w);
        CHECK(res.q == H.size());
        CHECK(res.orbit_size == orbit.size());
        CHECK(res.bound == geometric_bound(H.size(), static_cast<int>(f.group.nucleus().size()) + 1));
        CHECK(res.hypothesis == (static_cast<int>(v.size()) >= res.magic_required));
        if (res.hypothesis) CHECK(res.orbit_size <= res.bound);
      }
    }
  }
}

TEST_CASE("bounded degree statistics") {
  Fixture f("odometer");
  auto st = bounded_degree_stats(f.complex, 1, 3, 6, 0, 3, 32, 1);
  CHECK(st.C_observed == 1);
  CHECK(st.constant_in_k);
  REQUIRE(st.stable_level.has_value());
  for (const auto& c : st.cells) {
    CHECK(c.max_count >= 1);
    CHECK(c.bound_holds == (c.max_diameter < (2 * st.r + 1) * (st.C_observed + 1)));
  }
  Fixture g("grigorchuk");
  auto sg = bounded_degree_stats(g.complex, 1, 3, 6, 1, 3, 32, 1);
  for (const auto& c : sg.cells) CHECK(c.max_count <= 1 << c.k);
}

TEST_CASE("iterates: naturality and type errors") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Fixture f(name);
    for (int n = 2; n <= 3; ++n)
      for (VertexIndex v = 0; v < level_size(2, static_cast<std::size_t>(n)); ++v) {
        HorizontalSet V{n, f.complex.horizontal_ball({v}, n, 1)};
        for (const auto& pc : pullback_components(f.complex, V, 1)) {
          HorizontalSet Vt{n + 1, pc.vertices};
          CHECK(hull_naturality(f.complex, Vt, V, 1, 2, 3));
          CHECK(umbra_naturality(f.complex, Vt, V, 1, 2));
          CHECK(iterate_type(f.complex, Vt, V, 1, 2, 3).code.size() > 0);
        }
      }
    HorizontalSet V{3, {0}};
    HorizontalSet W{4, {2}};
    CHECK_THROWS_AS(iterate_type(f.complex, W, V, 1, 2, 3), Error);
  }
}

TEST_CASE("dynatlas bookkeeping and odometer degree") {
  Fixture f("odometer");
  auto rep = build_dynatlas(f.complex, 1, 5, 6, 7, 0, 3, 0, 8, 1);
  REQUIRE(rep.new_per_k.size() == 4);
  std::size_t sum = 0;
  for (std::size_t i = 0; i < rep.new_per_k.size(); ++i) {
    sum += rep.new_per_k[i];
    CHECK(rep.cumulative_per_k[i] == sum);
  }
  CHECK(sum == rep.forms.size());
  CHECK(rep.p == 1);
  for (const auto& e : rep.forms) {
    CHECK(e.degree >= 1);
    CHECK(e.first_k >= 0);
    CHECK(e.first_k <= 3);
  }
  auto again = build_dynatlas(f.complex, 1, 5, 6, 7, 0, 3, 0, 8, 1);
  CHECK(again.cumulative_per_k == rep.cumulative_per_k);
}

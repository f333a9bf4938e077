#include <doctest.h>

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "sscx/error.hpp"
#include "sscx/group_io.hpp"

using namespace sscx;

namespace {

SymbolWord random_symbols(std::mt19937_64& rng, int gens, int max_len) {
  SymbolWord w(rng() % static_cast<std::uint64_t>(max_len + 1));
  for (auto& s : w) s = {static_cast<int>(rng() % static_cast<std::uint64_t>(gens)), rng() % 2 == 1};
  return w;
}

Word random_word(std::mt19937_64& rng, int d, int len) {
  Word w(static_cast<std::size_t>(len));
  for (auto& x : w) x = static_cast<Letter>(rng() % static_cast<std::uint64_t>(d));
  return w;
}

std::set<oracle::NucleusOracle::Key> library_nucleus_keys(Group& g, oracle::NucleusOracle& o) {
  std::set<oracle::NucleusOracle::Key> out;
  for (auto id : g.nucleus().elements) out.insert(o.key(g.representative(id)));
  return out;
}

}  // namespace

TEST_CASE("action agrees with direct evaluation of the recursion") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto def = builtin_group(name).recursion;
    Group g(def);
    std::mt19937_64 rng(11);
    const int gens = static_cast<int>(def.generators.size());
    for (int t = 0; t < 200; ++t) {
      auto sw = random_symbols(rng, gens, 8);
      auto w = random_word(rng, def.alphabet, static_cast<int>(rng() % 12));
      const auto id = g.id_of(sw);
      CHECK(g.act(id, w) == oracle::act(def, sw, w));
      CHECK(g.act(sw, w) == oracle::act(def, sw, w));
      auto v = random_word(rng, def.alphabet, static_cast<int>(rng() % 5));
      auto lib = g.restrict(id, v);
      auto ref = oracle::restrict(def, sw, v);
      CHECK(oracle::fingerprint(def, g.representative(lib), 7) == oracle::fingerprint(def, ref, 7));
    }
  }
}

TEST_CASE("group operations: inverses, products and the right action law") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto def = builtin_group(name).recursion;
    Group g(def);
    std::mt19937_64 rng(5);
    const int gens = static_cast<int>(def.generators.size());
    for (int t = 0; t < 100; ++t) {
      auto a = g.id_of(random_symbols(rng, gens, 6));
      auto b = g.id_of(random_symbols(rng, gens, 6));
      CHECK(g.multiply(a, g.inverse(a)) == Group::identity());
      auto w = random_word(rng, def.alphabet, 9);
      CHECK(g.act(g.multiply(a, b), w) == g.act(b, g.act(a, w)));
      CHECK(g.act(g.inverse(a), g.act(a, w)) == w);
    }
  }
}

TEST_CASE("equality is sound against action tables") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto def = builtin_group(name).recursion;
    Group g(def);
    std::mt19937_64 rng(17);
    const int gens = static_cast<int>(def.generators.size());
    for (int t = 0; t < 150; ++t) {
      auto a = random_symbols(rng, gens, 5), b = random_symbols(rng, gens, 5);
      const bool same_table = oracle::fingerprint(def, a, 8) == oracle::fingerprint(def, b, 8);
      if (g.equal(a, b)) CHECK(same_table);
      if (!same_table) CHECK_FALSE(g.equal(a, b));
    }
  }
}

TEST_CASE("Grigorchuk relations") {
  const auto def = builtin_group("grigorchuk").recursion;
  Group g(def);
  auto e = SymbolWord{};
  for (const char* rel : {"aa", "bb", "cc", "dd", "bcd", "adadadad", "acacacacacacacac"})
    CHECK_MESSAGE(g.equal(def.parse_symbols(rel), e), rel);
  std::string ab16;
  for (int i = 0; i < 16; ++i) ab16 += "ab";
  CHECK(g.equal(def.parse_symbols(ab16), e));
  CHECK_FALSE(g.equal(def.parse_symbols("ab"), def.parse_symbols("ba")));
  CHECK_FALSE(g.equal(def.parse_symbols("adad"), e));
  CHECK(g.equal(def.parse_symbols("bc"), def.parse_symbols("d")));
}

TEST_CASE("odometer powers: a^(2^n) fixes level n and moves level n+1") {
  const auto def = builtin_group("odometer").recursion;
  Group g(def);
  ElementId p = g.id_of(def.parse_symbols("a"));
  for (int n = 0; n <= 8; ++n) {
    // p = a^(2^n)
    for (std::uint64_t i = 0; i < level_size(2, static_cast<std::size_t>(n)); ++i) {
      Word w = word_from_index(i, static_cast<std::size_t>(n), 2);
      CHECK(g.act(p, w) == w);
    }
    bool moves = false;
    for (std::uint64_t i = 0; i < level_size(2, static_cast<std::size_t>(n + 1)); ++i) {
      Word w = word_from_index(i, static_cast<std::size_t>(n + 1), 2);
      moves = moves || g.act(p, w) != w;
    }
    CHECK(moves);
    CHECK(p != Group::identity());
    p = g.multiply(p, p);
  }
}

TEST_CASE("nucleus matches the fixpoint oracle") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto def = builtin_group(name).recursion;
    Group g(def);
    oracle::NucleusOracle o{def, 10, {}};
    auto ref = o.nucleus();
    REQUIRE_FALSE(ref.empty());
    CHECK(library_nucleus_keys(g, o) == ref);
    CHECK(g.nucleus().size() == ref.size());
  }
}

TEST_CASE("nucleus sizes of the odometer and Grigorchuk") {
  Group odo(builtin_group("odometer").recursion);
  Group grig(builtin_group("grigorchuk").recursion);
  CHECK(odo.nucleus().size() == 3);
  CHECK(grig.nucleus().size() == 5);
}

TEST_CASE("nucleus invariants: identity, inverses and restriction closure") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Group g(builtin_group(name).recursion);
    const auto& n = g.nucleus();
    CHECK(n.contains(Group::identity()));
    for (auto x : n.elements) {
      CHECK(n.contains(g.inverse(x)));
      for (int l = 0; l < g.alphabet(); ++l) CHECK(n.contains(g.child(x, static_cast<Letter>(l))));
    }
  }
}

TEST_CASE("magic levels match brute force over the ball") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto def = builtin_group(name).recursion;
    Group g(def);
    oracle::NucleusOracle o{def, 10, {}};
    auto nuc = library_nucleus_keys(g, o);
    const auto gens = oracle::good_words(g);
    std::vector<SymbolWord> ball{{}};
    std::vector<SymbolWord> sphere{{}};
    for (int L = 1; L <= 3; ++L) {
      std::vector<SymbolWord> next;
      for (const auto& w : sphere)
        for (const auto& s : gens) {
          SymbolWord ws = w;
          ws.insert(ws.end(), s.begin(), s.end());
          next.push_back(ws);
        }
      ball.insert(ball.end(), next.begin(), next.end());
      sphere = std::move(next);
      CAPTURE(L);
      CHECK(g.magic_level(L) == o.magic_level(ball, nuc));
    }
  }
}

TEST_CASE("norm does not increase under restriction") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Group g(builtin_group(name).recursion);
    for (const auto& e : g.group_ball(4))
      for (int x = 0; x < g.alphabet(); ++x) {
        auto n = g.norm(g.child(e.id, static_cast<Letter>(x)), e.norm);
        REQUIRE(n.has_value());
        CHECK(*n <= e.norm);
      }
  }
}

TEST_CASE("good generating set excludes the identity and is closed under inverses") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    Group g(builtin_group(name).recursion);
    const auto& s = g.good_generators();
    REQUIRE_FALSE(s.empty());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i].id != Group::identity());
      REQUIRE(s[i].inverse >= 0);
      CHECK(g.multiply(s[i].id, s[static_cast<std::size_t>(s[i].inverse)].id) == Group::identity());
      for (int x = 0; x < g.alphabet(); ++x) {
        auto c = g.child(s[i].id, static_cast<Letter>(x));
        bool inside = c == Group::identity();
        for (const auto& t : s) inside = inside || t.id == c;
        CHECK(inside);
      }
    }
  }
}

TEST_CASE("group JSON round trip and hashing") {
  for (const auto& name : builtin_names()) {
    const auto def = builtin_group(name).recursion;
    auto again = parse_group_json(group_to_json(def));
    Group a(def), b(again);
    CHECK(a.definition_hash() == b.definition_hash());
    CHECK(parse_group_json(builtin_json(name)).alphabet == def.alphabet);
  }
  Group o(builtin_group("odometer").recursion), gr(builtin_group("grigorchuk").recursion);
  CHECK(o.definition_hash() != gr.definition_hash());
}

TEST_CASE("malformed definitions are rejected") {
  CHECK_THROWS_AS(parse_group_json("{"), Error);
  CHECK_THROWS_AS(parse_group_json(R"({"alphabet": 2, "generators": [{"name": "a", "perm": [0, 0], "restrictions": ["", ""]}]})"), Error);
  CHECK_THROWS_AS(parse_group_json(R"({"alphabet": 2, "generators": [{"name": "a", "perm": [1, 0], "restrictions": ["z", ""]}]})"), Error);
  CHECK_THROWS_AS(builtin_group("nope"), Error);
}

TEST_CASE("non-contracting input reports the cap error") {
  Group g(load_group_file(SSCX_TEST_DATA "/aleshin.json"));
  try {
    g.nucleus();
    FAIL("expected NotContractingWithinBound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotContractingWithinBound);
    CHECK(e.is_cap_error());
  }
}

TEST_CASE("nucleus runtime stays within ten seconds") {
  for (const char* name : {"odometer", "grigorchuk"}) {
    auto t0 = std::chrono::steady_clock::now();
    Group g(builtin_group(name).recursion);
    g.nucleus();
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10.0);
  }
}

#include <doctest.h>

#include <random>

#include "sscx/error.hpp"
#include "sscx/word.hpp"

using namespace sscx;

TEST_CASE("parse and format round trip") {
  Word w = parse_word("0110", 2);
  CHECK(w == Word{0, 1, 1, 0});
  CHECK(format_word(w) == "0110");
  CHECK(format_word(parse_word("", 3)).empty());
  CHECK(parse_word("212", 3) == Word{2, 1, 2});
}

TEST_CASE("parse rejects letters outside the alphabet") {
  CHECK_THROWS_AS(parse_word("012", 2), Error);
  CHECK_THROWS_AS(parse_word("0x", 2), Error);
}

TEST_CASE("word index is a bijection with the leftmost letter most significant") {
  for (int d : {2, 3}) {
    for (std::size_t n = 0; n <= 6; ++n) {
      const std::uint64_t size = level_size(d, n);
      std::uint64_t expected = 1;
      for (std::size_t i = 0; i < n; ++i) expected *= static_cast<std::uint64_t>(d);
      CHECK(size == expected);
      for (std::uint64_t i = 0; i < size; ++i) {
        Word w = word_from_index(i, n, d);
        REQUIRE(w.size() == n);
        CHECK(word_index(w, d) == i);
        std::uint64_t manual = 0;
        for (Letter x : w) manual = manual * static_cast<std::uint64_t>(d) + x;
        CHECK(manual == i);
      }
    }
  }
}

TEST_CASE("push down deletes leading letters and matches index reduction") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    Word w(1 + rng() % 10);
    for (auto& x : w) x = static_cast<Letter>(rng() % 2);
    const std::size_t k = rng() % (w.size() + 1);
    Word p = push_down(w, k);
    CHECK(p == Word(w.begin() + static_cast<std::ptrdiff_t>(k), w.end()));
    CHECK(word_index(p, 2) == word_index(w, 2) % level_size(2, w.size() - k));
  }
}

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

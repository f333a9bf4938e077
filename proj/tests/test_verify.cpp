#include <doctest.h>

#include "oracles.hpp"
#include "sscx/error.hpp"
#include "sscx/group_io.hpp"
#include "sscx/verify.hpp"

using namespace sscx;

TEST_CASE("truncated multi-source distances match single-source BFS minima") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto def = builtin_group(name).recursion;
    Group g(def);
    Complex c(g);
    const auto gens = oracle::good_words(g);
    const std::vector<Word> sources = {Word{0, 1, 1}, Word{1, 0}};
    auto td = truncated_distances(c, 5, [&](const Word& w) { return std::find(sources.begin(), sources.end(), w) != sources.end(); });
    auto a = oracle::bfs(def, gens, sources[0], 5), b = oracle::bfs(def, gens, sources[1], 5);
    for (const auto& w : oracle::all_words(2, 5)) CHECK(td.at(w) == std::min(a.at(w), b.at(w)));
  }
}

TEST_CASE("calibration honours overrides and validates epsilon") {
  Group g(builtin_group("odometer").recursion);
  Complex c(g);
  auto cal = calibrate(c, 4, 0.2);
  CHECK(cal.hsigma == 4);
  CHECK_FALSE(cal.hsigma_estimated);
  CHECK(cal.epsilon == doctest::Approx(0.2));
  CHECK_FALSE(cal.epsilon_default);
  CHECK(cal.magic == g.magic_level(4));
  auto est = calibrate(c);
  CHECK(est.hsigma_estimated);
  CHECK(est.hsigma >= est.hsigma_min_rule);
  CHECK(est.epsilon == doctest::Approx(VisualParams::default_epsilon(est.magic)));
  CHECK_THROWS_AS(calibrate(c, 4, -1.0), Error);
  auto p = visual_params(cal, 30);
  CHECK(p.depth == 30);
  CHECK(p.magic == cal.magic);
}

TEST_CASE("the invariant suite passes on the odometer and is reproducible") {
  Group g(builtin_group("odometer").recursion);
  Complex c(g);
  auto cal = calibrate(c);
  VerifyOptions opt;
  opt.triangle_samples = 2000;
  auto a = run_verify(c, cal, opt);
  for (const auto& r : a.checks) CHECK_MESSAGE(r.pass, std::string(r.module + "/" + r.name + ": " + r.detail));
  CHECK(a.all_pass());
  std::set<std::string> modules;
  for (const auto& r : a.checks) modules.insert(r.module);
  CHECK(modules == std::set<std::string>{"automaton", "complex", "geometry", "dynamics", "boundary"});
  auto b = run_verify(c, cal, opt);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].detail == b.checks[i].detail);
}

#include "sscx/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <unordered_map>

#include "sscx/error.hpp"
#include "sscx/geometry.hpp"

namespace sscx {

Ray Ray::parse(std::string_view text, int alphabet) {
  auto semi = text.find(';');
  if (semi == std::string_view::npos) throw Error(ErrorKind::InvalidInput, "ray literal must look like \"pre;per\"");
  auto strip = [](std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
  };
  Ray r;
  r.preperiod = parse_word(strip(text.substr(0, semi)), alphabet);
  r.period = parse_word(strip(text.substr(semi + 1)), alphabet);
  if (r.period.empty()) throw Error(ErrorKind::InvalidInput, "ray period must be nonempty");
  return r;
}

std::string Ray::str() const { return format_word(preperiod) + ";" + format_word(period); }

std::size_t Ray::phase(std::size_t t) const {
  if (t < preperiod.size()) return t;
  return preperiod.size() + (t - preperiod.size()) % period.size();
}

Letter Ray::letter(std::size_t t) const {
  const std::size_t p = phase(t - 1);
  return p < preperiod.size() ? preperiod[p] : period[p - preperiod.size()];
}

Word Ray::vertex(std::size_t t) const {
  Word w(t);
  for (std::size_t i = 1; i <= t; ++i) w[t - i] = letter(i);
  return w;
}

Ray Ray::prepend(Letter y) const {
  Ray r = *this;
  r.preperiod.insert(r.preperiod.begin(), y);
  return r;
}

Ray Ray::shifted() const {
  Ray r = *this;
  if (!r.preperiod.empty()) {
    r.preperiod.erase(r.preperiod.begin());
  } else {
    std::rotate(r.period.begin(), r.period.begin() + 1, r.period.end());
  }
  return r;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Inequivalent: return "inequivalent";
    case Verdict::Equivalent: return "equivalent";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

using Mask = std::uint64_t;

int generator_slots(const Complex& complex) {
  const int k = complex.generator_count();
  if (k + 1 > 64) throw Error(ErrorKind::InvalidInput, "too many generators for the ray state machine");
  return k + 1;  // slot k is the identity
}

// H' = {s : s(x) = y and s|_x ∈ H}
Mask step_mask(const Complex& complex, Mask H, Letter x, Letter y) {
  const int k = complex.generator_count();
  Mask out = 0;
  if (x == y && (H >> k & 1)) out |= Mask{1} << k;
  for (int s = 0; s < k; ++s) {
    if (complex.generator_image(s, x) != y) continue;
    const int r = complex.generator_restriction(s, x);
    const int slot = r < 0 ? k : r;
    if (H >> slot & 1) out |= Mask{1} << s;
  }
  return out;
}

Mask full_mask(int slots) { return slots == 64 ? ~Mask{0} : (Mask{1} << slots) - 1; }

}  // namespace

EquivalenceVerdict rays_equivalent(const Complex& complex, const Ray& r1, const Ray& r2, int max_depth) {
  const int slots = generator_slots(complex);
  Mask H = full_mask(slots);
  const std::size_t settle = std::max(r1.preperiod.size(), r2.preperiod.size());
  std::map<std::tuple<std::size_t, std::size_t, Mask>, int> seen;
  for (int t = 0; t < max_depth;) {
    H = step_mask(complex, H, r1.letter(static_cast<std::size_t>(t) + 1), r2.letter(static_cast<std::size_t>(t) + 1));
    ++t;
    if (H == 0) return {Verdict::Inequivalent, t};
    if (static_cast<std::size_t>(t) >= settle) {
      auto key = std::make_tuple(r1.phase(static_cast<std::size_t>(t)), r2.phase(static_cast<std::size_t>(t)), H);
      if (!seen.emplace(key, t).second) return {Verdict::Equivalent, t};
    }
  }
  return {Verdict::Unknown, max_depth};
}

std::optional<int> divergence_product(const Complex& complex, const Ray& r1, const Ray& r2, int max_depth) {
  auto v = rays_equivalent(complex, r1, r2, max_depth);
  if (v.kind == Verdict::Unknown)
    throw Error(ErrorKind::UndecidedEquivalence, "rays " + r1.str() + " and " + r2.str() + " undecided at depth " +
                                                     std::to_string(max_depth));
  if (v.kind == Verdict::Equivalent) return std::nullopt;
  return v.level - 1;
}

double VisualParams::K() const { return std::exp(epsilon * (delta + C0())); }

double VisualParams::default_epsilon(int magic) { return std::min(0.1, 1.0 / (4.0 * (1.0 + magic))); }

double visual_distance(Complex& complex, const Ray& r1, const Ray& r2, const VisualParams& params) {
  auto div = divergence_product(complex, r1, r2);
  if (!div) return 0.0;
  // the level product is stable once T exceeds div + m(HΣ)
  const int T = std::max(params.depth, *div + params.magic + 1);
  const int level = complex.level_product(r1.vertex(static_cast<std::size_t>(T)), r2.vertex(static_cast<std::size_t>(T)));
  return std::exp(-params.epsilon * level);
}

std::vector<VertexIndex> equivalent_vertices(const Complex& complex, const Ray& ray, int n) {
  const int d = complex.alphabet();
  const int slots = generator_slots(complex);
  using State = std::pair<std::size_t, Mask>;
  const std::size_t phases = ray.preperiod.size() + ray.period.size();
  auto next_phase = [&](std::size_t p) { return p + 1 < phases ? p + 1 : ray.preperiod.size(); };
  auto letter_at = [&](std::size_t p) {
    return p < ray.preperiod.size() ? ray.preperiod[p] : ray.period[p - ray.preperiod.size()];
  };
  // reachable state graph from (phase 0, all)
  std::map<State, std::vector<State>> succ;
  std::vector<State> stack{{0, full_mask(slots)}};
  succ[stack.back()];
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    auto& out = succ[s];
    for (int y = 0; y < d; ++y) {
      Mask h = step_mask(complex, s.second, letter_at(s.first), static_cast<Letter>(y));
      if (h == 0) continue;
      State t{next_phase(s.first), h};
      out.push_back(t);
      if (!succ.count(t)) {
        succ[t];
        stack.push_back(t);
      }
    }
  }
  // greatest fixpoint: live states have a live successor
  std::set<State> live;
  for (auto& [s, _] : succ) live.insert(s);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = live.begin(); it != live.end();) {
      const auto& out = succ[*it];
      bool ok = std::any_of(out.begin(), out.end(), [&](const State& t) { return live.count(t) > 0; });
      if (!ok) {
        it = live.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  std::set<VertexIndex> result;
  // depth-first over partner letters y_1 .. y_n; the vertex is y_n ... y_1
  struct Frame {
    State state;
    int depth;
    VertexIndex index;
    std::uint64_t scale;
  };
  std::vector<Frame> frames{{{0, full_mask(slots)}, 0, 0, 1}};
  std::set<std::pair<State, std::pair<int, VertexIndex>>> visited;
  while (!frames.empty()) {
    Frame f = frames.back();
    frames.pop_back();
    if (!live.count(f.state)) continue;
    if (f.depth == n) {
      result.insert(f.index);
      continue;
    }
    for (int y = 0; y < d; ++y) {
      Mask h = step_mask(complex, f.state.second, letter_at(f.state.first), static_cast<Letter>(y));
      if (h == 0) continue;
      Frame g{{next_phase(f.state.first), h}, f.depth + 1, f.index + static_cast<VertexIndex>(y) * f.scale,
              f.scale * static_cast<std::uint64_t>(d)};
      if (visited.insert({g.state, {g.depth, g.index}}).second) frames.push_back(g);
    }
  }
  return {result.begin(), result.end()};
}

namespace {

int max_fiber(const std::vector<VertexIndex>& up, const std::vector<VertexIndex>& down, int alphabet) {
  std::set<VertexIndex> below(down.begin(), down.end());
  std::unordered_map<VertexIndex, int> count;
  int best = 0;
  for (auto u : up) {
    VertexIndex v = u / static_cast<VertexIndex>(alphabet);
    if (below.count(v)) best = std::max(best, ++count[v]);
  }
  return best;
}

}  // namespace

LocalDegree local_degree(Complex& complex, const Ray& ray, int first_n, int last_n) {
  const int d = complex.alphabet();
  LocalDegree out;
  out.first_n = first_n;
  const Ray image = ray.shifted();
  for (int n = first_n; n <= last_n; ++n) {
    const VertexIndex top = word_index(ray.vertex(static_cast<std::size_t>(n + 1)), d);
    const VertexIndex bottom = word_index(image.vertex(static_cast<std::size_t>(n)), d);
    auto up1 = complex.horizontal_ball({top}, n + 1, 1);
    auto up2 = complex.horizontal_ball({top}, n + 1, 2);
    auto dn1 = complex.horizontal_ball({bottom}, n, 1);
    auto dn2 = complex.horizontal_ball({bottom}, n, 2);
    auto upx = complex.horizontal_ball(equivalent_vertices(complex, ray, n + 1), n + 1, 1);
    auto dnx = complex.horizontal_ball(equivalent_vertices(complex, image, n), n, 1);
    out.under.push_back(max_fiber(up1, dn1, d));
    out.exact.push_back(max_fiber(upx, dnx, d));
    out.over.push_back(max_fiber(up2, dn2, d));
  }
  const std::size_t m = out.exact.size();
  if (m >= 3) {
    out.stabilized = out.exact[m - 1] == out.exact[m - 2] && out.exact[m - 2] == out.exact[m - 3];
    out.sandwich_agrees = true;
    for (std::size_t i = m - 3; i < m; ++i)
      if (out.under[i] != out.over[i]) out.sandwich_agrees = false;
  }
  out.value = m ? out.exact.back() : 0;
  return out;
}

PreimageReport boundary_preimage_classes(Complex& complex, const Ray& ray, int first_n, int last_n, int max_depth) {
  const int d = complex.alphabet();
  PreimageReport report;
  report.ray = ray;
  std::vector<Ray> candidates;
  for (int y = 0; y < d; ++y) candidates.push_back(ray.prepend(static_cast<Letter>(y)));
  std::vector<std::vector<char>> eq(static_cast<std::size_t>(d), std::vector<char>(static_cast<std::size_t>(d), 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      auto v = rays_equivalent(complex, candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(j)], max_depth);
      if (v.kind == Verdict::Unknown)
        throw Error(ErrorKind::UndecidedEquivalence, "preimage candidates of " + ray.str() + " undecided");
      eq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v.kind == Verdict::Equivalent;
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        if (eq[i][j] && eq[j][k] && !eq[i][k]) report.relation_consistent = false;
  std::vector<int> cls(static_cast<std::size_t>(d), -1);
  for (int i = 0; i < d; ++i) {
    if (cls[static_cast<std::size_t>(i)] >= 0) continue;
    PreimageClass c;
    for (int j = i; j < d; ++j)
      if (cls[static_cast<std::size_t>(j)] < 0 && eq[i][j]) {
        cls[static_cast<std::size_t>(j)] = static_cast<int>(report.classes.size());
        c.letters.push_back(static_cast<Letter>(j));
      }
    c.degree = local_degree(complex, candidates[static_cast<std::size_t>(i)], first_n, last_n);
    if (!c.degree.stabilized)
      throw Error(ErrorKind::NotStabilized, "local degree at " + candidates[static_cast<std::size_t>(i)].str() +
                                                " did not stabilize by n=" + std::to_string(last_n));
    report.degree_sum += c.degree.value;
    report.classes.push_back(std::move(c));
  }
  return report;
}

std::vector<Ray> shadow_boundary_sample(const Complex& complex, const Ray& ray, int t, int extra_depth,
                                        std::size_t count, std::uint64_t seed) {
  const int d = complex.alphabet();
  std::mt19937_64 rng(seed);
  auto through = [&](const Word& u, Word period) {
    Ray r;
    r.preperiod.assign(u.rbegin(), u.rend());
    r.period = std::move(period);
    return r;
  };
  auto random_period = [&]() {
    Word p(1 + rng() % 2);
    for (auto& x : p) x = static_cast<Letter>(rng() % static_cast<std::uint64_t>(d));
    return p;
  };
  std::vector<Ray> out{ray};
  const Word center = ray.vertex(static_cast<std::size_t>(t));
  std::vector<Word> ball;
  for (int s = -1; s < complex.generator_count(); ++s) {
    Word w = s < 0 ? center : complex.neighbor(center, s);
    if (std::find(ball.begin(), ball.end(), w) == ball.end()) ball.push_back(w);
  }
  for (const auto& v : ball) out.push_back(through(v, ray.period));
  while (out.size() < count + ball.size() + 1) {
    const auto& v = ball[rng() % ball.size()];
    Word u(static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(extra_depth + 1)));
    for (auto& x : u) x = static_cast<Letter>(rng() % static_cast<std::uint64_t>(d));
    u.insert(u.end(), v.begin(), v.end());
    out.push_back(through(u, random_period()));
  }
  return out;
}

namespace {

double sample_diameter(Complex& complex, const std::vector<Ray>& rays, const VisualParams& params) {
  double best = 0.0;
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (std::size_t j = i + 1; j < rays.size(); ++j)
      best = std::max(best, visual_distance(complex, rays[i], rays[j], params));
  return best;
}

}  // namespace

DiameterReport diameter_report(Complex& complex, const Ray& ray, int t_first, int t_last, const VisualParams& params,
                               std::size_t samples, int inclusion_depth, std::uint64_t seed) {
  const int d = complex.alphabet();
  DiameterReport report;
  report.ray = ray;
  report.params = params;
  report.c = params.magic + 3;
  std::mt19937_64 rng(seed);
  for (int t = t_first; t <= t_last; ++t) {
    DiameterRow row;
    row.t = t;
    auto V = HorizontalSet::from_words(complex.horizontal_ball({ray.vertex(static_cast<std::size_t>(t))}, 1), d);
    auto shadow = shadow_boundary_sample(complex, ray, t, 3, samples, rng());
    row.samples = shadow.size();
    row.shadow_diameter = sample_diameter(complex, shadow, params);
    std::vector<Ray> umbra{ray};
    for (const auto& r : shadow) {
      // keep rays whose vertex three levels up lies in the umbra
      if (umbra_contains(complex, V, r.vertex(static_cast<std::size_t>(t + 3)))) umbra.push_back(r);
    }
    row.umbra_diameter = sample_diameter(complex, umbra, params);
    row.ratio = row.shadow_diameter * std::exp(params.epsilon * t);
    auto W = HorizontalSet::from_words(complex.horizontal_ball({ray.vertex(static_cast<std::size_t>(t + report.c))}, 1), d);
    for (int j = 0; j <= inclusion_depth && row.inclusion; ++j)
      for (const auto& u : shadow_level(W, j, d))
        if (!umbra_contains(complex, V, u)) {
          row.inclusion = false;
          break;
        }
    report.rows.push_back(row);
  }
  bool first = true;
  for (const auto& row : report.rows) {
    if (first) {
      report.band_min = report.band_max = row.ratio;
      first = false;
    }
    report.band_min = std::min(report.band_min, row.ratio);
    report.band_max = std::max(report.band_max, row.ratio);
  }
  return report;
}

double roundness(const std::vector<double>& inside, const std::vector<double>& outside) {
  double L = 0.0;
  for (double x : inside) L = std::max(L, x);
  double ell = L;
  for (double x : outside) ell = std::min(ell, x);
  if (ell <= 0.0) throw Error(ErrorKind::ZeroInradius, "sample has zero inradius at the center");
  return L / ell;
}

}  // namespace sscx

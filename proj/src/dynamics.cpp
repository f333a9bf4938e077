#include "sscx/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "sscx/error.hpp"

namespace sscx {

Word shift(const Word& w, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > w.size())
    throw Error(ErrorKind::KTooLarge, "cannot apply F^" + std::to_string(k) + " to " + format_word(w));
  return Word(w.begin(), w.end() - k);
}

VertexIndex shift(VertexIndex v, int k, int alphabet) { return v / level_size(alphabet, static_cast<std::size_t>(k)); }

std::vector<Word> vertex_preimages(const Word& v, int k, int alphabet) {
  const auto count = level_size(alphabet, static_cast<std::size_t>(k));
  std::vector<Word> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Word w = v;
    Word tail = word_from_index(i, static_cast<std::size_t>(k), alphabet);
    w.insert(w.end(), tail.begin(), tail.end());
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

std::vector<VertexIndex> preimage_indices(const std::vector<VertexIndex>& set, int k, int alphabet) {
  const auto count = level_size(alphabet, static_cast<std::size_t>(k));
  std::vector<VertexIndex> out;
  out.reserve(set.size() * count);
  for (auto v : set)
    for (std::uint64_t w = 0; w < count; ++w) out.push_back(v * count + w);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexIndex> sample_centers(std::uint64_t size, std::uint64_t max_centers, std::mt19937_64& rng) {
  std::vector<VertexIndex> out;
  if (size <= max_centers) {
    for (std::uint64_t v = 0; v < size; ++v) out.push_back(v);
    return out;
  }
  std::uniform_int_distribution<std::uint64_t> dist(0, size - 1);
  std::set<VertexIndex> picked;
  while (picked.size() < max_centers) picked.insert(dist(rng));
  return {picked.begin(), picked.end()};
}

}  // namespace

std::vector<PullbackComponent> pullback_components(Complex& complex, const HorizontalSet& V, int k,
                                                   const std::vector<VertexIndex>& base) {
  const int d = complex.alphabet();
  const std::vector<VertexIndex>& centers = base.empty() ? V.vertices : base;
  std::unordered_set<VertexIndex> base_set(centers.begin(), centers.end());
  auto all = preimage_indices(V.vertices, k, d);
  std::vector<PullbackComponent> out;
  for (auto& comp : level_components(complex, V.level + k, all)) {
    PullbackComponent pc;
    for (auto v : comp)
      if (base_set.count(shift(v, k, d))) pc.marked.push_back(v);
    pc.vertices = std::move(comp);
    out.push_back(std::move(pc));
  }
  return out;
}

int horizontal_diameter(Complex& complex, int level, const std::vector<VertexIndex>& set) {
  int best = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      best = std::max(best, complex.horizontal_distance(set[i], set[j], level));
  return best;
}

BoundedDegreeStats bounded_degree_stats(Complex& complex, int r, int first_level, int last_level, int first_k,
                                        int last_k, std::uint64_t max_centers, std::uint64_t seed) {
  BoundedDegreeStats stats;
  stats.r = r;
  std::mt19937_64 rng(seed);
  const int d = complex.alphabet();
  for (int n = first_level; n <= last_level; ++n) {
    auto centers = sample_centers(level_size(d, static_cast<std::size_t>(n)), max_centers, rng);
    for (int k = first_k; k <= last_k; ++k) {
      DegreeCell cell;
      cell.level = n;
      cell.k = k;
      for (auto v : centers) {
        HorizontalSet ball{n, complex.horizontal_ball({v}, n, r)};
        for (const auto& pc : pullback_components(complex, ball, k, {v})) {
          cell.max_count = std::max(cell.max_count, static_cast<int>(pc.marked.size()));
          cell.max_diameter = std::max(cell.max_diameter, horizontal_diameter(complex, n + k, pc.marked));
          cell.max_component_diameter =
              std::max(cell.max_component_diameter, horizontal_diameter(complex, n + k, pc.vertices));
        }
        ++cell.balls;
      }
      stats.cells.push_back(cell);
    }
  }
  // C per level, over k >= 1
  std::map<int, int> per_level;
  for (const auto& c : stats.cells)
    if (c.k >= 1 || last_k < 1) per_level[c.level] = std::max(per_level[c.level], c.max_count);
  std::vector<std::pair<int, int>> seq(per_level.begin(), per_level.end());
  for (std::size_t i = 0; i + 2 < seq.size(); ++i)
    if (seq[i].second == seq[i + 1].second && seq[i + 1].second == seq[i + 2].second) {
      stats.stable_level = seq[i].first;
      break;
    }
  const int from = stats.stable_level.value_or(first_level);
  for (const auto& c : stats.cells)
    if (c.level >= from) {
      stats.C_observed = std::max(stats.C_observed, c.max_count);
      stats.D_observed = std::max(stats.D_observed, c.max_diameter);
      stats.component_diameter = std::max(stats.component_diameter, c.max_component_diameter);
    }
  const int D = (2 * r + 1) * (stats.C_observed + 1);
  for (auto& c : stats.cells) c.bound_holds = c.max_diameter < D;
  if (stats.stable_level) {
    stats.constant_in_k = true;
    for (const auto& c : stats.cells)
      if (c.level >= *stats.stable_level && c.k >= 1 && c.max_count != per_level[c.level]) stats.constant_in_k = false;
  }
  return stats;
}

std::uint64_t geometric_bound(std::uint64_t q, int e) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t sum = 0, term = 1;
  for (int i = 0; i <= e; ++i) {
    if (sum > kMax - term) return kMax;
    sum += term;
    if (i < e) {
      if (q != 0 && term > kMax / q) return kMax;
      term *= q;
    }
  }
  return sum;
}

OrbitResult stabilizer_orbit(Group& group, const Word& v, int L, const Word& w) {
  OrbitResult result;
  const int N = static_cast<int>(group.nucleus().size());
  result.magic_required = L == 0 ? 0 : group.magic_level((N + 1) * L);
  result.hypothesis = static_cast<int>(v.size()) >= result.magic_required;
  std::vector<ElementId> H;
  for (const auto& entry : group.group_ball(L))
    if (group.act(entry.id, v) == v) H.push_back(entry.id);
  result.q = H.size();
  result.bound = geometric_bound(result.q, N + 1);
  Word start = v;
  start.insert(start.end(), w.begin(), w.end());
  std::unordered_set<Word, WordHash> seen{start};
  std::vector<Word> queue{start};
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (ElementId h : H) {
      Word next = group.act(h, queue[head]);
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  result.orbit_size = seen.size();
  result.pass = !result.hypothesis || result.orbit_size <= result.bound;
  return result;
}

namespace {

void require_iterate(const HorizontalSet& Vt, const HorizontalSet& V, int k, int alphabet) {
  if (Vt.level != V.level + k) throw Error(ErrorKind::NotAnIterate, "levels do not differ by k");
  std::vector<VertexIndex> image;
  for (auto v : Vt.vertices) image.push_back(shift(v, k, alphabet));
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  if (image != V.vertices) throw Error(ErrorKind::NotAnIterate, "F^" + std::to_string(k) + " does not map the set onto V");
}

}  // namespace

CanonicalForm iterate_type(Complex& complex, const HorizontalSet& Vt, const HorizontalSet& V, int k, int D,
                           int hsigma) {
  const int d = complex.alphabet();
  require_iterate(Vt, V, k, d);
  Hull src = hull(complex, Vt, D, hsigma);
  Hull dst = hull(complex, V, D, hsigma);
  std::vector<Word> src_words, dst_words;
  LabelledGraph gs = hull_graph(complex, src, &src_words);
  LabelledGraph gd = hull_graph(complex, dst, &dst_words);
  std::unordered_map<Word, std::uint32_t, WordHash> where;
  for (std::uint32_t i = 0; i < dst_words.size(); ++i) where.emplace(dst_words[i], i);
  std::vector<std::uint32_t> f(src_words.size());
  for (std::size_t i = 0; i < src_words.size(); ++i) {
    auto it = where.find(shift(src_words[i], k));
    if (it == where.end())
      throw Error(ErrorKind::NotAnIterate, "F^" + std::to_string(k) + " sends " + format_word(src_words[i]) +
                                               " outside the target hull");
    f[i] = it->second;
  }
  return map_form(gs, gd, f);
}

bool hull_naturality(Complex& complex, const HorizontalSet& Vt, const HorizontalSet& V, int k, int D, int hsigma) {
  const int d = complex.alphabet();
  require_iterate(Vt, V, k, d);
  Hull src = hull(complex, Vt, D, hsigma);
  Hull dst = hull(complex, V, D, hsigma);
  if (src.layers.size() != dst.layers.size()) return false;
  for (std::size_t i = 0; i < src.layers.size(); ++i) {
    std::vector<VertexIndex> image;
    for (auto v : src.layers[i].vertices) image.push_back(shift(v, k, d));
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    if (image != dst.layers[i].vertices) return false;
  }
  return true;
}

bool umbra_naturality(Complex& complex, const HorizontalSet& Vt, const HorizontalSet& V, int k, int depth) {
  const int d = complex.alphabet();
  require_iterate(Vt, V, k, d);
  for (int j = 1; j <= depth; ++j) {
    std::set<Word> image, target;
    for (const auto& u : shadow_level(Vt, j, d))
      if (umbra_contains(complex, Vt, u)) image.insert(shift(u, k));
    for (const auto& u : shadow_level(V, j, d))
      if (umbra_contains(complex, V, u)) target.insert(u);
    if (image != target) return false;
  }
  return true;
}

DynatlasReport build_dynatlas(Complex& complex, int r, int hsigma, int first_level, int last_level, int first_k,
                              int last_k, int D, std::uint64_t max_centers, std::uint64_t seed) {
  DynatlasReport report;
  report.r = r;
  report.hsigma = hsigma;
  report.first_level = first_level;
  report.last_level = last_level;
  report.first_k = first_k;
  report.last_k = last_k;
  const int d = complex.alphabet();
  if (D <= 0) {
    auto stats = bounded_degree_stats(complex, r, first_level, last_level, std::max(first_k, 1), std::max(last_k, 1),
                                      max_centers, seed);
    D = (2 * r + 1) * (stats.C_observed + 1);
    report.notes.push_back("D = (2r+1)(C+1) with C = " + std::to_string(stats.C_observed));
    if (stats.component_diameter >= D) {
      D = stats.component_diameter + 1;
      report.notes.push_back("D raised to " + std::to_string(D) + " to exceed the observed component diameter");
    }
  }
  report.D = D;
  std::mt19937_64 rng(seed);
  std::vector<std::vector<VertexIndex>> centers;
  for (int n = first_level; n <= last_level; ++n)
    centers.push_back(sample_centers(level_size(d, static_cast<std::size_t>(n)), max_centers, rng));
  std::map<std::string, std::size_t> index;
  for (int k = first_k; k <= last_k; ++k) {
    std::size_t fresh = 0;
    for (int n = first_level; n <= last_level; ++n)
      for (auto v : centers[static_cast<std::size_t>(n - first_level)]) {
        HorizontalSet ball{n, complex.horizontal_ball({v}, n, r)};
        for (const auto& pc : pullback_components(complex, ball, k, {v})) {
          HorizontalSet Vt{n + k, pc.vertices};
          auto form = iterate_type(complex, Vt, ball, k, D, hsigma);
          const int degree = static_cast<int>(pc.marked.size());
          report.p = std::max(report.p, degree);
          if (index.emplace(form.code, report.forms.size()).second) {
            report.forms.push_back({form.hash_hex(), n, k, degree});
            ++fresh;
          }
        }
      }
    report.new_per_k.push_back(fresh);
    report.cumulative_per_k.push_back(report.forms.size());
  }
  const auto& nk = report.new_per_k;
  report.stabilized = nk.size() >= 3 && nk[nk.size() - 1] == 0 && nk[nk.size() - 2] == 0;
  return report;
}

}  // namespace sscx

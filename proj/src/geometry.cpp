#include "sscx/geometry.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "sscx/error.hpp"

namespace sscx {

HorizontalSet HorizontalSet::from_words(const std::vector<Word>& words, int alphabet) {
  if (words.empty()) throw Error(ErrorKind::InvalidInput, "horizontal set must be nonempty");
  HorizontalSet V;
  V.level = static_cast<int>(words.front().size());
  for (const auto& w : words) {
    if (static_cast<int>(w.size()) != V.level) throw Error(ErrorKind::DifferentLevels, "horizontal set spans levels");
    V.vertices.push_back(word_index(w, alphabet));
  }
  std::sort(V.vertices.begin(), V.vertices.end());
  V.vertices.erase(std::unique(V.vertices.begin(), V.vertices.end()), V.vertices.end());
  return V;
}

HorizontalSet HorizontalSet::from_indices(int level, std::vector<VertexIndex> indices) {
  if (indices.empty()) throw Error(ErrorKind::InvalidInput, "horizontal set must be nonempty");
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return HorizontalSet{level, std::move(indices)};
}

std::vector<Word> HorizontalSet::words(int alphabet) const {
  std::vector<Word> out;
  out.reserve(vertices.size());
  for (auto v : vertices) out.push_back(word_from_index(v, static_cast<std::size_t>(level), alphabet));
  return out;
}

bool HorizontalSet::contains(VertexIndex v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }

HorizontalSet HorizontalSet::push_down(int k, int alphabet) const {
  if (k > level) throw Error(ErrorKind::KTooLarge, "cannot push a level-" + std::to_string(level) + " set down " + std::to_string(k));
  const std::uint64_t mod = level_size(alphabet, static_cast<std::size_t>(level - k));
  std::vector<VertexIndex> out;
  out.reserve(vertices.size());
  for (auto v : vertices) out.push_back(v % mod);
  return from_indices(level - k, std::move(out));
}

bool shadow_contains(const HorizontalSet& V, const Word& u, int alphabet) {
  if (static_cast<int>(u.size()) < V.level) return false;
  return V.contains(word_index(sscx::push_down(u, u.size() - static_cast<std::size_t>(V.level)), alphabet));
}

bool umbra_contains(const Complex& complex, const HorizontalSet& V, const Word& u) {
  if (static_cast<int>(u.size()) <= V.level) return false;
  const int d = complex.alphabet();
  if (!shadow_contains(V, u, d)) return false;
  for (int s = 0; s < complex.generator_count(); ++s)
    if (!shadow_contains(V, complex.neighbor(u, s), d)) return false;
  return true;
}

std::vector<Word> shadow_level(const HorizontalSet& V, int depth, int alphabet) {
  const auto prefixes = level_size(alphabet, static_cast<std::size_t>(depth));
  std::vector<Word> out;
  out.reserve(prefixes * V.size());
  for (std::uint64_t p = 0; p < prefixes; ++p) {
    Word y = word_from_index(p, static_cast<std::size_t>(depth), alphabet);
    for (auto v : V.vertices) {
      Word w = y;
      Word tail = word_from_index(v, static_cast<std::size_t>(V.level), alphabet);
      w.insert(w.end(), tail.begin(), tail.end());
      out.push_back(std::move(w));
    }
  }
  return out;
}

Hull hull(Complex& complex, const HorizontalSet& V, int D, int hsigma) {
  const int half = (D + 1) / 2;
  if (V.level < half)
    throw Error(ErrorKind::LevelTooSmall, "hull with D=" + std::to_string(D) + " needs level >= " + std::to_string(half) +
                                              ", base is at level " + std::to_string(V.level));
  Hull h;
  h.base = V;
  h.D = D;
  h.hsigma = hsigma;
  for (int i = 0; i <= half; ++i) {
    HorizontalSet pushed = V.push_down(i, complex.alphabet());
    h.layers.push_back(HorizontalSet{pushed.level, complex.horizontal_ball(pushed.vertices, pushed.level, hsigma)});
  }
  return h;
}

LabelledGraph hull_graph(const Complex& complex, const Hull& h, std::vector<Word>* words) {
  const int d = complex.alphabet();
  LabelledGraph g;
  std::vector<std::unordered_map<VertexIndex, std::uint32_t>> ids(h.layers.size());
  for (std::size_t i = 0; i < h.layers.size(); ++i)
    for (auto v : h.layers[i].vertices) {
      const bool marked = i == 0 && h.base.contains(v);
      ids[i].emplace(v, g.add_vertex(marked ? 1 : 0));
      if (words) words->push_back(word_from_index(v, static_cast<std::size_t>(h.layers[i].level), d));
    }
  for (std::size_t i = 0; i < h.layers.size(); ++i) {
    const int level = h.layers[i].level;
    for (auto v : h.layers[i].vertices) {
      const auto from = ids[i].at(v);
      for (int s = 0; s < complex.generator_count(); ++s) {
        auto it = ids[i].find(complex.neighbor(v, level, s));
        if (it != ids[i].end()) g.add_edge(from, it->second, s);
      }
      if (i + 1 < h.layers.size()) {
        const std::uint64_t mod = level_size(d, static_cast<std::size_t>(level - 1));
        auto it = ids[i + 1].find(v % mod);
        if (it != ids[i + 1].end()) g.add_edge(it->second, from, kVerticalLabel);
      }
    }
  }
  return g;
}

LabelledGraph induced_level_graph(Complex& complex, int level, const std::vector<VertexIndex>& vertices,
                                  const std::vector<VertexIndex>& marked) {
  std::unordered_set<VertexIndex> mark(marked.begin(), marked.end());
  std::unordered_map<VertexIndex, std::uint32_t> ids;
  LabelledGraph g;
  for (auto v : vertices) ids.emplace(v, g.add_vertex(mark.count(v) ? 1 : 0));
  for (auto v : vertices)
    for (int s = 0; s < complex.generator_count(); ++s) {
      auto it = ids.find(complex.neighbor(v, level, s));
      if (it != ids.end()) g.add_edge(ids.at(v), it->second, s);
    }
  return g;
}

std::vector<std::vector<VertexIndex>> level_components(Complex& complex, int level,
                                                       const std::vector<VertexIndex>& vertices) {
  std::unordered_set<VertexIndex> in(vertices.begin(), vertices.end());
  std::unordered_set<VertexIndex> seen;
  std::vector<VertexIndex> sorted(in.begin(), in.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<VertexIndex>> out;
  for (auto start : sorted) {
    if (seen.count(start)) continue;
    std::vector<VertexIndex> comp{start};
    seen.insert(start);
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (int s = 0; s < complex.generator_count(); ++s) {
        auto y = complex.neighbor(comp[head], level, s);
        if (in.count(y) && seen.insert(y).second) comp.push_back(y);
      }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

CanonicalForm cone_type(Complex& complex, const Word& v, int hsigma) {
  const int level = static_cast<int>(v.size());
  const VertexIndex c = word_index(v, complex.alphabet());
  auto ball = complex.horizontal_ball({c}, level, hsigma);
  return canonical_form(induced_level_graph(complex, level, ball, {c}));
}

bool ConeTypeReport::stable(std::size_t window) const {
  if (levels.size() < window + 1) return false;
  for (std::size_t i = levels.size() - window; i < levels.size(); ++i)
    if (!levels[i].new_type_hashes.empty()) return false;
  return true;
}

ConeTypeReport enumerate_cone_types(Complex& complex, int first_level, int last_level, int hsigma,
                                    std::uint64_t max_vertices, std::uint64_t seed) {
  ConeTypeReport report;
  report.hsigma = hsigma;
  std::set<std::string> all;
  std::mt19937_64 rng(seed);
  const int d = complex.alphabet();
  for (int n = first_level; n <= last_level; ++n) {
    ConeTypeLevel row;
    row.level = n;
    const std::uint64_t size = level_size(d, static_cast<std::size_t>(n));
    std::vector<VertexIndex> pick;
    if (size <= max_vertices) {
      pick.resize(size);
      for (std::uint64_t v = 0; v < size; ++v) pick[v] = v;
    } else {
      row.sampled = true;
      std::uniform_int_distribution<std::uint64_t> dist(0, size - 1);
      for (std::uint64_t i = 0; i < max_vertices; ++i) pick.push_back(dist(rng));
    }
    std::set<std::string> here;
    for (auto v : pick) {
      auto form = cone_type(complex, word_from_index(v, static_cast<std::size_t>(n), d), hsigma);
      if (here.insert(form.code).second && all.insert(form.code).second) row.new_type_hashes.push_back(form.hash_hex());
    }
    std::sort(row.new_type_hashes.begin(), row.new_type_hashes.end());
    row.count = here.size();
    row.cumulative = all.size();
    report.levels.push_back(std::move(row));
  }
  return report;
}

CanonicalForm shadow_type(Complex& complex, const HorizontalSet& V, int D, int hsigma) {
  return canonical_form(hull_graph(complex, hull(complex, V, D, hsigma)));
}

std::string hull_dot(const Complex& complex, const Hull& h) {
  std::vector<Word> words;
  LabelledGraph g = hull_graph(complex, h, &words);
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> edges;
  for (const auto& e : g.edges) {
    if (e.label == kVerticalLabel) {
      edges.emplace_back(e.from, e.to, "");
      continue;
    }
    const auto& gen = complex.generators()[static_cast<std::size_t>(e.label)];
    // draw each undirected edge once
    if (gen.inverse < e.label || (gen.inverse == e.label && e.to < e.from)) continue;
    edges.emplace_back(e.from, e.to, gen.name);
  }
  std::vector<std::size_t> marked;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.colors[i] == 1) marked.push_back(i);
  return graph_dot("hull", words, edges, marked);
}

CanonicalForm map_form(const LabelledGraph& src, const LabelledGraph& dst, const std::vector<std::uint32_t>& f) {
  if (f.size() != src.size()) throw Error(ErrorKind::InvalidInput, "map size does not match its source");
  constexpr int kTargetShift = 1 << 16;
  LabelledGraph g = src;
  const auto offset = static_cast<std::uint32_t>(src.size());
  for (int c : dst.colors) g.add_vertex(c + kTargetShift);
  for (const auto& e : dst.edges) g.add_edge(e.from + offset, e.to + offset, e.label);
  for (std::uint32_t i = 0; i < f.size(); ++i) {
    if (f[i] >= dst.size()) throw Error(ErrorKind::InvalidInput, "map image out of range");
    g.add_edge(i, f[i] + offset, kMapLabel);
  }
  return canonical_form(g);
}

}  // namespace sscx

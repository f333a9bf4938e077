#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sscx/canonical.hpp"
#include "sscx/complex.hpp"

namespace sscx {

/// Nonempty set of vertices at one level, stored as sorted unique indices.
struct HorizontalSet {
  int level = 0;
  std::vector<VertexIndex> vertices;

  static HorizontalSet from_words(const std::vector<Word>& words, int alphabet);
  static HorizontalSet from_indices(int level, std::vector<VertexIndex> indices);
  std::vector<Word> words(int alphabet) const;
  bool contains(VertexIndex v) const;
  std::size_t size() const { return vertices.size(); }
  /// V^[-k]: every member pushed down k levels.
  HorizontalSet push_down(int k, int alphabet) const;
};

/// True iff the length-|V| suffix of u lies in V.
bool shadow_contains(const HorizontalSet& V, const Word& u, int alphabet);

/// u in S(V), |u| > |V|, and every horizontal neighbor of u in S(V).
bool umbra_contains(const Complex& complex, const HorizontalSet& V, const Word& u);

/// Members of S(V) at level |V| + depth: y·v for |y| = depth, v in V.
std::vector<Word> shadow_level(const HorizontalSet& V, int depth, int alphabet);

struct Hull {
  HorizontalSet base;
  int D = 0;
  int hsigma = 0;
  std::vector<HorizontalSet> layers;  // layers[i] sits at level |V| - i
};

/// D-hull: layer i is B_hor(V^[-i], HΣ) for i = 0..ceil(D/2).
/// Throws LevelTooSmall when |V| < ceil(D/2).
Hull hull(Complex& complex, const HorizontalSet& V, int D, int hsigma);

/// Induced subcomplex on a hull: horizontal edges labelled by generator index,
/// vertical edges (lower to upper) labelled kVerticalLabel; base vertices get
/// color 1. `words` receives the vertex words in graph order when non-null.
inline constexpr int kVerticalLabel = -1;
inline constexpr int kMapLabel = -2;
LabelledGraph hull_graph(const Complex& complex, const Hull& h, std::vector<Word>* words = nullptr);

/// Induced subgraph of one level on `vertices`, with the listed ones colored 1.
LabelledGraph induced_level_graph(Complex& complex, int level, const std::vector<VertexIndex>& vertices,
                                  const std::vector<VertexIndex>& marked);

/// Connected components of the induced subgraph of a level on `vertices`.
std::vector<std::vector<VertexIndex>> level_components(Complex& complex, int level,
                                                       const std::vector<VertexIndex>& vertices);

/// Pointed type of B_hor(v, HΣ).
CanonicalForm cone_type(Complex& complex, const Word& v, int hsigma);

struct ConeTypeLevel {
  int level = 0;
  std::size_t count = 0;       // distinct types at this level
  std::size_t cumulative = 0;  // distinct types at levels <= this one
  std::vector<std::string> new_type_hashes;
  bool sampled = false;
};

struct ConeTypeReport {
  int hsigma = 0;
  std::vector<ConeTypeLevel> levels;
  /// Zero new types over the last `window` levels.
  bool stable(std::size_t window = 3) const;
};

/// Levels with more than `max_vertices` vertices are sampled (seeded).
ConeTypeReport enumerate_cone_types(Complex& complex, int first_level, int last_level, int hsigma,
                                    std::uint64_t max_vertices = 1u << 14, std::uint64_t seed = 1);

/// Type of Σ(hull(V, D)) with V marked.
CanonicalForm shadow_type(Complex& complex, const HorizontalSet& V, int D, int hsigma);

std::string hull_dot(const Complex& complex, const Hull& h);

/// Canonical form of a graph map f: src -> dst (vertex f[i] of dst for vertex i of src):
/// the disjoint union with dst colors shifted and kMapLabel edges i -> f[i].
CanonicalForm map_form(const LabelledGraph& src, const LabelledGraph& dst, const std::vector<std::uint32_t>& f);

}  // namespace sscx

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sscx/geometry.hpp"

namespace sscx {

/// F deletes the last letter; F^k deletes the last k.
Word shift(const Word& w, int k = 1);
VertexIndex shift(VertexIndex v, int k, int alphabet);

/// {v·w : |w| = k}, sorted by index.
std::vector<Word> vertex_preimages(const Word& v, int k, int alphabet);

struct PullbackComponent {
  std::vector<VertexIndex> vertices;  // component of Σ(F^-k(V)) at level |V| + k
  std::vector<VertexIndex> marked;    // F^-k(base) inside the component
};

/// Components of the induced subgraph on F^-k(V), each with the preimages of
/// `base` it contains (base defaults to V).
std::vector<PullbackComponent> pullback_components(Complex& complex, const HorizontalSet& V, int k,
                                                   const std::vector<VertexIndex>& base = {});

/// Largest horizontal distance between members of a set at one level.
int horizontal_diameter(Complex& complex, int level, const std::vector<VertexIndex>& set);

struct DegreeCell {
  int level = 0;
  int k = 0;
  int max_count = 0;     // max #Ṽ
  int max_diameter = 0;  // max diam_hor Ṽ
  int max_component_diameter = 0;
  std::size_t balls = 0;
  bool bound_holds = true;  // max_diameter < (2r+1)(C+1) with C = max_count
};

struct BoundedDegreeStats {
  int r = 1;
  int C_observed = 0;
  int D_observed = 0;
  int component_diameter = 0;
  std::vector<DegreeCell> cells;
  /// First level from which C (max over k) is constant for 3 consecutive levels, if any.
  std::optional<int> stable_level;
  /// At every level >= stable_level, max_count is the same for all k >= 1.
  bool constant_in_k = false;
};

/// Levels with more than `max_centers` vertices use a seeded sample of centers.
BoundedDegreeStats bounded_degree_stats(Complex& complex, int r, int first_level, int last_level, int first_k,
                                        int last_k, std::uint64_t max_centers = 256, std::uint64_t seed = 1);

struct OrbitResult {
  std::size_t orbit_size = 0;
  std::size_t q = 0;
  std::uint64_t bound = 0;
  int magic_required = 0;  // m((N+1)L)
  bool hypothesis = false; // |v| >= magic_required
  bool pass = true;        // orbit_size <= bound (only asserted under the hypothesis)
};

/// Σ_{i=0}^{e} q^i, saturating.
std::uint64_t geometric_bound(std::uint64_t q, int e);

/// Orbit of v·w under the subgroup generated by Stab(v) ∩ B_G(1, L).
OrbitResult stabilizer_orbit(Group& group, const Word& v, int L, const Word& w);

/// Type of the map F^k: Σ(hull(Ṽ, D)) -> Σ(hull(V, D)). Throws NotAnIterate unless F^k(Ṽ) = V.
CanonicalForm iterate_type(Complex& complex, const HorizontalSet& Vt, const HorizontalSet& V, int k, int D,
                           int hsigma);

/// True iff F^k maps hull(Ṽ) onto hull(V) layer by layer.
bool hull_naturality(Complex& complex, const HorizontalSet& Vt, const HorizontalSet& V, int k, int D, int hsigma);

/// True iff F^k(U(Ṽ)) = U(V) on the levels |V|+1 .. |V|+depth.
bool umbra_naturality(Complex& complex, const HorizontalSet& Vt, const HorizontalSet& V, int k, int depth);

struct DynatlasEntry {
  std::string hash;
  int first_level = 0;
  int first_k = 0;
  int degree = 0;
};

struct DynatlasReport {
  int r = 1;
  int hsigma = 0;
  int D = 0;
  int first_level = 0, last_level = 0, first_k = 0, last_k = 0;
  std::vector<DynatlasEntry> forms;
  std::vector<std::size_t> new_per_k;     // forms first seen at each k (indexed from first_k)
  std::vector<std::size_t> cumulative_per_k;
  int p = 0;
  bool stabilized = false;  // zero new forms over the final 2 values of k
  std::vector<std::string> notes;
};

/// Model maps F^k over components of pullbacks of radius-r ball subcomplexes.
/// D <= 0 selects (2r+1)(C+1), raised when observed component diameters need it.
DynatlasReport build_dynatlas(Complex& complex, int r, int hsigma, int first_level, int last_level, int first_k,
                              int last_k, int D = 0, std::uint64_t max_centers = 64, std::uint64_t seed = 1);

}  // namespace sscx

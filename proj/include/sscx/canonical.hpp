#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sscx {

/// Finite directed graph with integer vertex colors (marks) and integer edge
/// labels. Loops and parallel edges are allowed.
struct LabelledGraph {
  struct Edge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    int label = 0;
  };

  std::vector<int> colors;
  std::vector<Edge> edges;

  std::uint32_t add_vertex(int color = 0) {
    colors.push_back(color);
    return static_cast<std::uint32_t>(colors.size() - 1);
  }
  void add_edge(std::uint32_t from, std::uint32_t to, int label) { edges.push_back({from, to, label}); }
  std::size_t size() const { return colors.size(); }
};

/// Isomorphism-invariant encoding of a labelled graph: equal codes iff the
/// graphs are isomorphic preserving colors and labels.
struct CanonicalForm {
  std::string code;

  std::uint64_t hash() const;
  std::string hash_hex() const;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

struct CanonicalResult {
  CanonicalForm form;
  std::vector<std::uint32_t> labelling;  // vertex -> canonical position
};

/// Color refinement plus individualization with backtracking over the first
/// non-singleton cell; the lexicographically least leaf is the form.
/// Automorphisms found along the way prune equivalent branches.
/// Throws StateCapExceeded when more than `node_budget` search nodes are needed.
CanonicalResult canonical_labelling(const LabelledGraph& g, std::size_t node_budget = 200000);

inline CanonicalForm canonical_form(const LabelledGraph& g) { return canonical_labelling(g).form; }

/// Applies a vertex permutation (old -> new index).
LabelledGraph permute(const LabelledGraph& g, const std::vector<std::uint32_t>& perm);

}  // namespace sscx

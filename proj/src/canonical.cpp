#include "sscx/canonical.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>

#include "sscx/error.hpp"
#include "sscx/word.hpp"

namespace sscx {

namespace {

using Code = std::vector<std::int64_t>;

struct Adjacency {
  // (label, neighbour) lists
  std::vector<std::vector<std::pair<int, std::uint32_t>>> out, in;
};

Adjacency adjacency(const LabelledGraph& g) {
  Adjacency a;
  a.out.resize(g.size());
  a.in.resize(g.size());
  for (const auto& e : g.edges) {
    a.out[e.from].push_back({e.label, e.to});
    a.in[e.to].push_back({e.label, e.from});
  }
  return a;
}

// Refines `color` to the coarsest equitable partition; colors are ranks of
// isomorphism-invariant signatures, so they are canonical.
void refine(const Adjacency& adj, std::vector<int>& color) {
  const std::size_t n = color.size();
  std::size_t classes = 0;
  {
    std::vector<int> tmp(color);
    std::sort(tmp.begin(), tmp.end());
    classes = static_cast<std::size_t>(std::unique(tmp.begin(), tmp.end()) - tmp.begin());
  }
  std::vector<std::vector<std::int64_t>> sig(n);
  for (;;) {
    for (std::size_t v = 0; v < n; ++v) {
      auto& s = sig[v];
      s.clear();
      s.push_back(color[v]);
      std::vector<std::int64_t> nb;
      nb.reserve(adj.out[v].size() + adj.in[v].size());
      for (auto [l, u] : adj.out[v]) nb.push_back((static_cast<std::int64_t>(l) << 33) | (std::int64_t{0} << 32) | color[u]);
      for (auto [l, u] : adj.in[v]) nb.push_back((static_cast<std::int64_t>(l) << 33) | (std::int64_t{1} << 32) | color[u]);
      std::sort(nb.begin(), nb.end());
      s.push_back(static_cast<std::int64_t>(nb.size()));
      s.insert(s.end(), nb.begin(), nb.end());
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sig[a] < sig[b]; });
    std::vector<int> next(n);
    int rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++rank;
      next[order[i]] = rank;
    }
    std::size_t nclasses = n == 0 ? 0 : static_cast<std::size_t>(rank + 1);
    color.swap(next);
    if (nclasses == classes) return;
    classes = nclasses;
  }
}

Code encode(const LabelledGraph& g, const std::vector<int>& pos) {
  const std::size_t n = g.size();
  Code code;
  code.reserve(2 + n + 3 * g.edges.size());
  code.push_back(static_cast<std::int64_t>(n));
  std::vector<int> col(n);
  for (std::size_t v = 0; v < n; ++v) col[static_cast<std::size_t>(pos[v])] = g.colors[v];
  code.insert(code.end(), col.begin(), col.end());
  std::vector<std::tuple<int, int, int>> es;
  es.reserve(g.edges.size());
  for (const auto& e : g.edges) es.emplace_back(pos[e.from], e.label, pos[e.to]);
  std::sort(es.begin(), es.end());
  code.push_back(static_cast<std::int64_t>(es.size()));
  for (auto [a, l, b] : es) {
    code.push_back(a);
    code.push_back(l);
    code.push_back(b);
  }
  return code;
}

struct Search {
  const LabelledGraph& g;
  Adjacency adj;
  std::size_t budget;
  std::size_t nodes = 0;
  std::optional<Code> best;
  std::vector<int> best_pos;
  std::vector<std::vector<std::uint32_t>> automorphisms;

  Search(const LabelledGraph& graph, std::size_t b) : g(graph), adj(adjacency(graph)), budget(b) {}

  // Orbits of `cell` under found automorphisms that fix `prefix` pointwise.
  std::vector<std::uint32_t> orbit_reps(const std::vector<std::uint32_t>& cell,
                                        const std::vector<std::uint32_t>& prefix) const {
    const std::size_t n = g.size();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& a : automorphisms) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](std::uint32_t v) { return a[v] == v; });
      if (!fixes) continue;
      for (std::uint32_t v = 0; v < n; ++v) {
        auto x = find(v), y = find(a[v]);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
      }
    }
    std::vector<std::uint32_t> reps;
    std::vector<char> seen(n, 0);
    for (auto v : cell) {
      auto r = find(v);
      if (!seen[r]) {
        seen[r] = 1;
        reps.push_back(v);
      }
    }
    return reps;
  }

  void run(std::vector<int> color, std::vector<std::uint32_t>& prefix) {
    if (++nodes > budget)
      throw Error(ErrorKind::StateCapExceeded, "canonical form search exceeded " + std::to_string(budget) + " nodes");
    refine(adj, color);
    const std::size_t n = color.size();
    std::vector<int> count(n, 0);
    for (int c : color) ++count[static_cast<std::size_t>(c)];
    int target = -1;
    for (std::size_t c = 0; c < n; ++c)
      if (count[c] > 1) {
        target = static_cast<int>(c);
        break;
      }
    if (target < 0) {
      Code code = encode(g, color);
      if (!best || code < *best) {
        best = std::move(code);
        best_pos = color;
      } else if (code == *best) {
        // two leaves with equal codes differ by an automorphism
        std::vector<std::uint32_t> inv(n), aut(n);
        for (std::uint32_t v = 0; v < n; ++v) inv[static_cast<std::size_t>(best_pos[v])] = v;
        for (std::uint32_t v = 0; v < n; ++v) aut[v] = inv[static_cast<std::size_t>(color[v])];
        automorphisms.push_back(std::move(aut));
      }
      return;
    }
    std::vector<std::uint32_t> cell;
    for (std::uint32_t v = 0; v < n; ++v)
      if (color[v] == target) cell.push_back(v);
    std::vector<char> done(n, 0);
    for (auto v : cell) {
      if (done[v]) continue;
      std::vector<int> next(n);
      for (std::uint32_t u = 0; u < n; ++u) next[u] = 2 * color[u] + ((color[u] == target && u != v) ? 1 : 0);
      prefix.push_back(v);
      run(std::move(next), prefix);
      prefix.pop_back();
      done[v] = 1;
      // skip vertices equivalent to an explored one
      auto reps = orbit_reps(cell, prefix);
      std::vector<char> is_rep(n, 0);
      for (auto r : reps) is_rep[r] = 1;
      for (auto u : cell)
        if (!is_rep[u]) done[u] = 1;
    }
  }
};

std::string code_to_string(const Code& code) {
  std::string s;
  s.reserve(code.size() * 3);
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(code[i]);
  }
  return s;
}

}  // namespace

std::uint64_t CanonicalForm::hash() const { return fnv1a64(code); }
std::string CanonicalForm::hash_hex() const { return hex64(hash()); }

CanonicalResult canonical_labelling(const LabelledGraph& g, std::size_t node_budget) {
  for (const auto& e : g.edges)
    if (e.from >= g.size() || e.to >= g.size()) throw Error(ErrorKind::InvalidInput, "edge endpoint out of range");
  Search search(g, node_budget);
  std::vector<int> color(g.size());
  {
    std::map<int, int> rank;
    for (int c : g.colors) rank.emplace(c, 0);
    int r = 0;
    for (auto& [c, v] : rank) v = r++;
    for (std::size_t v = 0; v < g.size(); ++v) color[v] = rank[g.colors[v]];
  }
  std::vector<std::uint32_t> prefix;
  search.run(std::move(color), prefix);
  CanonicalResult result;
  result.form.code = code_to_string(*search.best);
  result.labelling.assign(search.best_pos.begin(), search.best_pos.end());
  return result;
}

LabelledGraph permute(const LabelledGraph& g, const std::vector<std::uint32_t>& perm) {
  LabelledGraph out;
  out.colors.resize(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) out.colors[perm[v]] = g.colors[v];
  out.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) out.edges.push_back({perm[e.from], perm[e.to], e.label});
  return out;
}

}  // namespace sscx

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "sscx/automaton.hpp"
#include "sscx/word.hpp"

namespace sscx {

/// Vertices of a level are indexed by word_index (leftmost letter most
/// significant), so push_down by k is `index % d^(n-k)`.
using VertexIndex = std::uint64_t;

/// Level-n slice of the selfsimilarity complex. Edge (u, s, u^s) for every
/// generator s of the good generating set.
struct LevelGraph {
  int level = 0;
  int alphabet = 2;
  int generator_count = 0;
  std::vector<std::uint32_t> neighbor;  // [v * generator_count + s]

  std::uint64_t size() const { return neighbor.size() / static_cast<std::size_t>(generator_count ? generator_count : 1); }
  std::uint32_t step(std::uint64_t v, int s) const { return neighbor[v * static_cast<std::uint64_t>(generator_count) + static_cast<std::uint64_t>(s)]; }
  Word vertex(std::uint64_t v) const { return word_from_index(v, static_cast<std::size_t>(level), alphabet); }
  bool connected() const;
  /// BFS distances from v (full level).
  std::vector<int> distances_from(std::uint64_t v) const;
};

struct ComplexOptions {
  std::uint64_t vertex_budget = 2'000'000;  // largest level graph ever materialized
  std::uint64_t matrix_budget = 2048;       // largest level with a cached all-pairs matrix
};

/// Geodesic data for a vertex pair: distance and the horizontal lengths of
/// distance-realizing normal-form geodesics (drop to level l, travel
/// horizontally, climb back).
struct GeodesicInfo {
  int distance = 0;
  int min_level = 0;       // lowest realizing drop level
  int max_level = 0;       // highest realizing drop level
  int horizontal_min = 0;  // horizontal length at min_level
  int horizontal_max = 0;  // horizontal length at max_level
};

struct HSigmaLevel {
  int level = 0;
  int max_horizontal = 0;      // max over pairs of the longest realizing horizontal segment
  int max_min_horizontal = 0;  // max over pairs of the shortest realizing horizontal segment
  bool exhaustive = true;
  std::uint64_t pairs = 0;
};

struct HSigmaEstimate {
  int value = 0;          // cumulative max of max_horizontal
  int min_rule_value = 0; // cumulative max of max_min_horizontal
  bool stabilized = false;
  std::vector<HSigmaLevel> levels;
};

struct DeltaEstimate {
  double delta = 0.0;
  std::size_t samples = 0;
  int max_level = 0;
  std::vector<Word> witness;  // quadruple achieving the max
};

/// Finite view of Σ(G,S) over the good generating set of a group. Level
/// graphs and small all-pairs matrices are cached; larger queries use
/// localized BFS with on-the-fly neighbor computation.
class Complex {
 public:
  explicit Complex(Group& group, ComplexOptions options = {});

  Group& group() const { return group_; }
  int alphabet() const { return d_; }
  const std::vector<GoodGenerator>& generators() const { return gens_; }
  int generator_count() const { return static_cast<int>(gens_.size()); }
  const ComplexOptions& options() const { return options_; }

  /// Throws LevelTooLarge when d^n exceeds the vertex budget.
  std::shared_ptr<const LevelGraph> level_graph(int n);

  /// u^s for the s-th good generator, on words and on indices.
  Word neighbor(const Word& w, int s) const;
  VertexIndex neighbor(VertexIndex v, int level, int s) const;
  std::vector<Word> horizontal_neighbors(const Word& w) const;
  /// Root permutation and first-level restriction (-1 for the identity) of the s-th generator.
  Letter generator_image(int s, Letter x) const { return perm_[static_cast<std::size_t>(s) * static_cast<std::size_t>(d_) + x]; }
  int generator_restriction(int s, Letter x) const { return restrict_[static_cast<std::size_t>(s) * static_cast<std::size_t>(d_) + x]; }

  /// Throws DifferentLevels. With a limit, returns limit+1 when farther.
  int horizontal_distance(const Word& u, const Word& v, int limit = -1);
  int horizontal_distance(VertexIndex u, VertexIndex v, int level, int limit = -1);

  int graph_distance(const Word& u, const Word& v);
  GeodesicInfo geodesic(const Word& u, const Word& v);
  /// Highest drop level of a distance-realizing normal-form geodesic.
  int level_product(const Word& u, const Word& v);
  double gromov_product(const Word& u, const Word& v);

  /// B_hor(V, r): sorted vertex indices at the common level of `centers`.
  std::vector<VertexIndex> horizontal_ball(const std::vector<VertexIndex>& centers, int level, int r);
  std::vector<Word> horizontal_ball(const std::vector<Word>& centers, int r);

  /// All-pairs horizontal distances at level n (row-major), for d^n within matrix_budget.
  std::shared_ptr<const std::vector<std::uint16_t>> distance_matrix(int n);
  bool has_matrix(int n) const;

  HSigmaEstimate estimate_HSigma(int max_level, std::uint64_t seed = 1, std::size_t samples_per_level = 2000);
  DeltaEstimate estimate_delta(std::size_t samples, int max_level, std::uint64_t seed = 1);

  std::string level_dot(int n);
  std::string slice_dot(int max_level);

 private:
  std::shared_ptr<const LevelGraph> level_graph_locked(int n);
  std::shared_ptr<const std::vector<std::uint16_t>> distance_matrix_locked(int n);
  std::uint64_t size_of(int n) const;

  Group& group_;
  ComplexOptions options_;
  int d_;
  std::vector<GoodGenerator> gens_;
  // generator tables over the good set; restriction -1 is the identity
  std::vector<Letter> perm_;   // [s * d + x]
  std::vector<int> restrict_;  // [s * d + x]

  mutable std::mutex mutex_;
  std::map<int, std::shared_ptr<const LevelGraph>> graphs_;
  std::map<int, std::shared_ptr<const std::vector<std::uint16_t>>> matrices_;
};

/// DOT text of a labelled graph on word vertices; an empty edge label
/// draws a dashed (vertical) edge.
std::string graph_dot(const std::string& name, const std::vector<Word>& vertices,
                      const std::vector<std::tuple<std::size_t, std::size_t, std::string>>& edges,
                      const std::vector<std::size_t>& marked = {});

}  // namespace sscx

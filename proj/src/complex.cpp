#include "sscx/complex.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sscx/error.hpp"

namespace sscx {

bool LevelGraph::connected() const {
  if (size() == 0) return true;
  auto dist = distances_from(0);
  return std::none_of(dist.begin(), dist.end(), [](int x) { return x < 0; });
}

std::vector<int> LevelGraph::distances_from(std::uint64_t v) const {
  std::vector<int> dist(size(), -1);
  std::vector<std::uint32_t> queue;
  queue.reserve(size());
  dist[v] = 0;
  queue.push_back(static_cast<std::uint32_t>(v));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto u = queue[head];
    for (int s = 0; s < generator_count; ++s) {
      auto w = step(u, s);
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

Complex::Complex(Group& group, ComplexOptions options)
    : group_(group), options_(options), d_(group.alphabet()), gens_(group.good_generators()) {
  const auto k = gens_.size();
  perm_.resize(k * static_cast<std::size_t>(d_));
  restrict_.resize(k * static_cast<std::size_t>(d_));
  std::unordered_map<ElementId, int> index;
  for (std::size_t s = 0; s < k; ++s) index.emplace(gens_[s].id, static_cast<int>(s));
  for (std::size_t s = 0; s < k; ++s)
    for (int x = 0; x < d_; ++x) {
      const std::size_t at = s * static_cast<std::size_t>(d_) + static_cast<std::size_t>(x);
      perm_[at] = group_.image(gens_[s].id, static_cast<Letter>(x));
      ElementId c = group_.child(gens_[s].id, static_cast<Letter>(x));
      if (c == Group::identity()) {
        restrict_[at] = -1;
      } else {
        auto it = index.find(c);
        if (it == index.end()) throw Error(ErrorKind::InvalidInput, "generating set is not closed under restriction");
        restrict_[at] = it->second;
      }
    }
}

std::uint64_t Complex::size_of(int n) const { return level_size(d_, static_cast<std::size_t>(n)); }

std::shared_ptr<const LevelGraph> Complex::level_graph(int n) {
  std::lock_guard lock(mutex_);
  return level_graph_locked(n);
}

std::shared_ptr<const LevelGraph> Complex::level_graph_locked(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidInput, "negative level");
  if (auto it = graphs_.find(n); it != graphs_.end()) return it->second;
  const std::uint64_t size = size_of(n);
  if (size > options_.vertex_budget)
    throw Error(ErrorKind::LevelTooLarge, "level " + std::to_string(n) + " has " + std::to_string(size) +
                                              " vertices, above the budget of " + std::to_string(options_.vertex_budget));
  auto g = std::make_shared<LevelGraph>();
  g->level = n;
  g->alphabet = d_;
  const int k = generator_count();
  g->generator_count = k;
  g->neighbor.assign(size * static_cast<std::uint64_t>(k), 0);
  if (n > 0) {
    auto lower = level_graph_locked(n - 1);
    const std::uint64_t sub = size / static_cast<std::uint64_t>(d_);
    for (std::uint64_t v = 0; v < size; ++v) {
      const auto x = static_cast<std::size_t>(v / sub);
      const std::uint64_t rest = v % sub;
      for (int s = 0; s < k; ++s) {
        const std::size_t at = static_cast<std::size_t>(s) * static_cast<std::size_t>(d_) + x;
        const int r = restrict_[at];
        const std::uint64_t tail = r < 0 ? rest : lower->step(rest, r);
        g->neighbor[v * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(s)] =
            static_cast<std::uint32_t>(perm_[at] * sub + tail);
      }
    }
  }
  graphs_.emplace(n, g);
  return g;
}

Word Complex::neighbor(const Word& w, int s) const {
  Word out(w.size());
  int cur = s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (cur < 0) {
      std::copy(w.begin() + static_cast<std::ptrdiff_t>(i), w.end(), out.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
    const std::size_t at = static_cast<std::size_t>(cur) * static_cast<std::size_t>(d_) + w[i];
    out[i] = perm_[at];
    cur = restrict_[at];
  }
  return out;
}

VertexIndex Complex::neighbor(VertexIndex v, int level, int s) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = graphs_.find(level); it != graphs_.end()) return it->second->step(v, s);
  }
  return word_index(neighbor(word_from_index(v, static_cast<std::size_t>(level), d_), s), d_);
}

std::vector<Word> Complex::horizontal_neighbors(const Word& w) const {
  std::vector<Word> out;
  out.reserve(gens_.size());
  for (int s = 0; s < generator_count(); ++s) out.push_back(neighbor(w, s));
  return out;
}

bool Complex::has_matrix(int n) const {
  std::lock_guard lock(mutex_);
  return matrices_.count(n) > 0;
}

std::shared_ptr<const std::vector<std::uint16_t>> Complex::distance_matrix(int n) {
  std::lock_guard lock(mutex_);
  return distance_matrix_locked(n);
}

std::shared_ptr<const std::vector<std::uint16_t>> Complex::distance_matrix_locked(int n) {
  if (auto it = matrices_.find(n); it != matrices_.end()) return it->second;
  const std::uint64_t size = size_of(n);
  if (size > options_.matrix_budget)
    throw Error(ErrorKind::LevelTooLarge, "level " + std::to_string(n) + " is above the distance-matrix budget");
  auto g = level_graph_locked(n);
  auto m = std::make_shared<std::vector<std::uint16_t>>(size * size);
  for (std::uint64_t v = 0; v < size; ++v) {
    auto dist = g->distances_from(v);
    for (std::uint64_t u = 0; u < size; ++u) {
      if (dist[u] < 0) throw Error(ErrorKind::InvalidInput, "level graph " + std::to_string(n) + " is disconnected");
      (*m)[v * size + u] = static_cast<std::uint16_t>(dist[u]);
    }
  }
  matrices_.emplace(n, m);
  return m;
}

int Complex::horizontal_distance(const Word& u, const Word& v, int limit) {
  if (u.size() != v.size())
    throw Error(ErrorKind::DifferentLevels, "horizontal distance between levels " + std::to_string(u.size()) + " and " +
                                                std::to_string(v.size()));
  return horizontal_distance(word_index(u, d_), word_index(v, d_), static_cast<int>(u.size()), limit);
}

int Complex::horizontal_distance(VertexIndex u, VertexIndex v, int level, int limit) {
  if (u == v) return 0;
  if (limit == 0) return 1;
  const std::uint64_t size = size_of(level);
  if (size <= options_.matrix_budget) {
    auto m = distance_matrix(level);
    int dist = (*m)[u * size + v];
    return (limit >= 0 && dist > limit) ? limit + 1 : dist;
  }
  std::shared_ptr<const LevelGraph> g;
  {
    std::lock_guard lock(mutex_);
    if (auto it = graphs_.find(level); it != graphs_.end()) g = it->second;
  }
  auto step = [&](VertexIndex x, int s) -> VertexIndex {
    if (g) return g->step(x, s);
    return word_index(neighbor(word_from_index(x, static_cast<std::size_t>(level), d_), s), d_);
  };
  // bidirectional BFS; S is symmetric so both sides expand with the same steps
  std::unordered_map<VertexIndex, int> side_a{{u, 0}}, side_b{{v, 0}};
  std::vector<VertexIndex> front_a{u}, front_b{v};
  int da = 0, db = 0;
  while (!front_a.empty() && !front_b.empty()) {
    if (limit >= 0 && da + db >= limit) return limit + 1;
    const bool expand_a = front_a.size() <= front_b.size();
    auto& front = expand_a ? front_a : front_b;
    auto& mine = expand_a ? side_a : side_b;
    auto& other = expand_a ? side_b : side_a;
    int& depth = expand_a ? da : db;
    ++depth;
    std::vector<VertexIndex> next;
    int best = INT_MAX;
    for (VertexIndex x : front)
      for (int s = 0; s < generator_count(); ++s) {
        VertexIndex y = step(x, s);
        if (mine.count(y)) continue;
        mine.emplace(y, depth);
        if (auto it = other.find(y); it != other.end()) best = std::min(best, depth + it->second);
        next.push_back(y);
      }
    if (best != INT_MAX) return (limit >= 0 && best > limit) ? limit + 1 : best;
    front.swap(next);
  }
  if (limit >= 0) return limit + 1;
  throw Error(ErrorKind::InvalidInput, "vertices lie in different components of level " + std::to_string(level));
}

GeodesicInfo Complex::geodesic(const Word& u, const Word& v) {
  const int a = static_cast<int>(u.size());
  const int b = static_cast<int>(v.size());
  const int m = std::min(a, b);
  std::vector<std::pair<int, int>> totals;  // (level, horizontal)
  int best = a + b;
  totals.push_back({0, 0});
  for (int l = m; l >= 1; --l) {
    const int vertical = (a - l) + (b - l);
    if (vertical > best) break;
    const int h = horizontal_distance(push_down(u, static_cast<std::size_t>(a - l)),
                                      push_down(v, static_cast<std::size_t>(b - l)), best - vertical);
    if (vertical + h <= best) {
      best = vertical + h;
      totals.push_back({l, h});
    }
  }
  GeodesicInfo info;
  info.distance = best;
  info.min_level = INT_MAX;
  info.max_level = -1;
  for (auto [l, h] : totals) {
    if ((a - l) + (b - l) + h != best) continue;
    if (l < info.min_level) {
      info.min_level = l;
      info.horizontal_min = h;
    }
    if (l > info.max_level) {
      info.max_level = l;
      info.horizontal_max = h;
    }
  }
  return info;
}

int Complex::graph_distance(const Word& u, const Word& v) {
  const int a = static_cast<int>(u.size());
  const int b = static_cast<int>(v.size());
  int best = a + b;
  for (int l = std::min(a, b); l >= 1; --l) {
    const int vertical = (a - l) + (b - l);
    if (vertical >= best) break;
    const int h = horizontal_distance(push_down(u, static_cast<std::size_t>(a - l)),
                                      push_down(v, static_cast<std::size_t>(b - l)), best - vertical - 1);
    best = std::min(best, vertical + h);
  }
  return best;
}

int Complex::level_product(const Word& u, const Word& v) { return geodesic(u, v).max_level; }

double Complex::gromov_product(const Word& u, const Word& v) {
  return 0.5 * (static_cast<double>(u.size() + v.size()) - graph_distance(u, v));
}

std::vector<VertexIndex> Complex::horizontal_ball(const std::vector<VertexIndex>& centers, int level, int r) {
  std::unordered_set<VertexIndex> seen(centers.begin(), centers.end());
  std::vector<VertexIndex> front(seen.begin(), seen.end());
  std::shared_ptr<const LevelGraph> g;
  if (size_of(level) <= options_.vertex_budget) g = level_graph(level);
  for (int step = 0; step < r && !front.empty(); ++step) {
    std::vector<VertexIndex> next;
    for (VertexIndex x : front)
      for (int s = 0; s < generator_count(); ++s) {
        VertexIndex y = g ? g->step(x, s) : neighbor(x, level, s);
        if (seen.insert(y).second) next.push_back(y);
      }
    front.swap(next);
  }
  std::vector<VertexIndex> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Word> Complex::horizontal_ball(const std::vector<Word>& centers, int r) {
  if (centers.empty()) return {};
  const auto level = centers.front().size();
  std::vector<VertexIndex> idx;
  for (const auto& c : centers) {
    if (c.size() != level) throw Error(ErrorKind::DifferentLevels, "ball centers at different levels");
    idx.push_back(word_index(c, d_));
  }
  std::vector<Word> out;
  for (auto v : horizontal_ball(idx, static_cast<int>(level), r))
    out.push_back(word_from_index(v, level, d_));
  return out;
}

HSigmaEstimate Complex::estimate_HSigma(int max_level, std::uint64_t seed, std::size_t samples_per_level) {
  HSigmaEstimate est;
  std::mt19937_64 rng(seed);
  for (int n = 0; n <= max_level; ++n) {
    HSigmaLevel row;
    row.level = n;
    const std::uint64_t size = size_of(n);
    if (size <= options_.matrix_budget) {
      std::vector<std::shared_ptr<const std::vector<std::uint16_t>>> mats;
      for (int l = 0; l <= n; ++l) mats.push_back(distance_matrix(l));
      for (std::uint64_t u = 0; u < size; ++u)
        for (std::uint64_t v = u + 1; v < size; ++v) {
          int best = INT_MAX, hmax = 0, hmin = 0;
          std::uint64_t mod = size;
          for (int l = n; l >= 0; --l) {
            const std::uint64_t pu = u % mod, pv = v % mod;
            const int h = (*mats[static_cast<std::size_t>(l)])[pu * mod + pv];
            const int total = 2 * (n - l) + h;
            if (total < best) {
              best = total;
              hmax = h;
              hmin = h;
            } else if (total == best) {
              hmin = h;
            }
            mod /= static_cast<std::uint64_t>(d_);
            if (2 * (n - l + 1) > best) break;
          }
          row.max_horizontal = std::max(row.max_horizontal, hmax);
          row.max_min_horizontal = std::max(row.max_min_horizontal, hmin);
          ++row.pairs;
        }
    } else {
      row.exhaustive = false;
      std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
      for (std::size_t i = 0; i < samples_per_level; ++i) {
        const std::uint64_t u = pick(rng);
        // half the samples are local pairs, where long horizontal segments live
        std::uint64_t v;
        if (i % 2 == 0) {
          v = pick(rng);
        } else {
          v = u;
          const int walk = 1 + static_cast<int>(rng() % 8);
          for (int j = 0; j < walk; ++j) v = neighbor(v, n, static_cast<int>(rng() % gens_.size()));
        }
        auto info = geodesic(word_from_index(u, static_cast<std::size_t>(n), d_),
                             word_from_index(v, static_cast<std::size_t>(n), d_));
        row.max_horizontal = std::max(row.max_horizontal, info.horizontal_max);
        row.max_min_horizontal = std::max(row.max_min_horizontal, info.horizontal_min);
        ++row.pairs;
      }
    }
    est.value = std::max(est.value, row.max_horizontal);
    est.min_rule_value = std::max(est.min_rule_value, row.max_min_horizontal);
    est.levels.push_back(row);
  }
  // stable when the cumulative value did not change over the last 3 levels
  if (est.levels.size() >= 3) {
    int before = 0;
    for (std::size_t i = 0; i + 2 < est.levels.size(); ++i) before = std::max(before, est.levels[i].max_horizontal);
    est.stabilized = before == est.value;
  }
  return est;
}

DeltaEstimate Complex::estimate_delta(std::size_t samples, int max_level, std::uint64_t seed) {
  DeltaEstimate est;
  est.samples = samples;
  est.max_level = max_level;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_level(0, max_level);
  auto random_vertex = [&]() {
    const int n = pick_level(rng);
    Word w(static_cast<std::size_t>(n));
    for (auto& x : w) x = static_cast<Letter>(rng() % static_cast<std::uint64_t>(d_));
    return w;
  };
  for (std::size_t i = 0; i < samples; ++i) {
    Word p[4] = {random_vertex(), random_vertex(), random_vertex(), random_vertex()};
    const double s1 = graph_distance(p[0], p[1]) + graph_distance(p[2], p[3]);
    const double s2 = graph_distance(p[0], p[2]) + graph_distance(p[1], p[3]);
    const double s3 = graph_distance(p[0], p[3]) + graph_distance(p[1], p[2]);
    double s[3] = {s1, s2, s3};
    std::sort(s, s + 3);
    const double defect = (s[2] - s[1]) / 2.0;
    if (defect > est.delta || est.witness.empty()) {
      est.delta = std::max(est.delta, defect);
      est.witness.assign(p, p + 4);
    }
  }
  return est;
}

namespace {

std::string vertex_id(const Word& w) { return w.empty() ? "root" : "v" + format_word(w); }

}  // namespace

std::string graph_dot(const std::string& name, const std::vector<Word>& vertices,
                      const std::vector<std::tuple<std::size_t, std::size_t, std::string>>& edges,
                      const std::vector<std::size_t>& marked) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  std::vector<char> is_marked(vertices.size(), 0);
  for (auto m : marked) is_marked.at(m) = 1;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    out << "  " << vertex_id(vertices[i]) << " [label=\"" << (vertices[i].empty() ? "o" : format_word(vertices[i]))
        << "\"";
    if (is_marked[i]) out << ", style=filled, fillcolor=lightgray";
    out << "];\n";
  }
  for (const auto& [a, b, label] : edges) {
    out << "  " << vertex_id(vertices[a]) << " -> " << vertex_id(vertices[b]);
    if (label.empty())
      out << " [style=dashed, arrowhead=none]";
    else
      out << " [label=\"" << label << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string Complex::level_dot(int n) {
  auto g = level_graph(n);
  std::vector<Word> vertices;
  for (std::uint64_t v = 0; v < g->size(); ++v) vertices.push_back(g->vertex(v));
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> edges;
  for (std::uint64_t v = 0; v < g->size(); ++v)
    for (int s = 0; s < generator_count(); ++s) {
      const int inv = gens_[static_cast<std::size_t>(s)].inverse;
      const std::uint64_t w = g->step(v, s);
      // each undirected edge once: an involution only from its smaller end
      if (inv < s || (inv == s && w < v)) continue;
      edges.emplace_back(v, w, gens_[static_cast<std::size_t>(s)].name);
    }
  return graph_dot("level" + std::to_string(n), vertices, edges);
}

std::string Complex::slice_dot(int max_level) {
  std::vector<Word> vertices;
  std::vector<std::size_t> offset;
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> edges;
  for (int n = 0; n <= max_level; ++n) {
    auto g = level_graph(n);
    offset.push_back(vertices.size());
    for (std::uint64_t v = 0; v < g->size(); ++v) vertices.push_back(g->vertex(v));
    for (std::uint64_t v = 0; v < g->size(); ++v) {
      for (int s = 0; s < generator_count(); ++s) {
        const int inv = gens_[static_cast<std::size_t>(s)].inverse;
        const std::uint64_t w = g->step(v, s);
        if (inv < s || (inv == s && w < v)) continue;
        edges.emplace_back(offset.back() + v, offset.back() + w, gens_[static_cast<std::size_t>(s)].name);
      }
      if (n > 0) edges.emplace_back(offset[static_cast<std::size_t>(n - 1)] + v % (g->size() / static_cast<std::uint64_t>(d_)),
                                    offset.back() + v, "");
    }
  }
  return graph_dot("slice" + std::to_string(max_level), vertices, edges);
}

}  // namespace sscx

#include "sscx/automaton.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <unordered_set>

#include "sscx/error.hpp"

namespace sscx {

namespace {

int symbol_slot(GeneratorSymbol s) { return 2 * s.index + (s.inverted ? 1 : 0); }

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

// --------------------------------------------------------------------------
// WreathRecursion

void WreathRecursion::validate() const {
  if (alphabet < 2 || alphabet > 10)
    throw Error(ErrorKind::InvalidInput, "alphabet size must be in 2..10");
  if (generators.empty()) throw Error(ErrorKind::InvalidInput, "no generators declared");
  std::set<std::string> names;
  for (const auto& g : generators) {
    if (g.name.empty() || g.name.find('~') != std::string::npos)
      throw Error(ErrorKind::InvalidInput, "bad generator name '" + g.name + "'");
    if (!names.insert(g.name).second)
      throw Error(ErrorKind::InvalidInput, "duplicate generator name '" + g.name + "'");
    if (g.perm.size() != static_cast<std::size_t>(alphabet))
      throw Error(ErrorKind::InvalidInput, "generator " + g.name + ": perm has wrong length");
    std::vector<bool> seen(alphabet, false);
    for (Letter y : g.perm) {
      if (y >= alphabet || seen[y])
        throw Error(ErrorKind::InvalidInput, "generator " + g.name + ": perm is not a bijection");
      seen[y] = true;
    }
    if (g.restrictions.size() != static_cast<std::size_t>(alphabet))
      throw Error(ErrorKind::InvalidInput, "generator " + g.name + ": need one restriction per letter");
    for (const auto& w : g.restrictions)
      for (const auto& s : w)
        if (s.index < 0 || s.index >= static_cast<int>(generators.size()))
          throw Error(ErrorKind::InvalidInput, "generator " + g.name + ": undeclared symbol");
  }
}

SymbolWord WreathRecursion::parse_symbols(std::string_view text) const {
  SymbolWord out;
  std::size_t i = 0;
  while (i < text.size()) {
    bool inv = false;
    if (text[i] == '~') {
      inv = true;
      ++i;
    }
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t g = 0; g < generators.size(); ++g) {
      const auto& name = generators[g].name;
      if (name.size() > best_len && text.substr(i, name.size()) == name) {
        best = static_cast<int>(g);
        best_len = name.size();
      }
    }
    if (best < 0)
      throw Error(ErrorKind::InvalidInput, "undeclared generator in '" + std::string(text) + "'");
    out.push_back({best, inv});
    i += best_len;
  }
  return out;
}

std::string WreathRecursion::format_symbols(const SymbolWord& word) const {
  std::string s;
  for (const auto& g : word) {
    if (g.inverted) s.push_back('~');
    s += generators.at(g.index).name;
  }
  return s;
}

bool Nucleus::contains(ElementId id) const {
  return std::binary_search(elements.begin(), elements.end(), id);
}

// --------------------------------------------------------------------------
// Group: construction and formal words

Group::Group(WreathRecursion def, GroupLimits limits)
    : def_(std::move(def)), limits_(limits), d_(def_.alphabet) {
  def_.validate();
  const auto n = def_.generators.size();
  sym_perm_.resize(2 * n);
  sym_restrict_.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = def_.generators[i];
    std::vector<Letter> inv(d_);
    for (int x = 0; x < d_; ++x) inv[g.perm[x]] = static_cast<Letter>(x);
    sym_perm_[2 * i] = g.perm;
    sym_perm_[2 * i + 1] = inv;
    sym_restrict_[2 * i] = g.restrictions;
    sym_restrict_[2 * i + 1].resize(d_);
    // (s^-1)|_y = (s|_{y^{s^-1}})^-1
    for (int y = 0; y < d_; ++y) sym_restrict_[2 * i + 1][y] = inverse_word(g.restrictions[inv[y]]);
  }
  std::lock_guard lock(mutex_);
  PendingState e;
  e.perm.resize(d_);
  for (int x = 0; x < d_; ++x) e.perm[x] = static_cast<Letter>(x);
  e.children.assign(d_, PendingChild{false, 0});
  auto ids = resolve({e});
  (void)ids;
}

SymbolWord Group::reduce(SymbolWord w) const {
  SymbolWord out;
  out.reserve(w.size());
  for (const auto& s : w) {
    if (!out.empty() && out.back().index == s.index && out.back().inverted != s.inverted)
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

SymbolWord Group::inverse_word(const SymbolWord& w) const {
  SymbolWord out(w.rbegin(), w.rend());
  for (auto& s : out) s.inverted = !s.inverted;
  return out;
}

Letter Group::symbol_image(GeneratorSymbol s, Letter x) const { return sym_perm_[symbol_slot(s)][x]; }

const SymbolWord& Group::symbol_restriction(GeneratorSymbol s, Letter x) const {
  return sym_restrict_[symbol_slot(s)][x];
}

Word Group::act(const SymbolWord& g, const Word& w) const {
  // A symbol rewrites the letter at pos, then its restriction word acts on the tail.
  Word cur = w;
  std::function<void(GeneratorSymbol, std::size_t)> apply = [&](GeneratorSymbol s, std::size_t pos) {
    if (pos >= cur.size()) return;
    const Letter x = cur[pos];
    cur[pos] = symbol_image(s, x);
    for (const auto& t : symbol_restriction(s, x)) apply(t, pos + 1);
  };
  for (const auto& s : g) apply(s, 0);
  return cur;
}

SymbolWord Group::restrict_word(const SymbolWord& g, const Word& v) const {
  SymbolWord cur = g;
  for (Letter x0 : v) {
    SymbolWord out;
    Letter x = x0;
    for (const auto& s : cur) {
      const auto& r = symbol_restriction(s, x);
      out.insert(out.end(), r.begin(), r.end());
      x = symbol_image(s, x);
    }
    cur = reduce(std::move(out));
  }
  return cur;
}

// --------------------------------------------------------------------------
// Canonical table

void Group::note_representative(ElementId id, const SymbolWord& w) {
  if (id == identity()) return;
  if (rep_[id].empty() || w.size() < rep_[id].size() || (w.size() == rep_[id].size() && w < rep_[id]))
    rep_[id] = w;
}

std::vector<ElementId> Group::resolve(const std::vector<PendingState>& pending) {
  const std::size_t P = pending.size();
  std::vector<ElementId> known;
  std::unordered_map<ElementId, std::uint32_t> known_index;
  std::deque<ElementId> queue;
  auto add_known = [&](ElementId id) {
    if (known_index.emplace(id, static_cast<std::uint32_t>(P + known.size())).second) {
      known.push_back(id);
      queue.push_back(id);
    }
  };
  for (const auto& st : pending)
    for (const auto& c : st.children)
      if (c.known) add_known(c.index);
  while (!queue.empty()) {
    ElementId id = queue.front();
    queue.pop_front();
    for (int x = 0; x < d_; ++x) add_known(child_[static_cast<std::size_t>(id) * d_ + x]);
  }
  const std::size_t N = P + known.size();
  std::vector<Letter> nperm(N * d_);
  std::vector<std::uint32_t> nchild(N * d_);
  for (std::size_t i = 0; i < P; ++i)
    for (int x = 0; x < d_; ++x) {
      nperm[i * d_ + x] = pending[i].perm[x];
      const auto& c = pending[i].children[x];
      nchild[i * d_ + x] = c.known ? known_index.at(c.index) : c.index;
    }
  for (std::size_t k = 0; k < known.size(); ++k) {
    const std::size_t i = P + k;
    for (int x = 0; x < d_; ++x) {
      nperm[i * d_ + x] = perm_[static_cast<std::size_t>(known[k]) * d_ + x];
      nchild[i * d_ + x] = known_index.at(child_[static_cast<std::size_t>(known[k]) * d_ + x]);
    }
  }

  // Moore partition refinement.
  std::vector<std::uint32_t> cls(N);
  std::size_t num_classes = 0;
  {
    std::map<std::vector<Letter>, std::uint32_t> by_perm;
    for (std::size_t i = 0; i < N; ++i) {
      std::vector<Letter> p(nperm.begin() + i * d_, nperm.begin() + (i + 1) * d_);
      auto [it, fresh] = by_perm.emplace(std::move(p), static_cast<std::uint32_t>(by_perm.size()));
      cls[i] = it->second;
    }
    num_classes = by_perm.size();
  }
  for (;;) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> by_sig;
    std::vector<std::uint32_t> next(N);
    std::vector<std::uint32_t> sig(d_ + 1);
    for (std::size_t i = 0; i < N; ++i) {
      sig[0] = cls[i];
      for (int x = 0; x < d_; ++x) sig[x + 1] = cls[nchild[i * d_ + x]];
      auto [it, fresh] = by_sig.emplace(sig, static_cast<std::uint32_t>(by_sig.size()));
      next[i] = it->second;
    }
    cls.swap(next);
    if (by_sig.size() == num_classes) break;
    num_classes = by_sig.size();
  }

  std::vector<std::int64_t> class_node(num_classes, -1);
  std::vector<std::int64_t> class_known(num_classes, -1);
  for (std::size_t i = 0; i < N; ++i) {
    if (class_node[cls[i]] < 0) class_node[cls[i]] = static_cast<std::int64_t>(i);
    if (i >= P) class_known[cls[i]] = known[i - P];
  }

  std::vector<std::int64_t> class_id(num_classes, -1);
  std::vector<std::uint32_t> fresh_classes;
  std::vector<std::uint32_t> order;
  std::vector<std::int64_t> pos(num_classes, -1);
  for (std::uint32_t c = 0; c < num_classes; ++c) {
    if (class_known[c] >= 0) {
      class_id[c] = class_known[c];
      continue;
    }
    // Breadth-first encoding of the minimal accessible automaton from c.
    order.clear();
    std::vector<std::uint32_t> touched;
    order.push_back(c);
    pos[c] = 0;
    touched.push_back(c);
    std::string key;
    for (std::size_t q = 0; q < order.size(); ++q) {
      const auto node = static_cast<std::size_t>(class_node[order[q]]);
      for (int x = 0; x < d_; ++x) key.push_back(static_cast<char>(nperm[node * d_ + x]));
      for (int x = 0; x < d_; ++x) {
        std::uint32_t cc = cls[nchild[node * d_ + x]];
        if (pos[cc] < 0) {
          pos[cc] = static_cast<std::int64_t>(order.size());
          order.push_back(cc);
          touched.push_back(cc);
        }
        append_u32(key, static_cast<std::uint32_t>(pos[cc]));
      }
    }
    for (auto t : touched) pos[t] = -1;
    auto it = key_to_id_.find(key);
    if (it != key_to_id_.end()) {
      class_id[c] = it->second;
    } else {
      auto id = static_cast<ElementId>(rep_.size());
      if (rep_.size() >= limits_.state_cap * 100)
        throw Error(ErrorKind::StateCapExceeded, "element table exceeded its budget");
      rep_.emplace_back();
      perm_.resize(rep_.size() * d_);
      child_.resize(rep_.size() * d_);
      key_to_id_.emplace(std::move(key), id);
      class_id[c] = id;
      fresh_classes.push_back(c);
    }
  }
  for (auto c : fresh_classes) {
    const auto node = static_cast<std::size_t>(class_node[c]);
    const auto id = static_cast<std::size_t>(class_id[c]);
    for (int x = 0; x < d_; ++x) {
      perm_[id * d_ + x] = nperm[node * d_ + x];
      child_[id * d_ + x] = static_cast<ElementId>(class_id[cls[nchild[node * d_ + x]]]);
    }
  }
  std::vector<ElementId> out(P);
  for (std::size_t i = 0; i < P; ++i) {
    out[i] = static_cast<ElementId>(class_id[cls[i]]);
    note_representative(out[i], pending[i].rep);
  }
  return out;
}

ElementId Group::intern_word_locked(const SymbolWord& reduced) {
  if (reduced.empty()) return identity();
  if (auto it = word_cache_.find(reduced); it != word_cache_.end()) return it->second;

  std::vector<PendingState> pending;
  std::map<SymbolWord, std::uint32_t> index;
  std::vector<SymbolWord> words;
  auto add = [&](const SymbolWord& w) -> std::uint32_t {
    if (pending.size() >= limits_.state_cap)
      throw Error(ErrorKind::StateCapExceeded,
                  "restriction closure exceeded " + std::to_string(limits_.state_cap) + " states");
    auto i = static_cast<std::uint32_t>(pending.size());
    index.emplace(w, i);
    words.push_back(w);
    pending.push_back(PendingState{{}, {}, w});
    return i;
  };
  add(reduced);
  for (std::size_t q = 0; q < pending.size(); ++q) {
    const SymbolWord w = words[q];
    std::vector<Letter> perm(d_);
    std::vector<PendingChild> children(d_);
    for (int x0 = 0; x0 < d_; ++x0) {
      Letter x = static_cast<Letter>(x0);
      SymbolWord out;
      for (const auto& s : w) {
        const auto& r = symbol_restriction(s, x);
        out.insert(out.end(), r.begin(), r.end());
        x = symbol_image(s, x);
      }
      perm[x0] = x;
      out = reduce(std::move(out));
      if (out.empty()) {
        children[x0] = {true, identity()};
      } else if (auto it = word_cache_.find(out); it != word_cache_.end()) {
        children[x0] = {true, it->second};
      } else if (auto jt = index.find(out); jt != index.end()) {
        children[x0] = {false, jt->second};
      } else {
        children[x0] = {false, add(out)};
      }
    }
    pending[q].perm = std::move(perm);
    pending[q].children = std::move(children);
  }
  auto ids = resolve(pending);
  for (std::size_t i = 0; i < words.size(); ++i) word_cache_.emplace(words[i], ids[i]);
  return ids[0];
}

ElementId Group::multiply_locked(ElementId g, ElementId h) {
  if (g == identity()) return h;
  if (h == identity()) return g;
  auto pair_key = [](ElementId a, ElementId b) { return (static_cast<std::uint64_t>(a) << 32) | b; };
  if (auto it = mul_cache_.find(pair_key(g, h)); it != mul_cache_.end()) return it->second;

  std::vector<PendingState> pending;
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  std::vector<std::uint64_t> pairs;
  auto add = [&](ElementId a, ElementId b) -> std::uint32_t {
    if (pending.size() >= limits_.state_cap)
      throw Error(ErrorKind::StateCapExceeded,
                  "product closure exceeded " + std::to_string(limits_.state_cap) + " states");
    auto i = static_cast<std::uint32_t>(pending.size());
    index.emplace(pair_key(a, b), i);
    pairs.push_back(pair_key(a, b));
    SymbolWord rep = rep_[a];
    rep.insert(rep.end(), rep_[b].begin(), rep_[b].end());
    pending.push_back(PendingState{{}, {}, reduce(std::move(rep))});
    return i;
  };
  add(g, h);
  for (std::size_t q = 0; q < pending.size(); ++q) {
    const auto a = static_cast<ElementId>(pairs[q] >> 32);
    const auto b = static_cast<ElementId>(pairs[q] & 0xffffffffu);
    std::vector<Letter> perm(d_);
    std::vector<PendingChild> children(d_);
    for (int x = 0; x < d_; ++x) {
      const Letter xa = perm_[static_cast<std::size_t>(a) * d_ + x];
      perm[x] = perm_[static_cast<std::size_t>(b) * d_ + xa];
      const ElementId ca = child_[static_cast<std::size_t>(a) * d_ + x];
      const ElementId cb = child_[static_cast<std::size_t>(b) * d_ + xa];
      if (ca == identity()) {
        children[x] = {true, cb};
      } else if (cb == identity()) {
        children[x] = {true, ca};
      } else if (auto it = mul_cache_.find(pair_key(ca, cb)); it != mul_cache_.end()) {
        children[x] = {true, it->second};
      } else if (auto jt = index.find(pair_key(ca, cb)); jt != index.end()) {
        children[x] = {false, jt->second};
      } else {
        children[x] = {false, add(ca, cb)};
      }
    }
    pending[q].perm = std::move(perm);
    pending[q].children = std::move(children);
  }
  auto ids = resolve(pending);
  for (std::size_t i = 0; i < pairs.size(); ++i) mul_cache_.emplace(pairs[i], ids[i]);
  return ids[0];
}

ElementId Group::inverse_locked(ElementId g) {
  if (g == identity()) return g;
  if (auto it = inv_cache_.find(g); it != inv_cache_.end()) return it->second;
  std::vector<PendingState> pending;
  std::unordered_map<ElementId, std::uint32_t> index;
  std::vector<ElementId> sources;
  auto add = [&](ElementId a) -> std::uint32_t {
    auto i = static_cast<std::uint32_t>(pending.size());
    index.emplace(a, i);
    sources.push_back(a);
    pending.push_back(PendingState{{}, {}, inverse_word(rep_[a])});
    return i;
  };
  add(g);
  for (std::size_t q = 0; q < pending.size(); ++q) {
    const ElementId a = sources[q];
    std::vector<Letter> inv(d_);
    for (int x = 0; x < d_; ++x) inv[perm_[static_cast<std::size_t>(a) * d_ + x]] = static_cast<Letter>(x);
    std::vector<PendingChild> children(d_);
    for (int y = 0; y < d_; ++y) {
      const ElementId c = child_[static_cast<std::size_t>(a) * d_ + inv[y]];
      if (c == identity()) {
        children[y] = {true, identity()};
      } else if (auto it = inv_cache_.find(c); it != inv_cache_.end()) {
        children[y] = {true, it->second};
      } else if (auto jt = index.find(c); jt != index.end()) {
        children[y] = {false, jt->second};
      } else {
        children[y] = {false, add(c)};
      }
    }
    pending[q].perm = std::move(inv);
    pending[q].children = std::move(children);
  }
  auto ids = resolve(pending);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    inv_cache_.emplace(sources[i], ids[i]);
    inv_cache_.emplace(ids[i], sources[i]);
  }
  return ids[0];
}

Element Group::element(const SymbolWord& w) {
  auto r = reduce(w);
  ElementId id = id_of(r);
  return Element{std::move(r), id};
}

ElementId Group::id_of(const SymbolWord& w) {
  for (const auto& s : w)
    if (s.index < 0 || s.index >= static_cast<int>(def_.generators.size()))
      throw Error(ErrorKind::InvalidInput, "undeclared generator symbol");
  std::lock_guard lock(mutex_);
  return intern_word_locked(reduce(w));
}

ElementId Group::generator(int index, bool inverted) { return id_of(SymbolWord{{index, inverted}}); }

ElementId Group::multiply(ElementId g, ElementId h) {
  std::lock_guard lock(mutex_);
  return multiply_locked(g, h);
}

ElementId Group::inverse(ElementId g) {
  std::lock_guard lock(mutex_);
  return inverse_locked(g);
}

bool Group::equal(const SymbolWord& g, const SymbolWord& h) { return id_of(g) == id_of(h); }

Word Group::act(ElementId g, const Word& w) const {
  std::lock_guard lock(mutex_);
  Word out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::size_t base = static_cast<std::size_t>(g) * d_ + w[i];
    out[i] = perm_[base];
    g = child_[base];
  }
  return out;
}

Letter Group::image(ElementId g, Letter x) const {
  std::lock_guard lock(mutex_);
  return perm_[static_cast<std::size_t>(g) * d_ + x];
}

ElementId Group::child(ElementId g, Letter x) const {
  std::lock_guard lock(mutex_);
  return child_[static_cast<std::size_t>(g) * d_ + x];
}

ElementId Group::restrict(ElementId g, const Word& v) const {
  std::lock_guard lock(mutex_);
  for (Letter x : v) g = child_[static_cast<std::size_t>(g) * d_ + x];
  return g;
}

bool Group::fixes_root_letters(ElementId g) const {
  std::lock_guard lock(mutex_);
  for (int x = 0; x < d_; ++x)
    if (perm_[static_cast<std::size_t>(g) * d_ + x] != x) return false;
  return true;
}

const SymbolWord& Group::representative(ElementId g) const {
  std::lock_guard lock(mutex_);
  return rep_.at(g);
}

std::string Group::describe(ElementId g) const {
  if (g == identity()) return "e";
  return def_.format_symbols(representative(g));
}

std::size_t Group::table_size() const {
  std::lock_guard lock(mutex_);
  return rep_.size();
}

// --------------------------------------------------------------------------
// Closures and nucleus

std::vector<ElementId> Group::restriction_closure_locked(std::vector<ElementId> seeds) const {
  std::unordered_set<ElementId> seen(seeds.begin(), seeds.end());
  std::vector<ElementId> out;
  std::deque<ElementId> queue(seeds.begin(), seeds.end());
  while (!queue.empty()) {
    ElementId g = queue.front();
    queue.pop_front();
    out.push_back(g);
    for (int x = 0; x < d_; ++x) {
      ElementId c = child_[static_cast<std::size_t>(g) * d_ + x];
      if (seen.insert(c).second) queue.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ElementId> Group::close_under_restrictions(std::vector<ElementId> seeds) {
  std::lock_guard lock(mutex_);
  auto out = restriction_closure_locked(std::move(seeds));
  if (out.size() > limits_.state_cap)
    throw Error(ErrorKind::StateCapExceeded, "restriction closure exceeded the state cap");
  return out;
}

std::vector<ElementId> Group::cyclic_closure_locked(const std::vector<ElementId>& seeds) {
  const auto reach = restriction_closure_locked(seeds);
  std::unordered_map<ElementId, std::uint32_t> idx;
  for (std::size_t i = 0; i < reach.size(); ++i) idx.emplace(reach[i], static_cast<std::uint32_t>(i));
  const std::size_t n = reach.size();
  // Iterative Tarjan SCC over the restriction graph.
  std::vector<std::int64_t> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false), cyclic(n, false);
  std::vector<std::uint32_t> stack;
  std::int64_t counter = 0;
  struct Frame {
    std::uint32_t v;
    int next;
  };
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& f = call.back();
      if (f.next < d_) {
        const auto w = idx.at(child_[static_cast<std::size_t>(reach[f.v]) * d_ + f.next]);
        ++f.next;
        if (w == f.v) cyclic[w] = true;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const auto v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> comp;
        for (;;) {
          auto w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
          if (w == v) break;
        }
        if (comp.size() > 1)
          for (auto w : comp) cyclic[w] = true;
      }
    }
  }
  std::vector<ElementId> cyc;
  for (std::size_t i = 0; i < n; ++i)
    if (cyclic[i]) cyc.push_back(reach[i]);
  return restriction_closure_locked(std::move(cyc));
}

const Nucleus& Group::compute_nucleus(int max_rounds) {
  std::lock_guard lock(mutex_);
  if (nucleus_) return *nucleus_;
  std::vector<ElementId> seeds{identity()};
  for (std::size_t i = 0; i < def_.generators.size(); ++i) {
    seeds.push_back(intern_word_locked(reduce(SymbolWord{{static_cast<int>(i), false}})));
    seeds.push_back(intern_word_locked(reduce(SymbolWord{{static_cast<int>(i), true}})));
  }
  auto base = restriction_closure_locked(seeds);
  std::set<ElementId> current;
  for (auto g : cyclic_closure_locked(base)) current.insert(g);
  current.insert(identity());
  for (int round = 0; round < max_rounds; ++round) {
    std::set<ElementId> next = current;
    const std::vector<ElementId> members(current.begin(), current.end());
    for (auto g : members)
      for (auto h : members)
        for (auto c : cyclic_closure_locked({multiply_locked(g, h)})) {
          next.insert(c);
          if (next.size() > limits_.nucleus_cap)
            throw Error(ErrorKind::NotContractingWithinBound,
                        "nucleus candidates exceeded " + std::to_string(limits_.nucleus_cap) + " in round " +
                            std::to_string(round + 1));
        }
    if (next.size() == current.size()) {
      nucleus_ = Nucleus{std::vector<ElementId>(current.begin(), current.end())};
      return *nucleus_;
    }
    current = std::move(next);
  }
  throw Error(ErrorKind::NotContractingWithinBound,
              "nucleus fixpoint not reached in " + std::to_string(max_rounds) + " rounds (" +
                  std::to_string(current.size()) + " candidate elements)");
}

const Nucleus& Group::nucleus() { return compute_nucleus(limits_.max_rounds); }

int Group::magic_level_of(ElementId g) {
  const Nucleus& n = nucleus();
  std::lock_guard lock(mutex_);
  std::unordered_set<ElementId> active;
  std::function<int(ElementId)> level = [&](ElementId h) -> int {
    if (n.contains(h)) return 0;
    if (auto it = magic_cache_.find(h); it != magic_cache_.end()) return it->second;
    if (!active.insert(h).second)
      throw Error(ErrorKind::NotContractingWithinBound,
                  "element " + describe(h) + " has a restriction cycle outside the nucleus");
    int m = 0;
    for (int x = 0; x < d_; ++x) m = std::max(m, level(child_[static_cast<std::size_t>(h) * d_ + x]));
    active.erase(h);
    magic_cache_.emplace(h, m + 1);
    return m + 1;
  };
  return level(g);
}

// --------------------------------------------------------------------------
// Good generating set and balls

void Group::ensure_good_generators_locked() {
  if (good_ready_) return;
  const Nucleus& nuc = compute_nucleus(limits_.max_rounds);
  std::vector<ElementId> ids;
  std::vector<std::string> names;
  std::unordered_set<ElementId> present{identity()};
  auto add = [&](ElementId id, std::string name) {
    if (present.insert(id).second) {
      ids.push_back(id);
      names.push_back(std::move(name));
    }
  };
  for (std::size_t i = 0; i < def_.generators.size(); ++i) {
    const auto& name = def_.generators[i].name;
    add(intern_word_locked(SymbolWord{{static_cast<int>(i), false}}), name);
    add(intern_word_locked(SymbolWord{{static_cast<int>(i), true}}), "~" + name);
  }
  for (;;) {
    const std::size_t before = ids.size();
    for (std::size_t k = 0; k < ids.size(); ++k)
      for (int x = 0; x < d_; ++x) {
        ElementId c = child_[static_cast<std::size_t>(ids[k]) * d_ + x];
        if (!present.count(c)) add(c, describe(c));
      }
    for (ElementId g : nuc.elements)
      if (!present.count(g)) add(g, describe(g));
    for (std::size_t k = 0; k < ids.size(); ++k) {
      ElementId inv = inverse_locked(ids[k]);
      if (!present.count(inv)) add(inv, describe(inv));
    }
    if (ids.size() == before) break;
  }
  good_.clear();
  for (std::size_t k = 0; k < ids.size(); ++k) good_.push_back(GoodGenerator{names[k], ids[k], 0});
  for (auto& g : good_) {
    ElementId inv = inverse_locked(g.id);
    for (std::size_t k = 0; k < good_.size(); ++k)
      if (good_[k].id == inv) g.inverse = static_cast<int>(k);
  }
  good_ready_ = true;
}

const std::vector<GoodGenerator>& Group::good_generators() {
  std::lock_guard lock(mutex_);
  ensure_good_generators_locked();
  return good_;
}

void Group::extend_ball_locked(int L) {
  ensure_good_generators_locked();
  if (ball_layers_.empty()) {
    ball_layers_.push_back({identity()});
    ball_norm_.emplace(identity(), 0);
  }
  while (static_cast<int>(ball_layers_.size()) <= L) {
    const int k = static_cast<int>(ball_layers_.size());
    std::vector<ElementId> sphere;
    for (ElementId g : ball_layers_.back())
      for (const auto& s : good_) {
        ElementId p = multiply_locked(g, s.id);
        if (ball_norm_.emplace(p, k).second) sphere.push_back(p);
      }
    if (ball_norm_.size() > limits_.ball_cap)
      throw Error(ErrorKind::StateCapExceeded,
                  "group ball of radius " + std::to_string(k) + " exceeds " + std::to_string(limits_.ball_cap));
    ball_layers_.push_back(std::move(sphere));
  }
}

std::vector<BallEntry> Group::group_ball(int L) {
  std::lock_guard lock(mutex_);
  extend_ball_locked(std::max(L, 0));
  std::vector<BallEntry> out;
  for (int k = 0; k <= L; ++k)
    for (ElementId g : ball_layers_[k]) out.push_back({g, k});
  return out;
}

std::optional<int> Group::norm(ElementId g, int max_norm) {
  std::lock_guard lock(mutex_);
  for (int k = 0; k <= max_norm; ++k) {
    extend_ball_locked(k);
    if (auto it = ball_norm_.find(g); it != ball_norm_.end()) return it->second;
  }
  return std::nullopt;
}

int Group::magic_level(int L) {
  if (L <= 0) return 0;
  {
    std::lock_guard lock(mutex_);
    if (auto it = magic_level_cache_.find(L); it != magic_level_cache_.end()) return it->second;
  }
  int m = 0;
  for (const auto& e : group_ball(L)) m = std::max(m, magic_level_of(e.id));
  std::lock_guard lock(mutex_);
  magic_level_cache_[L] = m;
  return m;
}

std::string Group::definition_hash() const {
  std::string text = std::to_string(def_.alphabet) + "|";
  for (const auto& g : def_.generators) {
    text += g.name + ":";
    for (Letter y : g.perm) text += std::to_string(y) + ",";
    for (const auto& r : g.restrictions) text += def_.format_symbols(r) + ";";
    text += "|";
  }
  return hex64(fnv1a64(text));
}

}  // namespace sscx

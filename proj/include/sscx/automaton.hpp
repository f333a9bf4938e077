#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sscx/word.hpp"

namespace sscx {

struct GeneratorSymbol {
  int index = 0;
  bool inverted = false;

  friend bool operator==(const GeneratorSymbol&, const GeneratorSymbol&) = default;
  friend auto operator<=>(const GeneratorSymbol&, const GeneratorSymbol&) = default;
};

using SymbolWord = std::vector<GeneratorSymbol>;

struct GeneratorDef {
  std::string name;
  std::vector<Letter> perm;                // image of each letter
  std::vector<SymbolWord> restrictions;    // g|_x for each letter x
};

/// The defining data of a selfsimilar group: for each positive generator,
/// its action on the first letter and its restrictions. Inverses are
/// synthesized by `Group`.
struct WreathRecursion {
  int alphabet = 2;
  std::vector<GeneratorDef> generators;

  /// Throws InvalidInput when a perm is not a bijection of 0..d-1, a
  /// restriction list has the wrong length, or a symbol is undeclared.
  void validate() const;

  /// Parses "a~bc" style restriction words against the declared names
  /// (greedy longest match, "~" marks an inverse).
  SymbolWord parse_symbols(std::string_view text) const;
  std::string format_symbols(const SymbolWord& word) const;
};

using ElementId = std::uint32_t;

/// A group element: a representative word plus its canonical id. Two
/// elements are equal iff their ids are equal; the word is informational.
struct Element {
  SymbolWord word;
  ElementId id = 0;
};

/// Generator of the good generating set S used by the complex: symmetric,
/// closed under restriction, and containing the nucleus.
struct GoodGenerator {
  std::string name;
  ElementId id = 0;
  int inverse = 0;  // index of the inverse within the good set
};

struct Nucleus {
  std::vector<ElementId> elements;  // sorted by id; contains the identity
  std::size_t size() const { return elements.size(); }
  bool contains(ElementId id) const;
};

struct BallEntry {
  ElementId id = 0;
  int norm = 0;
};

struct GroupLimits {
  std::size_t state_cap = 100000;
  int max_rounds = 50;
  std::size_t nucleus_cap = 2000;  // candidate set size at which contraction is abandoned
  std::size_t ball_cap = 2000000;
};

/// Contracting selfsimilar group with a canonicalizing element table.
///
/// Every element ever touched is interned as a state of one global minimal
/// Mealy automaton: an id carries its root permutation and the ids of its
/// first-level restrictions. New elements are resolved by building their
/// (finite) restriction closure, minimizing it by partition refinement, and
/// keying each state by a breadth-first encoding of its minimal accessible
/// automaton. Equal keys are equal group elements, since a minimal initial
/// Mealy automaton determines its transducer function up to isomorphism.
///
/// Not thread-safe for concurrent mutation; all public mutating calls take
/// an internal lock so shared read-dominated use is safe.
class Group {
 public:
  explicit Group(WreathRecursion def, GroupLimits limits = {});

  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  int alphabet() const { return def_.alphabet; }
  const WreathRecursion& definition() const { return def_; }
  const GroupLimits& limits() const { return limits_; }
  void set_limits(GroupLimits limits) { limits_ = limits; }

  static constexpr ElementId identity() { return 0; }

  // --- formal word layer -------------------------------------------------
  SymbolWord reduce(SymbolWord w) const;
  SymbolWord inverse_word(const SymbolWord& w) const;
  Letter symbol_image(GeneratorSymbol s, Letter x) const;
  const SymbolWord& symbol_restriction(GeneratorSymbol s, Letter x) const;
  /// w^g computed symbol by symbol (right action: act(gh, w) = act(h, act(g, w))).
  Word act(const SymbolWord& g, const Word& w) const;
  /// g|_v as a formally reduced word.
  SymbolWord restrict_word(const SymbolWord& g, const Word& v) const;

  // --- canonical element layer -------------------------------------------
  Element element(const SymbolWord& w);
  ElementId id_of(const SymbolWord& w);
  ElementId generator(int index, bool inverted = false);
  ElementId multiply(ElementId g, ElementId h);
  ElementId inverse(ElementId g);
  bool equal(const SymbolWord& g, const SymbolWord& h);

  Word act(ElementId g, const Word& w) const;
  Letter image(ElementId g, Letter x) const;
  ElementId restrict(ElementId g, const Word& v) const;
  ElementId child(ElementId g, Letter x) const;
  bool fixes_root_letters(ElementId g) const;
  /// Shortest representative word seen so far.
  const SymbolWord& representative(ElementId g) const;
  std::string describe(ElementId g) const;
  std::size_t table_size() const;

  /// Smallest superset closed under restriction by every letter.
  std::vector<ElementId> close_under_restrictions(std::vector<ElementId> seeds);

  /// Fixpoint nucleus computation; cached after the first success.
  const Nucleus& compute_nucleus(int max_rounds);
  const Nucleus& nucleus();

  /// Depth beyond which every restriction of g lies in the nucleus.
  int magic_level_of(ElementId g);
  /// m(L) = max m(g) over ||g||_S <= L, with S the good generating set.
  int magic_level(int L);

  /// Distinct elements of word norm <= L, breadth-first, with their norms.
  std::vector<BallEntry> group_ball(int L);
  /// Word norm with respect to the good generating set (searches the ball up to max_norm).
  std::optional<int> norm(ElementId g, int max_norm);

  const std::vector<GoodGenerator>& good_generators();

  /// FNV-1a hash of the defining recursion, stable across runs.
  std::string definition_hash() const;

 private:
  struct PendingChild {
    bool known = false;
    std::uint32_t index = 0;  // pending index or known id
  };
  struct PendingState {
    std::vector<Letter> perm;
    std::vector<PendingChild> children;
    SymbolWord rep;
  };

  std::vector<ElementId> resolve(const std::vector<PendingState>& pending);
  ElementId intern_word_locked(const SymbolWord& reduced);
  ElementId multiply_locked(ElementId g, ElementId h);
  ElementId inverse_locked(ElementId g);
  std::vector<ElementId> cyclic_closure_locked(const std::vector<ElementId>& seeds);
  std::vector<ElementId> restriction_closure_locked(std::vector<ElementId> seeds) const;
  void note_representative(ElementId id, const SymbolWord& w);
  void ensure_good_generators_locked();
  void extend_ball_locked(int L);

  WreathRecursion def_;
  GroupLimits limits_;
  int d_;

  std::vector<std::vector<Letter>> sym_perm_;          // [2*i + inv][x]
  std::vector<std::vector<SymbolWord>> sym_restrict_;  // [2*i + inv][x]

  // canonical table
  std::vector<Letter> perm_;        // id*d + x
  std::vector<ElementId> child_;    // id*d + x
  std::vector<SymbolWord> rep_;
  std::unordered_map<std::string, ElementId> key_to_id_;

  std::map<SymbolWord, ElementId> word_cache_;
  std::unordered_map<std::uint64_t, ElementId> mul_cache_;
  std::unordered_map<ElementId, ElementId> inv_cache_;

  std::optional<Nucleus> nucleus_;
  std::vector<GoodGenerator> good_;
  bool good_ready_ = false;

  std::vector<std::vector<ElementId>> ball_layers_;  // spheres
  std::unordered_map<ElementId, int> ball_norm_;
  std::unordered_map<ElementId, int> magic_cache_;
  std::map<int, int> magic_level_cache_;

  mutable std::recursive_mutex mutex_;
};

}  // namespace sscx

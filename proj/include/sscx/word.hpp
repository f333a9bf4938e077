#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sscx {

using Letter = std::uint8_t;

/// A vertex of the tree X^*. Index 0 is the leftmost letter; the group acts
/// on the leftmost letter first and vertical edges prepend letters.
using Word = std::vector<Letter>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ w.size();
    for (Letter x : w) {
      h ^= x;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Parses digits "0110" into a word; throws InvalidInput on a letter >= d.
Word parse_word(std::string_view text, int alphabet);
std::string format_word(const Word& w);

/// Drops the first k letters (the vertex k levels below w).
Word push_down(const Word& w, std::size_t k);

/// Index of w among X^n in lexicographic order (leftmost letter most significant).
std::uint64_t word_index(const Word& w, int alphabet);
Word word_from_index(std::uint64_t index, std::size_t length, int alphabet);

/// d^n, or UINT64_MAX on overflow.
std::uint64_t level_size(int alphabet, std::size_t level);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace sscx

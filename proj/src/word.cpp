#include "sscx/word.hpp"

#include <cstdio>
#include <limits>

#include "sscx/error.hpp"

namespace sscx {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::StateCapExceeded: return "StateCapExceeded";
    case ErrorKind::NotContractingWithinBound: return "NotContractingWithinBound";
    case ErrorKind::LevelTooLarge: return "LevelTooLarge";
    case ErrorKind::LevelTooSmall: return "LevelTooSmall";
    case ErrorKind::DifferentLevels: return "DifferentLevels";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::NotAnIterate: return "NotAnIterate";
    case ErrorKind::UndecidedEquivalence: return "UndecidedEquivalence";
    case ErrorKind::NotStabilized: return "NotStabilized";
    case ErrorKind::ZeroInradius: return "ZeroInradius";
  }
  return "Unknown";
}

Word parse_word(std::string_view text, int alphabet) {
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    int x = c - '0';
    if (c < '0' || c > '9' || x >= alphabet)
      throw Error(ErrorKind::InvalidInput, "bad letter '" + std::string(1, c) + "' in word");
    w.push_back(static_cast<Letter>(x));
  }
  return w;
}

std::string format_word(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter x : w) s.push_back(static_cast<char>('0' + x));
  return s;
}

Word push_down(const Word& w, std::size_t k) {
  if (k > w.size())
    throw Error(ErrorKind::KTooLarge, "cannot push " + format_word(w) + " down " + std::to_string(k) + " levels");
  return Word(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
}

std::uint64_t word_index(const Word& w, int alphabet) {
  std::uint64_t i = 0;
  for (Letter x : w) i = i * static_cast<std::uint64_t>(alphabet) + x;
  return i;
}

Word word_from_index(std::uint64_t index, std::size_t length, int alphabet) {
  Word w(length);
  for (std::size_t j = length; j-- > 0;) {
    w[j] = static_cast<Letter>(index % static_cast<std::uint64_t>(alphabet));
    index /= static_cast<std::uint64_t>(alphabet);
  }
  return w;
}

std::uint64_t level_size(int alphabet, std::size_t level) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < level; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(alphabet))
      return std::numeric_limits<std::uint64_t>::max();
    n *= static_cast<std::uint64_t>(alphabet);
  }
  return n;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace sscx

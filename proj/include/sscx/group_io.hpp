#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sscx/automaton.hpp"

namespace sscx {

/// Group definition JSON:
///   {"alphabet": d, "generators": [{"name": "a", "perm": [...], "restrictions": ["", "a", ...]}]}
/// Restriction words concatenate generator names, "~a" is a^-1, "" is the identity.
WreathRecursion parse_group_json(std::string_view text);
WreathRecursion load_group_file(const std::string& path);
std::string group_to_json(const WreathRecursion& def);

struct BuiltinGroup {
  std::string name;
  WreathRecursion recursion;
  std::string notes;
};

/// One of "odometer", "grigorchuk", "basilica"; throws UnknownName otherwise.
BuiltinGroup builtin_group(std::string_view name);
std::vector<std::string> builtin_names();
/// The JSON text shipped for a builtin (identical to data/groups/<name>.json).
std::string_view builtin_json(std::string_view name);

}  // namespace sscx

#include "sscx/group_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sscx/error.hpp"

namespace sscx {

namespace {

#include "builtin_groups.inc"

struct BuiltinEntry {
  std::string_view name;
  std::string_view json;
};

constexpr BuiltinEntry kBuiltins[] = {
    {"odometer", kOdometerJson},
    {"grigorchuk", kGrigorchukJson},
    {"basilica", kBasilicaJson},
};

}  // namespace

WreathRecursion parse_group_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("group file is not valid JSON: ") + e.what());
  }
  WreathRecursion def;
  try {
    def.alphabet = j.at("alphabet").get<int>();
    for (const auto& g : j.at("generators")) {
      GeneratorDef gen;
      gen.name = g.at("name").get<std::string>();
      for (int y : g.at("perm")) {
        if (y < 0 || y > 255) throw Error(ErrorKind::InvalidInput, "perm entry out of range");
        gen.perm.push_back(static_cast<Letter>(y));
      }
      def.generators.push_back(std::move(gen));
    }
    // Names must all be known before restriction words can be parsed.
    std::size_t i = 0;
    for (const auto& g : j.at("generators")) {
      for (const auto& r : g.at("restrictions"))
        def.generators[i].restrictions.push_back(def.parse_symbols(r.get<std::string>()));
      ++i;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed group definition: ") + e.what());
  }
  def.validate();
  return def;
}

WreathRecursion load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open group file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group_json(ss.str());
}

std::string group_to_json(const WreathRecursion& def) {
  nlohmann::json j;
  j["alphabet"] = def.alphabet;
  j["generators"] = nlohmann::json::array();
  for (const auto& g : def.generators) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& w : g.restrictions) r.push_back(def.format_symbols(w));
    std::vector<int> perm(g.perm.begin(), g.perm.end());
    j["generators"].push_back({{"name", g.name}, {"perm", perm}, {"restrictions", r}});
  }
  return j.dump(2);
}

std::string_view builtin_json(std::string_view name) {
  for (const auto& b : kBuiltins)
    if (b.name == name) return b.json;
  throw Error(ErrorKind::UnknownName, "no builtin group named '" + std::string(name) + "'");
}

BuiltinGroup builtin_group(std::string_view name) {
  const auto text = builtin_json(name);
  auto j = nlohmann::json::parse(text);
  return BuiltinGroup{std::string(name), parse_group_json(text), j.value("notes", std::string{})};
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& b : kBuiltins) out.emplace_back(b.name);
  return out;
}

}  // namespace sscx

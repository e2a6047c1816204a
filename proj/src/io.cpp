#include "ergmlab/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ergmlab/errors.hpp"
#include "json.hpp"

namespace ergmlab::io {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<int> trailing_int(const std::string& name, const std::string& prefix) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
    return std::nullopt;
  }
  const auto digits = name.substr(prefix.size());
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  return std::stoi(digits);
}

}  // namespace

Template parse_template(std::istream& in) {
  std::string keyword;
  int v = 0;
  if (!(in >> keyword >> v) || keyword != "v") {
    throw ConfigError("template text must start with 'v <count>'");
  }
  std::vector<std::pair<int, int>> edges;
  int a = 0;
  int b = 0;
  while (in >> a) {
    if (!(in >> b)) throw ConfigError("template edge line needs two vertices");
    edges.emplace_back(a - 1, b - 1);
  }
  if (!in.eof()) throw ConfigError("unreadable token in template text");
  try {
    return Template(v, std::move(edges));
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("invalid template: ") + e.what());
  }
}

Template parse_template(const std::string& text) {
  std::istringstream in(text);
  return parse_template(in);
}

std::string format_template(const Template& t) {
  std::ostringstream out;
  out << "v " << t.vertices() << '\n';
  for (const auto& [a, b] : t.edges()) out << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

Template resolve_template(const std::string& name) {
  if (name == "edge") return Template::edge();
  if (name == "two-star" || name == "2star" || name == "twostar") return Template::two_star();
  if (name == "triangle" || name == "tri") return Template::triangle();
  try {
    if (auto k = trailing_int(name, "path")) return Template::path(*k);
    if (auto k = trailing_int(name, "cycle")) return Template::cycle(*k);
    if (auto k = trailing_int(name, "star")) return Template::star(*k);
    if (auto k = trailing_int(name, "clique")) return Template::clique(*k);
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("invalid template name: ") + e.what());
  }
  return parse_template(read_file(name));
}

std::string format_graph(const EdgeGraph& g) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t slots = g.pair_slots();
  std::string hex;
  hex.reserve((slots + 3) / 4);
  const auto bits = g.bits();
  for (std::size_t k = 0; k < slots; k += 4) {
    unsigned digit = 0;
    for (std::size_t t = 0; t < 4 && k + t < slots; ++t) {
      const std::size_t idx = k + t;
      digit |= static_cast<unsigned>((bits[idx >> 6] >> (idx & 63)) & 1U) << t;
    }
    hex.push_back(kDigits[digit]);
  }
  return "n " + std::to_string(g.n()) + "\n" + hex + "\n";
}

EdgeGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string keyword;
  int n = 0;
  if (!(in >> keyword >> n) || keyword != "n" || n < 0) {
    throw ConfigError("graph text must start with 'n <count>'");
  }
  std::string hex;
  in >> hex;
  const std::size_t slots = pair_count(n);
  if (hex.size() != (slots + 3) / 4) {
    throw ConfigError("graph hex has " + std::to_string(hex.size()) + " digits, expected " +
                      std::to_string((slots + 3) / 4));
  }
  EdgeGraph g(n);
  for (std::size_t k = 0; k < hex.size(); ++k) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[k])));
    unsigned digit = 0;
    if (c >= '0' && c <= '9') {
      digit = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      digit = static_cast<unsigned>(c - 'a' + 10);
    } else {
      throw ConfigError("invalid hex digit in graph text");
    }
    for (std::size_t t = 0; t < 4; ++t) {
      if (!((digit >> t) & 1U)) continue;
      const std::size_t idx = 4 * k + t;
      if (idx >= slots) throw ConfigError("graph hex padding bits must be zero");
      g.set(EdgeId::from_index(n, idx), true);
    }
  }
  return g;
}

SpecFile parse_spec_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("spec is not valid JSON: ") + e.what());
  }
  try {
    std::vector<double> betas = j.at("betas").get<std::vector<double>>();
    std::vector<Template> templates;
    for (const auto& t : j.at("templates")) {
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : t.at("edges")) {
        edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
      }
      templates.emplace_back(t.at("v").get<int>(), std::move(edges));
    }
    const bool allow = j.value("allow_nonpositive", false);
    std::optional<int> n;
    if (j.contains("n")) n = j.at("n").get<int>();
    return SpecFile{ErgmSpec(std::move(betas), std::move(templates), allow), n};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed spec: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("invalid spec: ") + e.what());
  }
}

SpecFile load_spec_file(const std::string& path) { return parse_spec_json(read_file(path)); }

std::string format_spec_json(const ErgmSpec& spec, std::optional<int> n) {
  nlohmann::json j;
  if (n) j["n"] = *n;
  j["betas"] = spec.betas();
  j["templates"] = nlohmann::json::array();
  for (const auto& t : spec.templates()) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : t.edges()) edges.push_back({a + 1, b + 1});
    j["templates"].push_back({{"v", t.vertices()}, {"edges", edges}});
  }
  if (spec.allows_nonpositive()) j["allow_nonpositive"] = true;
  return j.dump(2);
}

}  // namespace ergmlab::io

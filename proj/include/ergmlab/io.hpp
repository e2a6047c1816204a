#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ergmlab/graph.hpp"
#include "ergmlab/model.hpp"

namespace ergmlab::io {

// Template text: "v <count>" then one "i j" pair per line, 1-based.
Template parse_template(std::istream& in);
Template parse_template(const std::string& text);
std::string format_template(const Template& t);

/// Built-in names (edge, two-star, 2star, triangle, tri, path<k>, cycle<k>,
/// star<k>, clique<k>) or a path to a template text file.
Template resolve_template(const std::string& name_or_path);

// Graph text: "n <count>" then the indicator bits as hex in canonical pair
// order. Hex digit k holds pairs 4k..4k+3, pair 4k in the least significant
// bit; the final digit is zero-padded.
std::string format_graph(const EdgeGraph& g);
EdgeGraph parse_graph(const std::string& text);

struct SpecFile {
  ErgmSpec spec;
  std::optional<int> n;
};

/// JSON: {"n": int, "betas": [...], "templates": [{"v": int, "edges": [[i,j],...]}, ...]}
/// with 1-based template vertices. Optional "allow_nonpositive": bool.
SpecFile parse_spec_json(const std::string& text);
SpecFile load_spec_file(const std::string& path);
std::string format_spec_json(const ErgmSpec& spec, std::optional<int> n);

}  // namespace ergmlab::io

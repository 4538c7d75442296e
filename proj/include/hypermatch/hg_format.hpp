#pragma once

#include <string>
#include <string_view>

#include "hypermatch/core.hpp"

namespace hypermatch {

// .hg text format:
//   r n m
//   v1 v2 ... vr      (m lines, strictly increasing ids)
// Lines starting with '#' are comments. The file must end with a newline.

Hypergraph parse_hg(std::string_view text);
std::string serialize_hg(const Hypergraph& h);

Hypergraph read_hg_file(const std::string& path);
void write_hg_file(const std::string& path, const Hypergraph& h);

}  // namespace hypermatch

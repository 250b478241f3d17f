#pragma once

#include <string>

#include "pearlforge/pc.hpp"

namespace pf {

// Line-oriented text format:
//   p <prime>
//   n <rank>
//   weights w1 ... wn
//   powers            (followed by n exponent vectors, one per line)
//   commutators       (followed by "j i : v1 ... vn" lines, 1-based, j > i)
//   end
// '#' starts a comment. Omitted commutators are trivial.
PcPresentation parse_presentation(const std::string& text);
std::string format_presentation(const PcPresentation& G);

PcPresentation load_presentation(const std::string& path);
void save_presentation(const PcPresentation& G, const std::string& path);

// Parse, validate and run the consistency check; throws on any failure.
PcPresentation load_checked(const std::string& path);

}  // namespace pf

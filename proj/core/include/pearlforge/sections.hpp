#pragma once

#include <vector>

#include "pearlforge/subgroups.hpp"

namespace pf {

// H as a group in its own right: generators are H's canonical igs, weights 1..m.
struct InducedSection {
  Subgroup H;
  PcPresentation pres;
  Elem to_section(const PcPresentation& G, const Elem& g) const;  // g must lie in H
  Elem from_section(const PcPresentation& G, const Elem& h) const;
  Subgroup subgroup_to_section(const PcPresentation& G, const Subgroup& K) const;  // K <= H
  Subgroup subgroup_from_section(const PcPresentation& G, const Subgroup& K) const;
};

InducedSection induced_section(const PcPresentation& G, const Subgroup& H);

// G/N for N normal in G: generators are the pc generators of G at the
// non-pivot depths of N, with G's weights.
struct QuotientSection {
  Subgroup N;
  std::vector<int> keep;  // depths of G kept, ascending
  PcPresentation pres;
  Elem to_section(const PcPresentation& G, const Elem& g) const;
  Elem lift(const PcPresentation& G, const Elem& q) const;  // canonical preimage
  Subgroup image(const PcPresentation& G, const Subgroup& K) const;
  Subgroup preimage(const PcPresentation& G, const Subgroup& K) const;
};

QuotientSection quotient_section(const PcPresentation& G, const Subgroup& N);

}  // namespace pf

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pearlforge/series.hpp"

namespace pf {

enum class PearlKind { abelian, extraspecial };

inline const char* kind_name(PearlKind k) { return k == PearlKind::abelian ? "abelian" : "extraspecial"; }

struct PearlCandidate {
  Subgroup E;
  PearlKind kind = PearlKind::abelian;
  int epsilon = 0;  // 0 abelian, 1 extraspecial
  Elem witness{};   // order p, outside gamma_1 and C_S(Z_2)
};

// Order-p elements x outside gamma_1 and C_S(Z_2): <x>Z(S) and <x>Z_2(S).
// Empty for |S| < p^4 (see order_p3_candidates). Sorted by (kind, subgroup).
// Throws StateError if a returned subgroup violates a candidate invariant.
std::vector<PearlCandidate> find_pearl_candidates(const PcPresentation& G, const SeriesData& sd);

// For S = p^{1+2}_+: the p+1 maximal subgroups, all C_p x C_p.
std::vector<PearlCandidate> order_p3_candidates(const PcPresentation& G);

// One representative per S-conjugacy class (first in sort order), sizes alongside.
struct CandidateClass {
  PearlCandidate rep;
  uint64_t size = 0;
};
std::vector<CandidateClass> candidate_classes(const PcPresentation& G, const std::vector<PearlCandidate>& c);

struct TowerReport {
  std::vector<Subgroup> tower;    // N^0 = E < ... < N^m = S
  std::vector<uint64_t> indices;  // [N^i : N^{i-1}], i = 1..m
  int m = 0;
  Subgroup top_maximal;           // N^{m-1}
  // H-series data in P = S/Phi(E), pulled back to S. H[0] unused; H[i], i = 1..m.
  bool h_series_applicable = false;    // [P : E/Phi(E)] >= p^2
  std::vector<Subgroup> H;
  std::vector<int> class_in_quotient;  // class of N^i(E)/Phi(E)
  uint64_t overgroups_found = 0;
  uint64_t invariant_chain_found = 0;  // invariant-chain scan
  std::vector<FactCheck> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Builds the tower and runs the tower instance checks. Budget covers the
// overgroup and invariant-chain scans; exceeding it throws BudgetExceeded.
TowerReport normalizer_tower(const PcPresentation& G, const SeriesData& sd, const PearlCandidate& E,
                             uint64_t budget = kDefaultBudget);

// Checks across candidates:
//  - same kind, Q <= top_maximal: Q is S-conjugate to E
//  - same kind, different classes: the H_m agree (vacuous with one class)
//  - different kinds, same top maximal subgroup: P is S-conjugate to N^1(E)
struct CrossTowerReport {
  std::vector<FactCheck> checks;
  bool single_class_per_kind = true;
  uint64_t pairs = 0;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};
CrossTowerReport cross_tower_checks(const PcPresentation& G, const SeriesData& sd,
                                    const std::vector<PearlCandidate>& cands,
                                    uint64_t budget = kDefaultBudget);

enum class ScanReason {
  not_proper,
  not_centric,
  frattini_commutator,
  stabilized_chain,
  max_class_not_pearl,
  inside_extraspecial_gamma1,
  cs_z2_shape,
  lower_term_bound,
};
const char* reason_name(ScanReason r);

enum class ScanLabel { pearl, gamma1, cs_z2_family, other };
const char* label_name(ScanLabel l);

struct ScanEntry {
  Subgroup E;
  uint64_t class_size = 1;
  std::vector<ScanReason> rejected;  // empty for survivors
  ScanLabel label = ScanLabel::other;
  bool survives() const { return rejected.empty(); }
};

struct ScanReport {
  std::vector<ScanEntry> entries;  // S-classes of subgroups containing Z(S)
  uint64_t budget_used = 0;
  std::vector<ScanEntry> survivors() const;
};

// Subgroups not containing Z(S) are never centric and are not listed.
ScanReport essential_candidate_scan(const PcPresentation& G, const SeriesData& sd,
                                    uint64_t budget = kDefaultBudget);

}  // namespace pf

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pearlforge/subgroups.hpp"

namespace pf {

// Lower series is stored with S first: lower[0] = S, lower[k] = gamma_{k+1}
// for k >= 1, so gamma_i = lower[i-1] for i >= 2 and the last entry is 1.
// The two-step centralizer takes the slot gamma_1 in accessors.
struct SeriesData {
  std::vector<Subgroup> lower;
  std::vector<Subgroup> zeta;  // zeta[0] = 1, zeta[i] = Z_i(S)
  int nilpotency_class = 0;
  bool is_maximal_class = false;
  std::optional<Subgroup> gamma1;
  std::optional<Subgroup> cs_z2;
  std::optional<int> degree_of_commutativity;
  std::vector<Subgroup> omega_chain;  // Omega_0(gamma_1) = 1 < Omega_1 < ... = gamma_1
  std::vector<Subgroup> agemo;        // agemo[i] = gamma_i^p for i = 1..n (agemo[0] = S^p)

  // gamma_i for i >= 1 (i = 1 needs gamma1), trivial past the end
  Subgroup gamma(const PcPresentation& G, int i) const;
  // Z_i for i >= 0
  Subgroup Z(const PcPresentation& G, int i) const;
};

SeriesData central_series(const PcPresentation& G);

// Fills gamma1 = C_S(gamma_2/gamma_4) and cs_z2 = C_S(Z_2).
// Throws Undefined when |S| <= p^3 and Unsupported when S is not of maximal class.
void two_step_centralizers(const PcPresentation& G, SeriesData& sd);

int degree_of_commutativity(const PcPresentation& G, SeriesData& sd);

struct OmegaAgemoReport {
  std::vector<std::string> checks;  // human-readable verdict lines
  bool ok = true;
};
OmegaAgemoReport omega_agemo_chains(const PcPresentation& G, SeriesData& sd);

// Exhaustive over the elements of H.
uint64_t exponent_of(const PcPresentation& G, const Subgroup& H);

// All of the above in one go for a maximal-class input; tolerant of p^3.
SeriesData analyze_series(const PcPresentation& G);

struct FactCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct MaxClassFactsReport {
  bool applicable = true;
  std::string note;
  bool exhaustive = false;  // every subgroup class scanned
  int maximal_subgroups_of_maximal_class = 0;
  std::vector<FactCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};
MaxClassFactsReport verify_maximal_class_facts(const PcPresentation& G, SeriesData& sd,
                                               uint64_t budget = kDefaultBudget);

}  // namespace pf

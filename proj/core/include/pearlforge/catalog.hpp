#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pearlforge/pc.hpp"
#include "pearlforge/subgroups.hpp"

namespace pf {

struct CatalogEntry {
  std::string label;
  PcPresentation pres;
  std::string provenance;  // "explicit-construction" or "derived-by-search"
  std::string claim;
  std::string file;  // relative to the catalog directory, empty if not on disk
  // explicit entries: builder name and prime; derived entries: constraint JSON
  std::string builder;
  int builder_p = 0;
  std::string constraints;
  std::string note;  // free text, e.g. external database ids (unverified)
};

// p^{1+2}_+ of exponent p: [g2, g1] = g3.
PcPresentation extraspecial_plus(int p);
// C_p acting on GF(p)^3 by a single Jordan block.
PcPresentation sp4_sylow(int p);
// C_3 wr C_3 in the basis e1, (1,2,0), (1,1,1) of the base group.
PcPresentation wreath_3();
// C_p acting by multiplication with a primitive p-th root of unity on Z[w]/(w-1)^m.
PcPresentation cyclotomic(int p, int m);

CatalogEntry build_named(const std::string& name, int p);
CatalogEntry build_cyclotomic(int p, int m);

// Catalog directory: $PEARLFORGE_CATALOG, else the build-time default.
std::string catalog_dir();
// Loading re-verifies each entry: explicit ones against their builder, derived
// ones against their constraints. Throws StateError on a mismatch.
std::vector<CatalogEntry> load_catalog(const std::string& dir = catalog_dir(), bool verify = true);
CatalogEntry load_catalog_entry(const std::string& label, const std::string& dir = catalog_dir(),
                                bool verify = true);
// Same check as on load; empty string when the entry holds up.
std::string verify_entry(const CatalogEntry& e);
void write_catalog(const std::string& dir, const std::vector<CatalogEntry>& entries);

enum class Tri { any, yes, no };

struct FamilyConstraints {
  int p = 0;
  int n = 0;
  // maximal class is implied; a different requested class gives an empty family
  std::optional<int> nilpotency_class;
  std::optional<uint64_t> exponent;
  enum class Gamma1 { any, abelian, nonabelian, extraspecial } gamma1 = Gamma1::any;
  Tri cs_z2_abelian = Tri::any;
  Tri derived_elementary_abelian = Tri::any;
  Tri maximal_elementary_abelian = Tri::any;  // some maximal subgroup is elementary abelian
  Tri maximal_extraspecial = Tri::any;        // some maximal subgroup is extraspecial
  Tri maximal_abelian = Tri::any;             // some maximal subgroup is abelian
  Tri pearl_candidates = Tri::any;            // find_pearl_candidates is non-empty
  Tri pearl_delta = Tri::any;                 // some candidate admits a delta for the default lambda
  std::optional<int> sectional_rank;

  std::string to_json() const;
  static FamilyConstraints from_json(const std::string& text);  // throws ParseError
  std::string describe() const;
};

struct FamilyLevelStat {
  int order_exp = 0;
  size_t parents = 0;
  size_t children = 0;  // maximal-class extensions before classification
  size_t classes = 0;   // isomorphism classes kept after inherited predicates
};

struct FamilyResult {
  std::vector<CatalogEntry> classes;
  std::vector<FamilyLevelStat> levels;
  uint64_t budget_used = 0;
};

// Budget counts parameter points and relation evaluations; exceeding it throws
// BudgetExceeded and no count is reported. shuffle_seed permutes the internal
// processing order (output must not depend on it).
FamilyResult derive_family(const FamilyConstraints& c, uint64_t budget = 200'000'000,
                           uint64_t shuffle_seed = 0);

// Whether G satisfies every predicate in c (G must have order p^n, maximal class).
bool satisfies(const PcPresentation& G, const FamilyConstraints& c, std::string* why = nullptr);

}  // namespace pf

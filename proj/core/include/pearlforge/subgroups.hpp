#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pearlforge/pc.hpp"

namespace pf {

constexpr uint64_t kDefaultBudget = 10'000'000;

// Canonical induced generating sequence: one generator per pivot depth,
// ascending, leading exponent 1, zero at every other pivot position.
class Subgroup {
 public:
  Subgroup() = default;

  const std::vector<Elem>& gens() const { return gens_; }
  int size_exp() const { return static_cast<int>(gens_.size()); }
  uint32_t pivot_mask() const { return mask_; }
  bool has_pivot(int d) const { return (mask_ >> d) & 1u; }
  // index into gens() of the pivot at depth d, or -1
  int slot(int d) const { return slot_[d]; }

  bool operator==(const Subgroup& o) const { return gens_ == o.gens_; }
  bool operator!=(const Subgroup& o) const { return gens_ != o.gens_; }
  bool operator<(const Subgroup& o) const;

  // x <- residue of x after left sifting; returns true iff x is now identity
  bool sift(const PcPresentation& G, Elem& x) const;
  bool contains(const PcPresentation& G, const Elem& x) const;
  // Right-multiplies x by subgroup elements so x is zero at every pivot.
  Elem reduce_right(const PcPresentation& G, const Elem& x) const;
  // exponents of x in the induced basis; x must be a member
  std::vector<int> coords(const PcPresentation& G, const Elem& x) const;
  Elem from_coords(const PcPresentation& G, const std::vector<int>& c) const;
  const Elem& gen_pow(int i, int a) const { return (*pow_)[i][a]; }
  const Elem& gen_negpow(int i, int a) const { return (*negpow_)[i][a]; }

 private:
  friend Subgroup make_subgroup_from_igs(const PcPresentation&, std::vector<Elem>);
  std::vector<Elem> gens_;
  uint32_t mask_ = 0;
  std::array<int8_t, kMaxGens> slot_{};
  // negpow_[i][a] = gens_[i]^(-a); pow_[i][a] = gens_[i]^a
  std::shared_ptr<const std::vector<std::vector<Elem>>> negpow_, pow_;
};

struct SubgroupHash {
  size_t operator()(const Subgroup& H) const noexcept;
};

// Builds the canonical form from an echelon list (distinct depths, any
// leading coefficients). Callers guarantee the list spans a subgroup.
Subgroup make_subgroup_from_igs(const PcPresentation& G, std::vector<Elem> igs);

Subgroup trivial_subgroup(const PcPresentation& G);
Subgroup whole_group(const PcPresentation& G);
// G_d = <g_d, ..., g_n> (0-based d)
Subgroup pc_tail(const PcPresentation& G, int d);

Subgroup span(const PcPresentation& G, const std::vector<Elem>& elems);
Subgroup join(const PcPresentation& G, const Subgroup& A, const Subgroup& B);
Subgroup join(const PcPresentation& G, const Subgroup& A, const std::vector<Elem>& extra);
Subgroup conjugate(const PcPresentation& G, const Subgroup& H, const Elem& g);
Subgroup normal_closure(const PcPresentation& G, const Subgroup& H, const Subgroup& K);
Subgroup commutator_subgroup(const PcPresentation& G, const Subgroup& A, const Subgroup& B);
Subgroup intersection(const PcPresentation& G, const Subgroup& A, const Subgroup& B);

bool is_subgroup_of(const PcPresentation& G, const Subgroup& A, const Subgroup& B);
bool normalizes(const PcPresentation& G, const Elem& g, const Subgroup& H);
bool is_normal_in(const PcPresentation& G, const Subgroup& H, const Subgroup& K);
bool is_abelian(const PcPresentation& G, const Subgroup& H);

// {s in K : [x, s] in N for all x in X}. Everything lives inside `ambient`
// (default: the whole group) and N must be normal in it.
Subgroup centralizer_mod(const PcPresentation& G, const Subgroup& K, const std::vector<Elem>& X,
                         const Subgroup& N, const Subgroup* ambient = nullptr);
Subgroup centralizer(const PcPresentation& G, const Subgroup& K, const std::vector<Elem>& X);
Subgroup centralizer(const PcPresentation& G, const Subgroup& K, const Subgroup& X);
Subgroup center(const PcPresentation& G, const Subgroup& H);

struct OrbitResult {
  std::vector<Subgroup> orbit;
  std::vector<Elem> transversal;  // orbit[i] = H^transversal[i]
  Subgroup stabilizer;
};
// Conjugation orbit of H under K, with the stabilizer N_K(H).
OrbitResult subgroup_orbit(const PcPresentation& G, const Subgroup& K, const Subgroup& H,
                           uint64_t* budget_used = nullptr, uint64_t budget = UINT64_MAX);
Subgroup normalizer(const PcPresentation& G, const Subgroup& K, const Subgroup& H);
// some g in K with A^g = B
std::optional<Elem> find_conjugator(const PcPresentation& G, const Subgroup& K, const Subgroup& A,
                                    const Subgroup& B);

std::vector<Elem> elements(const PcPresentation& G, const Subgroup& H);
// canonical right-coset representatives of H in K (x with zeros at H pivots)
std::vector<Elem> right_transversal(const PcPresentation& G, const Subgroup& K, const Subgroup& H);

uint64_t subgroup_order(const PcPresentation& G, const Subgroup& H);

struct SubgroupProfile {
  Subgroup frattini;
  int d = 0;  // minimal number of generators
  bool elementary_abelian = false;
  bool extraspecial = false;
  bool abelian = false;
  uint64_t exponent = 1;
};

Subgroup frattini(const PcPresentation& G, const Subgroup& H);
int generator_rank(const PcPresentation& G, const Subgroup& H);
uint64_t subgroup_exponent(const PcPresentation& G, const Subgroup& H);
SubgroupProfile profile(const PcPresentation& G, const Subgroup& H);
// class of H as a group (length of its own lower central series)
int nilpotency_class(const PcPresentation& G, const Subgroup& H);
std::vector<Subgroup> lower_central_series_of(const PcPresentation& G, const Subgroup& H);
std::vector<Subgroup> upper_central_series_of(const PcPresentation& G, const Subgroup& H);

struct SubgroupClass {
  Subgroup rep;
  Subgroup normalizer;  // N_S(rep)
  uint64_t class_size = 1;
};

// All subgroups of S up to S-conjugacy, canonically sorted.
// Budget counts subgroup nodes visited (class representatives plus orbit
// members touched); exceeding it throws BudgetExceeded.
std::vector<SubgroupClass> subgroup_classes(const PcPresentation& G, uint64_t budget = kDefaultBudget,
                                            uint64_t* used = nullptr);

// All subgroups of order p^k, deduplicated, sorted lexicographically.
std::vector<Subgroup> enumerate_subgroups(const PcPresentation& G, int k, uint64_t budget = kDefaultBudget);
std::vector<Subgroup> all_subgroups(const PcPresentation& G, uint64_t budget = kDefaultBudget);

struct RankReport {
  int k = 0;
  Subgroup witness;
  bool exact = false;
  std::vector<std::string> scanned;  // families scanned in lower-bound mode
  uint64_t budget_used = 0;
};
RankReport sectional_rank(const PcPresentation& G, uint64_t budget = kDefaultBudget);

std::string subgroup_to_string(const PcPresentation& G, const Subgroup& H);

}  // namespace pf

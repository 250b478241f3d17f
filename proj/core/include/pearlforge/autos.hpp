#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pearlforge/sections.hpp"
#include "pearlforge/series.hpp"

namespace pf {

using Mat2 = std::array<int, 4>;  // row-major 2x2 over GF(p)

// Images of the pc generators. Applying to g = prod g_i^{e_i} gives prod image_i^{e_i}.
struct Automorphism {
  std::vector<Elem> images;
  std::optional<bool> is_inner;

  Elem apply(const PcPresentation& G, const Elem& g) const;
  bool operator==(const Automorphism& o) const { return images == o.images; }
};

Automorphism identity_automorphism(const PcPresentation& G);
// x -> g^-1 x g
Automorphism inner_automorphism(const PcPresentation& G, const Elem& g);
// apply a first, then b
Automorphism compose(const PcPresentation& G, const Automorphism& a, const Automorphism& b);
Automorphism inverse(const PcPresentation& G, const Automorphism& a);
uint64_t automorphism_order(const PcPresentation& G, const Automorphism& a);
// relations preserved and images generate G
bool is_automorphism(const PcPresentation& G, const Automorphism& a);
// relations of A hold for the given images in B and the images generate B
bool is_isomorphism(const PcPresentation& A, const PcPresentation& B, const std::vector<Elem>& images);
Subgroup image_of(const PcPresentation& G, const Automorphism& a, const Subgroup& H);

// Normalized bases of a maximal-class group. A basis is (x, s_1, s_2, ..., s_{n-1})
// with s_k = [s_{k-1}, x]; x lies outside gamma_1 and C_S(Z_2) and s_1 lies in
// gamma_1 \ gamma_2 (for n = 3: any x, s_1 spanning S/Phi). Every element has a
// unique expression x^e0 s_1^e1 ... s_{n-1}^e_{n-1}.
class MaxClassForm {
 public:
  explicit MaxClassForm(const PcPresentation& G);

  const PcPresentation& group() const { return G_; }
  const SeriesData& series() const { return sd_; }
  int n() const { return n_; }
  int p() const { return p_; }

  std::vector<Elem> make_basis(const Elem& x, const Elem& s1) const;
  const std::vector<Elem>& reference_basis() const { return ref_; }
  std::vector<int> express(const std::vector<Elem>& b, const Elem& g) const;
  Elem evaluate(const std::vector<Elem>& b, const std::vector<int>& e) const;

  // Flattened relation table in basis b: x^p, s_1^p..s_{n-1}^p, then [s_j, s_i]
  // for 1 <= i < j <= n-1, each as n exponents.
  std::vector<uint8_t> relations(const std::vector<Elem>& b) const;
  PcPresentation normalized_presentation(const std::vector<Elem>& b) const;

  // Elements x with x = r0^a r1^b (one per gamma_2-coset) admissible as basis heads.
  std::vector<Elem> x_candidates() const;
  bool admissible_x(const Elem& x) const;
  // layer coordinates: (a, b) in S/gamma_2 against (r0, r1); k >= 2 against t_k
  std::pair<int, int> layer1(const Elem& g) const;
  int layer(int k, const Elem& g) const;
  const Elem& layer_ref(int k) const { return t_[k]; }  // t_1 = r1
  const Elem& r0() const { return r0_; }
  const Subgroup& gamma(int k) const { return gam_[k]; }  // k >= 2
  // Normalizes an automorphism modulo inner automorphisms by gamma_1 (n >= 4):
  // returns the pair (image of x, image of s_1) after conjugating so the image
  // of x is its canonical coset representative.
  std::pair<Elem, Elem> leaf_key(const Elem& x_image, const Elem& s1_image) const;

  // Depth-first search over s_1 for a fixed x, pruning on relation
  // coefficients layer by layer. `visit` gets each matching basis and returns
  // false to stop. Returns false if stopped early. `nodes` counts visited nodes.
  bool search(const std::vector<uint8_t>& target, const Elem& x,
              const std::function<bool(const std::vector<Elem>&)>& visit, uint64_t& nodes,
              uint64_t budget) const;

  // Automorphism sending the reference basis to b.
  Automorphism automorphism_from_basis(const std::vector<Elem>& b) const;

 private:
  PcPresentation G_;
  SeriesData sd_;
  int n_ = 0, p_ = 0;
  bool adapted_ = false;
  Elem r0_{};
  std::vector<Elem> t_;    // t_[k] in gamma_k \ gamma_{k+1}, k = 1..n-1 (t_[0] unused)
  std::vector<Elem> ref_;  // reference basis
  std::vector<int> inv_;
  std::array<int, 4> l1inv_{};  // inverse of the (r0 | r1) coordinate matrix, adapted case
  // generic fallback tables
  std::vector<std::unordered_map<Elem, int, ElemHash>> layer_tab_;
  std::unordered_map<Elem, std::pair<int, int>, ElemHash> layer1_tab_;
  std::vector<Subgroup> gam_;  // gam_[k] = gamma_k for k >= 2
  std::vector<std::vector<int>> gen_expr_;  // pc generators in the reference basis
};

struct AutGroupDescription {
  std::vector<Automorphism> generators;  // deterministic; includes Inn generators
  // Aut(S) = leaves * (inner automorphisms by gamma_1), one leaf per coset.
  std::vector<std::vector<Elem>> leaves;  // bases in the group
  uint64_t order = 0;
  uint64_t p_part = 0;
  uint64_t p_prime_part = 0;
  bool p_prime_cyclic = false;
  std::vector<Mat2> gl2_image;  // action on S/Phi(S) in basis (r0, r1), sorted
  std::optional<Mat2> p_prime_generator;
  uint64_t p_prime_generator_order = 1;
  uint64_t inner_order = 0;
  uint64_t nodes = 0;
};

AutGroupDescription automorphism_group(const PcPresentation& G, uint64_t budget = kDefaultBudget);
AutGroupDescription automorphism_group(const MaxClassForm& F, uint64_t budget = kDefaultBudget);

// action of an automorphism on S/Phi(S) in basis (r0, r1) of F
Mat2 action_on_frattini_quotient(const MaxClassForm& F, const Automorphism& a);
// scalar action on Z(S) (order p)
int action_on_center(const MaxClassForm& F, const Automorphism& a);

uint64_t mat_order(const Mat2& m, int p);
Mat2 mat_mul(const Mat2& a, const Mat2& b, int p);

struct AutoSReport {
  bool applicable = false;
  std::string note;
  int i = 0, j = 0, r = 0;  // witness [s_i, s_j] in gamma_r \ gamma_{r+1}
  bool scalar_relation_holds = false;
  bool p_prime_cyclic = false;
  uint64_t p_prime_order = 0;
  bool divides_p_minus_1 = false;
  bool pass() const { return !applicable || (scalar_relation_holds && p_prime_cyclic && divides_p_minus_1); }
};
AutoSReport verify_autoS_structure(const MaxClassForm& F, const AutGroupDescription& A);

// Scan of p'-automorphisms against their action on Z(S).
struct CenterActionScan {
  uint64_t max_order_centralizing = 1;  // largest p'-order acting trivially on Z(S)
  bool p_prime_faithful_on_center = false;  // no nontrivial p'-element is trivial on Z(S)
  std::vector<std::pair<uint64_t, int>> samples;  // (order, scalar) per p'-image class
};
CenterActionScan center_action_scan(const MaxClassForm& F, const AutGroupDescription& A);

struct RestrictedAutomorphism {
  InducedSection section;
  Automorphism aut;  // on section.pres
};
// Throws InvarianceError if H is not invariant.
RestrictedAutomorphism restriction(const PcPresentation& G, const Automorphism& a, const Subgroup& H);

struct IsoResult {
  bool isomorphic = false;
  std::vector<Elem> images;             // images of A's pc generators in B
  std::vector<std::string> invariants;  // distinguishing invariants when not isomorphic
  uint64_t nodes = 0;
};
// Throws Inconclusive on budget exhaustion.
IsoResult isomorphism_test(const PcPresentation& A, const PcPresentation& B, uint64_t budget = kDefaultBudget);

}  // namespace pf

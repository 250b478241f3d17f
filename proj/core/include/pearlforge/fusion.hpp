#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pearlforge/autos.hpp"
#include "pearlforge/pearls.hpp"

namespace pf {

// smallest primitive root mod p
int default_lambda(int p);
// multiplicative order of a mod p
int mult_order(int a, int p);

// phi of order p-1 normalizing E, acting on E/Phi(E) as diag(lambda^-1, lambda)
// in the basis (x, z), centralizing Phi(E).
struct DeltaAutomorphism {
  int lambda = 0;
  int epsilon = 0;
  PearlCandidate E;
  Automorphism phi;
  Elem x{};  // eigenvector for lambda^-1
  Elem z{};  // generator of Z(S) (abelian) or of Z_2(S) mod Z(S) (extraspecial)
  uint64_t order = 0;
};

struct DeltaSearch {
  std::optional<DeltaAutomorphism> delta;
  // nonexistence certificate: orbit of E times the lifted images tried
  uint64_t orbit_size = 0;
  uint64_t hall_order = 0;  // number of images of order p-1
  uint64_t pairs_tried = 0;
  std::string note;
};

// Exhaustive over the p'-elements of Aut(S): one lift per image of order p-1
// on S/Phi(S), tested against every member of the Aut(S)-orbit of E. Throws
// RangeError if lambda does not have order p-1.
DeltaSearch construct_delta(const PcPresentation& G, const SeriesData& sd, const PearlCandidate& E, int lambda,
                            uint64_t budget = kDefaultBudget);
// Same, reusing a computed automorphism group of MaxClassForm(G).
DeltaSearch construct_delta(const MaxClassForm& F, const AutGroupDescription& A, const PearlCandidate& E,
                            int lambda);

// Invariants of a delta: normalizes E, diagonal action, centralizes Phi(E), order p-1,
// normalizes gamma_i, Z_i, gamma_1, C_S(Z_2) and the normalizer tower of E.
std::vector<FactCheck> check_delta(const PcPresentation& G, const SeriesData& sd, const DeltaAutomorphism& d);

struct LambdaActionReport {
  // every s_i in gamma_i \ gamma_{i+1}: s_i phi = s_i^{a_i} mod gamma_{i+1}
  std::vector<FactCheck> checks;
  // for each i some s_i in gamma_i \ gamma_{i+1} with s_i phi = s_i^{a_i} mod gamma_i^p
  bool witness_found = false;
  std::vector<Elem> witnesses;  // index i, identity where none was found
  std::vector<int> exponents;   // a_i, i = 1..n-1 (index 0 unused)
  bool pass() const {
    if (!witness_found) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// pearl_classes_with_delta > 1 turns on the n = epsilon mod (p-1) check when
// gamma_1 is not extraspecial.
LambdaActionReport verify_lambda_action(const PcPresentation& G, const SeriesData& sd, const DeltaAutomorphism& d,
                                        int pearl_classes_with_delta = 1);

struct EssentialDecl {
  Subgroup E;
  std::string kind;       // "pearl" or "adopted"
  std::string automizer;  // "SL2(p) extended by diag" for pearls
  uint64_t class_size = 1;
};

struct PearlClassCert {
  CandidateClass cls;
  DeltaAutomorphism delta;
};

struct FusionCertificate {
  PcPresentation pres;
  int lambda = 0;
  int sectional_rank = 0;
  std::vector<Automorphism> autF_S;  // Inn(S) generators, then the deltas
  uint64_t torus_order = 1;          // p'-order of the chosen Aut_F(S)
  uint64_t aut_p_prime = 1;          // p'-part of Aut(S)
  bool torus_flag = false;           // torus_order < p - 1
  std::vector<PearlClassCert> pearls;
  std::vector<EssentialDecl> essentials;
  Subgroup op_lower, op_upper;
  bool op_exact = false;
  int case_label = 0;  // 0: no case applies
  std::vector<FactCheck> checks;
  std::vector<std::string> notes;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct CertificateRequest {
  // which pearl kinds to include; every S-class of that kind admitting a delta is taken
  bool abelian = true;
  bool extraspecial = true;
  int lambda = 0;                  // 0: default_lambda
  std::vector<Subgroup> adoptions;  // extra essentials, automizer irreducible on E/Phi(E)
  uint64_t budget = kDefaultBudget;
};

// Throws InputError when an adoption fails the essential-candidate filters,
// Undefined when no selected pearl admits a delta.
FusionCertificate build_fusion_certificate(const PcPresentation& G, const CertificateRequest& req);
// Same, reusing a computed automorphism group of MaxClassForm(G).
FusionCertificate build_fusion_certificate(const MaxClassForm& F, const AutGroupDescription& A,
                                           const CertificateRequest& req);

// Certificate on N^i(E) for the first pearl class; i = tower length gives the
// certificate back unchanged.
FusionCertificate restrict_certificate(const FusionCertificate& cert, int i, uint64_t budget = kDefaultBudget);

}  // namespace pf

#include "pearlforge/fusion.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pf {

namespace {

int md(long long a, int p) {
  long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int powmod(long long b, long long e, int p) {
  long long r = 1;
  b = md(b, p);
  for (; e > 0; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return static_cast<int>(r);
}

int inv_mod(int a, int p) { return powmod(a, p - 2, p); }

uint64_t p_part(uint64_t m, int p) {
  uint64_t r = 1;
  while (m % p == 0) {
    m /= p;
    r *= p;
  }
  return r;
}

FactCheck fact(const std::string& name, bool pass, const std::string& detail = {}) { return {name, pass, detail}; }

Automorphism aut_pow(const PcPresentation& G, Automorphism a, uint64_t k) {
  Automorphism r = identity_automorphism(G);
  for (; k; k >>= 1, a = compose(G, a, a))
    if (k & 1) r = compose(G, r, a);
  return r;
}

// (a, b) with g = x^a z^b mod Phi, or nullopt
std::optional<std::pair<int, int>> coords_mod(const PcPresentation& G, const Subgroup& Phi, const Elem& x,
                                              const Elem& z, const Elem& g) {
  const int p = G.p();
  for (int a = 0; a < p; ++a) {
    Elem xa = G.pow(x, a);
    for (int b = 0; b < p; ++b) {
      Elem r = G.mul(xa, G.pow(z, b));
      if (Phi.contains(G, G.mul(G.inv(r), g))) return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

// z for a candidate: generator of Z(S), or an element of Z_2(S) outside Z(S)
Elem pearl_z(const PcPresentation& G, const SeriesData& sd, PearlKind kind) {
  if (kind == PearlKind::abelian) return sd.Z(G, 1).gens().front();
  Subgroup Z1 = sd.Z(G, 1), Z2 = sd.Z(G, 2);
  for (const Elem& g : Z2.gens())
    if (!Z1.contains(G, g)) return g;
  throw StateError("Z_2(S) equals Z(S)");
}

bool centralizes(const PcPresentation& G, const Automorphism& a, const Subgroup& H) {
  for (const Elem& h : H.gens())
    if (a.apply(G, h) != h) return false;
  return true;
}

std::vector<Subgroup> tower_of(const PcPresentation& G, const Subgroup& E) {
  Subgroup S = whole_group(G);
  std::vector<Subgroup> t{E};
  while (t.back() != S) {
    Subgroup N = normalizer(G, S, t.back());
    if (N == t.back()) break;
    t.push_back(N);
  }
  return t;
}

std::vector<PearlCandidate> all_candidates(const PcPresentation& G, const SeriesData& sd) {
  return G.n() == 3 ? order_p3_candidates(G) : find_pearl_candidates(G, sd);
}

// Tests psi on E' against the required action; returns the adjusted eigenvector.
std::optional<Elem> diagonal_basis(const PcPresentation& G, const Automorphism& psi, const Subgroup& E,
                                   const Elem& x, const Elem& z, int lambda) {
  const int p = G.p();
  if (image_of(G, psi, E) != E) return std::nullopt;
  Subgroup Phi = frattini(G, E);
  if (!centralizes(G, psi, Phi)) return std::nullopt;
  auto cz = coords_mod(G, Phi, x, z, psi.apply(G, z));
  if (!cz || cz->first != 0 || cz->second != lambda) return std::nullopt;
  auto cx = coords_mod(G, Phi, x, z, psi.apply(G, x));
  if (!cx || cx->first != inv_mod(lambda, p)) return std::nullopt;
  int mu = cx->first, t = cx->second;
  if (t == 0) return x;
  if (mu == lambda) return std::nullopt;  // Jordan block
  int s = md(static_cast<long long>(t) * inv_mod(md(mu - lambda, p), p), p);
  return G.mul(x, G.pow(z, s));
}

}  // namespace

int mult_order(int a, int p) {
  a = md(a, p);
  if (!a) return 0;
  int x = a, o = 1;
  while (x != 1) {
    x = static_cast<int>(static_cast<long long>(x) * a % p);
    ++o;
  }
  return o;
}

int default_lambda(int p) {
  for (int g = 2; g < p; ++g)
    if (mult_order(g, p) == p - 1) return g;
  return p == 3 ? 2 : 1;
}

DeltaSearch construct_delta(const MaxClassForm& F, const AutGroupDescription& A, const PearlCandidate& E,
                            int lambda) {
  const auto& G = F.group();
  const auto& sd = F.series();
  const int p = G.p();
  lambda = md(lambda, p);
  if (mult_order(lambda, p) != p - 1) throw RangeError("lambda must have multiplicative order p-1");

  // One p'-lift per image of order p-1 in GL_2(p). The kernel of the action on
  // S/Phi(S) is a p-group, so lifts of the same cyclic image are conjugate.
  DeltaSearch R;
  std::map<Mat2, Automorphism> lifts;
  for (const auto& leaf : A.leaves) {
    Automorphism a = F.automorphism_from_basis(leaf);
    Mat2 m = action_on_frattini_quotient(F, a);
    if (lifts.count(m) || mat_order(m, p) != static_cast<uint64_t>(p - 1)) continue;
    // p^k = 1 mod p-1, so a^(p^k) keeps the image m
    lifts.emplace(m, aut_pow(G, a, p_part(automorphism_order(G, a), p)));
  }
  R.hall_order = lifts.size();
  if (lifts.empty()) {
    R.note = "no automorphism acts on S/Phi(S) with order p-1";
    return R;
  }

  // Aut(S)-orbit of E with transporters tau(E) = E'
  std::map<Subgroup, Automorphism> orbit{{E.E, identity_automorphism(G)}};
  std::vector<Subgroup> todo{E.E};
  while (!todo.empty()) {
    Subgroup U = todo.back();
    todo.pop_back();
    Automorphism tau = orbit.at(U);
    for (const auto& g : A.generators) {
      Subgroup V = image_of(G, g, U);
      if (orbit.count(V)) continue;
      orbit.emplace(V, compose(G, tau, g));
      todo.push_back(V);
    }
  }
  R.orbit_size = orbit.size();
  const Elem z = pearl_z(G, sd, E.kind);
  for (const auto& [U, tau] : orbit) {
    Elem xU = tau.apply(G, E.witness);
    Elem zU = tau.apply(G, z);
    for (const auto& [m, h] : lifts) {
      ++R.pairs_tried;
      auto x = diagonal_basis(G, h, U, xU, zU, lambda);
      if (!x) continue;
      Automorphism ti = inverse(G, tau);
      DeltaAutomorphism d;
      d.lambda = lambda;
      d.epsilon = E.epsilon;
      d.E = E;
      d.phi = compose(G, compose(G, tau, h), ti);
      d.x = ti.apply(G, *x);
      d.z = z;
      d.order = automorphism_order(G, d.phi);
      R.delta = d;
      return R;
    }
  }
  R.note = "no lift normalizes a member of the Aut(S)-orbit of E with the required action";
  return R;
}

DeltaSearch construct_delta(const PcPresentation& G, const SeriesData& sd, const PearlCandidate& E, int lambda,
                            uint64_t budget) {
  (void)sd;
  MaxClassForm F(G);
  AutGroupDescription A = automorphism_group(F, budget);
  return construct_delta(F, A, E, lambda);
}

std::vector<FactCheck> check_delta(const PcPresentation& G, const SeriesData& sd, const DeltaAutomorphism& d) {
  std::vector<FactCheck> out;
  const int p = G.p();
  const Subgroup& E = d.E.E;
  auto inv = [&](const Subgroup& H) { return image_of(G, d.phi, H) == H; };
  out.push_back(fact("delta normalizes E", inv(E)));
  Subgroup Phi = frattini(G, E);
  auto cx = coords_mod(G, Phi, d.x, d.z, d.phi.apply(G, d.x));
  auto cz = coords_mod(G, Phi, d.x, d.z, d.phi.apply(G, d.z));
  bool diag = cx && cz && cx->first == inv_mod(d.lambda, p) && cx->second == 0 && cz->first == 0 &&
              cz->second == d.lambda;
  out.push_back(fact("delta acts on E/Phi(E) as diag(lambda^-1, lambda)", diag,
                     "lambda = " + std::to_string(d.lambda)));
  out.push_back(fact("delta centralizes Phi(E)", centralizes(G, d.phi, Phi)));
  out.push_back(fact("delta has order p-1", d.order == static_cast<uint64_t>(p - 1),
                     "order " + std::to_string(d.order)));
  bool series = true;
  for (const auto& H : sd.lower) series = series && inv(H);
  for (const auto& H : sd.zeta) series = series && inv(H);
  if (sd.gamma1) series = series && inv(*sd.gamma1);
  if (sd.cs_z2) series = series && inv(*sd.cs_z2);
  out.push_back(fact("delta normalizes gamma_i, Z_i, gamma_1 and C_S(Z_2)", series));
  bool tower = true;
  for (const auto& N : tower_of(G, E)) tower = tower && inv(N);
  out.push_back(fact("delta normalizes every tower member", tower));
  return out;
}

LambdaActionReport verify_lambda_action(const PcPresentation& G, const SeriesData& sd, const DeltaAutomorphism& d,
                                        int pearl_classes_with_delta) {
  LambdaActionReport R;
  const int n = G.n(), p = G.p(), eps = d.epsilon;
  R.exponents.assign(n, 0);
  for (int i = 1; i < n; ++i) R.exponents[i] = powmod(d.lambda, n - i - eps, p);
  auto phi = [&](const Elem& g) { return d.phi.apply(G, g); };

  // mod gamma_{i+1}, every element of gamma_i outside gamma_{i+1}
  const int first = n >= 4 ? 1 : 2;
  for (int i = first; i < n; ++i) {
    Subgroup Gi = sd.gamma(G, i), Gn = sd.gamma(G, i + 1);
    bool ok = true;
    for (const Elem& s : right_transversal(G, Gi, Gn)) {
      if (is_identity(s)) continue;
      Elem r = G.mul(G.inv(G.pow(s, R.exponents[i])), phi(s));
      ok = ok && Gn.contains(G, r);
    }
    R.checks.push_back(fact("s_i phi = s_i^a_i mod gamma_{i+1}, i = " + std::to_string(i), ok,
                            "a_i = " + std::to_string(R.exponents[i])));
  }

  // mod gamma_i^p, one witness per i
  Subgroup S = whole_group(G);
  R.witnesses.assign(n, Elem{});
  R.witness_found = true;
  for (int i = 1; i < n; ++i) {
    std::vector<Elem> pool;
    if (i == 1 && n >= 4) {
      Subgroup G2 = sd.gamma(G, 2);
      for (const Elem& s : elements(G, *sd.gamma1))
        if (!G2.contains(G, s)) pool.push_back(s);
    } else if (i == 1) {
      for (const Elem& s : elements(G, S))
        if (!d.E.E.contains(G, s)) pool.push_back(s);
    } else {
      Subgroup Gi = sd.gamma(G, i), Gn = sd.gamma(G, i + 1);
      for (const Elem& s : elements(G, Gi))
        if (!Gn.contains(G, s)) pool.push_back(s);
    }
    const Subgroup ag = static_cast<size_t>(i) < sd.agemo.size() ? sd.agemo[i] : trivial_subgroup(G);
    bool found = false;
    for (const Elem& s : pool)
      if (ag.contains(G, G.mul(G.inv(G.pow(s, R.exponents[i])), phi(s)))) {
        R.witnesses[i] = s;
        found = true;
        break;
      }
    R.witness_found = R.witness_found && found;
    R.checks.push_back(fact("some s_i gives s_i phi = s_i^a_i mod gamma_i^p, i = " + std::to_string(i), found));
  }

  R.checks.push_back(fact("phi centralizes Phi(E)", centralizes(G, d.phi, frattini(G, d.E.E))));
  if (pearl_classes_with_delta > 1 && n >= 4 && sd.gamma1) {
    auto pr = profile(G, *sd.gamma1);
    if (!pr.abelian && !pr.extraspecial)
      R.checks.push_back(fact("several pearl classes: n = epsilon mod (p-1)", md(n - eps, p - 1) == 0,
                              "n = " + std::to_string(n) + ", epsilon = " + std::to_string(eps)));
  }
  return R;
}

// ---------------------------------------------------------------------------

namespace {

bool has_elem_ab_maximal(const PcPresentation& G) {
  Subgroup S = whole_group(G);
  Subgroup Phi = frattini(G, S);
  for (const Elem& g : right_transversal(G, S, Phi)) {
    if (is_identity(g)) continue;
    Subgroup M = join(G, Phi, std::vector<Elem>{g});
    if (M.size_exp() == G.n() - 1 && profile(G, M).elementary_abelian) return true;
  }
  return false;
}

Subgroup normal_core(const PcPresentation& G, Subgroup U) {
  for (;;) {
    Subgroup V = U;
    for (int k = 0; k < G.n(); ++k) V = intersection(G, V, conjugate(G, V, G.gen(k)));
    if (V == U) return U;
    U = V;
  }
}

// Everything past the pearl deltas: essentials, O_p, case label and checks.
FusionCertificate assemble(const PcPresentation& G, int lambda, std::vector<PearlClassCert> pearls,
                           std::vector<Automorphism> extra_autos, std::vector<EssentialDecl> adopted,
                           uint64_t budget, const AutGroupDescription* known = nullptr) {
  FusionCertificate C;
  C.pres = G;
  C.lambda = lambda;
  const int n = G.n(), p = G.p();
  SeriesData sd = analyze_series(G);
  Subgroup S = whole_group(G);
  MaxClassForm F(G);
  std::optional<AutGroupDescription> own;
  if (!known) own = automorphism_group(F, budget);
  const AutGroupDescription& A = known ? *known : *own;
  C.aut_p_prime = A.p_prime_part;

  for (int k = 0; k < n; ++k) C.autF_S.push_back(inner_automorphism(G, G.gen(k)));
  for (auto& a : extra_autos) C.autF_S.push_back(std::move(a));
  std::set<Mat2> torus{Mat2{1, 0, 0, 1}};
  std::vector<Mat2> tgens;
  for (const auto& pc : pearls) {
    C.autF_S.push_back(pc.delta.phi);
    tgens.push_back(action_on_frattini_quotient(F, pc.delta.phi));
  }
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& a : std::vector<Mat2>(torus.begin(), torus.end()))
      for (const auto& g : tgens) grew |= torus.insert(mat_mul(a, g, p)).second;
  }
  C.torus_order = torus.size() / p_part(torus.size(), p);
  C.torus_flag = C.torus_order < static_cast<uint64_t>(p - 1);
  if (C.torus_flag)
    C.notes.push_back("torus of Aut_F(S) has order " + std::to_string(C.torus_order) + " < p-1");
  C.pearls = std::move(pearls);

  for (const auto& pc : C.pearls)
    C.essentials.push_back({pc.cls.rep.E, "pearl", "SL2(p) extended by diag(lambda^-1, lambda)", pc.cls.size});
  for (auto& e : adopted) C.essentials.push_back(std::move(e));

  RankReport rr = sectional_rank(G, budget);
  if (!rr.exact) throw BudgetExceeded("sectional rank not decided within budget", rr.budget_used);
  C.sectional_rank = rr.k;
  const int k = rr.k;

  // O_p: normal in S, inside every essential (and below Phi(E) when E is not
  // normal, the automizer being irreducible on E/Phi(E)), Aut_F(S)-invariant
  Subgroup U = S;
  for (const auto& e : C.essentials)
    U = intersection(G, U, is_normal_in(G, e.E, S) ? e.E : frattini(G, e.E));
  // a normal essential E allows U = E; anything else in between drops to Phi(E)
  for (;;) {
    Subgroup V = normal_core(G, U);
    for (const auto& a : C.autF_S) V = intersection(G, V, image_of(G, a, V));
    for (const auto& e : C.essentials) {
      Subgroup Phi = frattini(G, e.E);
      if (V != e.E && !is_subgroup_of(G, V, Phi)) V = intersection(G, V, Phi);
    }
    if (V == U) break;
    U = V;
  }
  C.op_upper = U;
  C.op_exact = true;
  for (const auto& e : C.essentials) {
    bool ch = U.size_exp() == 0 || U == e.E || U == frattini(G, e.E) || U == center(G, e.E) ||
              U == commutator_subgroup(G, e.E, e.E);
    C.op_exact = C.op_exact && ch;
  }
  C.op_lower = C.op_exact ? U : trivial_subgroup(G);

  bool has_a = false, has_e = false;
  for (const auto& pc : C.pearls) (pc.delta.epsilon ? has_e : has_a) = true;
  const uint64_t expo = exponent_of(G, S);
  std::optional<SubgroupProfile> g1;
  if (n >= 4) g1 = profile(G, *sd.gamma1);
  const bool g1_nonab = g1 && !g1->abelian;
  const bool g1_eq_c2 = n >= 4 && *sd.gamma1 == *sd.cs_z2;

  bool c1 = n == k + 1 && has_elem_ab_maximal(G);
  if (c1 && n >= 4) c1 = profile(G, *sd.gamma1).elementary_abelian;
  bool c2 = p == k + 1 && n >= p + 1 && g1_eq_c2;
  bool c3 = k >= 3 && k + 3 <= p && p <= 2 * k + 1 && (p != 2 * k + 1 || !has_e) &&
            expo == static_cast<uint64_t>(p) && g1_nonab && k + 2 <= n && n <= p - 1;
  int nc = c1 + c2 + c3;
  C.case_label = nc == 1 ? (c1 ? 1 : c2 ? 2 : 3) : 0;
  C.checks.push_back(fact("exactly one case of the classification applies", nc == 1,
                          "case flags " + std::to_string(c1) + std::to_string(c2) + std::to_string(c3)));

  // per pearl
  for (const auto& pc : C.pearls) {
    for (auto f : check_delta(G, sd, pc.delta)) {
      f.name = std::string(kind_name(pc.delta.E.kind)) + " pearl: " + f.name;
      C.checks.push_back(f);
    }
    int same_kind = 0;
    for (const auto& q : C.pearls) same_kind += q.delta.epsilon == pc.delta.epsilon;
    auto lr = verify_lambda_action(G, sd, pc.delta, same_kind);
    C.checks.push_back(fact(std::string(kind_name(pc.delta.E.kind)) + " pearl: lambda action", lr.pass()));
  }
  bool inn = true;
  for (int i = 0; i < n; ++i) inn = inn && C.autF_S[i] == inner_automorphism(G, G.gen(i));
  C.checks.push_back(fact("Aut_F(S) contains Inn(S)", inn));
  bool sc = true;
  for (const auto& e : C.essentials) sc = sc && is_subgroup_of(G, centralizer(G, S, e.E), e.E);
  C.checks.push_back(fact("declared essentials are self-centralizing", sc));

  // purity and the extraspecial-gamma_1 constraints, over all candidate classes
  if (n >= 4) {
    bool any_a = false, any_e = false;
    for (const auto& cc : candidate_classes(G, all_candidates(G, sd))) {
      auto ds = construct_delta(F, A, cc.rep, lambda);
      if (ds.delta) (cc.rep.epsilon ? any_e : any_a) = true;
    }
    if (g1_nonab)
      C.checks.push_back(fact("non-abelian gamma_1: deltas exist for one pearl kind only", !(any_a && any_e)));
    if (g1->extraspecial) {
      C.checks.push_back(fact("extraspecial gamma_1: |S| = p^(p-1)", n == p - 1));
      C.checks.push_back(fact("extraspecial gamma_1: exponent p", expo == static_cast<uint64_t>(p)));
      C.checks.push_back(fact("extraspecial gamma_1: only abelian-kind deltas", !any_e));
    }
    if (g1_nonab && !g1->extraspecial && (has_a || has_e))
      C.checks.push_back(fact("gamma_1 neither abelian nor extraspecial: torus has order p-1",
                              C.torus_order == static_cast<uint64_t>(p - 1)));
  }
  if (has_a && n >= 4) C.checks.push_back(fact("abelian pearl: O_p trivial", C.op_upper.size_exp() == 0));
  C.checks.push_back(fact("p >= k, equality only if |S| = p^(k+1)", p >= k && (p != k || n == k + 1),
                          "k = " + std::to_string(k)));
  if (p > k + 1)
    C.checks.push_back(fact("p > k+1: p^(k+1) <= |S| <= p^(p-1)", k + 1 <= n && n <= p - 1));
  if (p > 2 * k + 1 || (p == 2 * k + 1 && has_e))
    C.checks.push_back(fact("p >= 2k+1 bound: |S| = p^(k+1)", n == k + 1));
  return C;
}

}  // namespace

FusionCertificate build_fusion_certificate(const PcPresentation& G, const CertificateRequest& req) {
  const int p = G.p();
  int lambda = req.lambda ? md(req.lambda, p) : default_lambda(p);
  if (mult_order(lambda, p) != p - 1) throw RangeError("lambda must have multiplicative order p-1");
  if (!analyze_series(G).is_maximal_class) throw Unsupported("certificates need a group of maximal class");
  MaxClassForm F(G);
  return build_fusion_certificate(F, automorphism_group(F, req.budget), req);
}

FusionCertificate build_fusion_certificate(const MaxClassForm& F, const AutGroupDescription& A,
                                           const CertificateRequest& req) {
  const PcPresentation& G = F.group();
  const int p = G.p();
  int lambda = req.lambda ? md(req.lambda, p) : default_lambda(p);
  if (mult_order(lambda, p) != p - 1) throw RangeError("lambda must have multiplicative order p-1");
  SeriesData sd = analyze_series(G);
  std::vector<PearlClassCert> pearls;
  for (const auto& cc : candidate_classes(G, all_candidates(G, sd))) {
    if (cc.rep.kind == PearlKind::abelian ? !req.abelian : !req.extraspecial) continue;
    auto ds = construct_delta(F, A, cc.rep, lambda);
    if (ds.delta) pearls.push_back({cc, *ds.delta});
  }
  if (pearls.empty()) throw Undefined("no selected pearl candidate admits a delta automorphism");

  // several F-classes of pearls are only possible when gamma_1 is abelian, or
  // all pearls share a kind with n = epsilon mod (p-1)
  std::string trimmed;
  if (pearls.size() > 1 && G.n() >= 4 && sd.gamma1) {
    auto pr = profile(G, *sd.gamma1);
    if (!pr.abelian) {
      const int eps = pearls.front().delta.epsilon;
      bool keep_all = pr.extraspecial || md(G.n() - eps, p - 1) == 0;
      for (const auto& pc : pearls) keep_all = keep_all && pc.delta.epsilon == eps;
      if (!keep_all) {
        trimmed = "kept one of " + std::to_string(pearls.size()) +
                  " pearl classes: gamma_1 is not abelian and the classes cannot coexist";
        pearls.resize(1);
      }
    }
  }

  std::vector<EssentialDecl> adopted;
  if (!req.adoptions.empty()) {
    if (G.n() < 4) throw InputError("adoptions need |S| >= p^4");
    ScanReport scan = essential_candidate_scan(G, sd, req.budget);
    Subgroup S = whole_group(G);
    for (const auto& E : req.adoptions) {
      const ScanEntry* hit = nullptr;
      for (const auto& e : scan.entries)
        if (e.E.size_exp() == E.size_exp() && find_conjugator(G, S, e.E, E)) hit = &e;
      if (!hit) throw InputError("adoption rejected: not among the scanned candidates");
      if (!hit->survives()) {
        std::string why;
        for (auto r : hit->rejected) why += std::string(why.empty() ? "" : ", ") + reason_name(r);
        throw InputError("adoption rejected: " + why);
      }
      adopted.push_back({E, "adopted", "irreducible on E/Phi(E)", hit->class_size});
    }
  }
  FusionCertificate cert = assemble(G, lambda, std::move(pearls), {}, std::move(adopted), req.budget, &A);
  if (!trimmed.empty()) cert.notes.push_back(trimmed);
  return cert;
}

FusionCertificate restrict_certificate(const FusionCertificate& cert, int i, uint64_t budget) {
  if (cert.pearls.empty()) throw InputError("certificate has no pearl");
  const auto& G = cert.pres;
  const auto& d = cert.pearls.front().delta;
  auto tower = tower_of(G, d.E.E);
  const int m = static_cast<int>(tower.size()) - 1;
  if (i < 1 || i > m) throw RangeError("tower index out of range");
  if (i == m) {
    FusionCertificate c = cert;
    c.notes.push_back("restriction to S is the identity");
    return c;
  }
  const Subgroup& H = tower[i];
  InducedSection sec = induced_section(G, H);
  const PcPresentation& K = sec.pres;

  DeltaAutomorphism rd;
  rd.lambda = d.lambda;
  rd.epsilon = d.epsilon;
  rd.E.kind = d.E.kind;
  rd.E.epsilon = d.E.epsilon;
  rd.E.E = sec.subgroup_to_section(G, d.E.E);
  rd.E.witness = sec.to_section(G, d.E.witness);
  rd.x = sec.to_section(G, d.x);
  rd.z = sec.to_section(G, d.z);
  rd.phi = restriction(G, d.phi, H).aut;
  rd.order = automorphism_order(K, rd.phi);

  SeriesData sdK = analyze_series(K);
  auto cands = all_candidates(K, sdK);
  bool survives = false;
  for (const auto& c : cands) survives = survives || (c.E == rd.E.E && c.kind == rd.E.kind);
  if (!survives) throw StateError("pearl is not a candidate of the restricted carrier");
  PearlClassCert pc;
  for (const auto& cc : candidate_classes(K, cands))
    if (find_conjugator(K, whole_group(K), cc.rep.E, rd.E.E)) pc.cls = cc;
  pc.cls.rep = rd.E;
  pc.delta = rd;

  // Aut_S(N^i) from the next tower member
  std::vector<Automorphism> extra;
  for (const Elem& g : right_transversal(G, tower[i + 1], H)) {
    if (is_identity(g)) continue;
    extra.push_back(restriction(G, inner_automorphism(G, g), H).aut);
    break;  // [N^{i+1} : N^i] = p
  }
  FusionCertificate c = assemble(K, cert.lambda, {pc}, std::move(extra), {}, budget);
  c.notes.push_back("carrier N^" + std::to_string(i) + "(E) of order p^" + std::to_string(K.n()));
  return c;
}

}  // namespace pf

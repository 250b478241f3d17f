#include "pearlforge/pearls.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "pearlforge/autos.hpp"
#include "pearlforge/sections.hpp"

namespace pf {

namespace {

bool subset(const PcPresentation& G, const Subgroup& A, const Subgroup& B) { return is_subgroup_of(G, A, B); }

void check_candidate(const PcPresentation& G, const PearlCandidate& c) {
  const int p = G.p();
  Subgroup S = whole_group(G);
  auto fail = [&](const std::string& what) {
    throw StateError("pearl candidate " + subgroup_to_string(G, c.E) + " violates: " + what);
  };
  if (c.E.size_exp() != 2 + c.epsilon) fail("|E| = p^(2+eps)");
  if (!subset(G, centralizer(G, S, c.E), c.E)) fail("C_S(E) <= E");
  if (normalizer(G, S, c.E).size_exp() != c.E.size_exp() + 1) fail("[N_S(E) : E] = p");
  if (subgroup_exponent(G, c.E) != static_cast<uint64_t>(p)) fail("exponent p");
  if ((c.kind == PearlKind::abelian) != is_abelian(G, c.E)) fail("kind");
}

bool candidate_less(const PearlCandidate& a, const PearlCandidate& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.E < b.E;
}

// Pieces of the tower that need no automorphism computations.
struct TowerCore {
  std::vector<Subgroup> tower;
  QuotientSection q;                  // P = S / Phi(E)
  std::vector<Subgroup> towerP;       // tower of A = E/Phi(E) in P
  std::vector<Subgroup> HP;           // H_i in P, index 1..m
  int m = 0;
  bool regular = false;
};

TowerCore tower_core(const PcPresentation& G, const PearlCandidate& c) {
  TowerCore t;
  Subgroup S = whole_group(G);
  t.tower.push_back(c.E);
  while (t.tower.back() != S) {
    Subgroup N = normalizer(G, S, t.tower.back());
    if (N == t.tower.back()) throw StateError("normalizer tower stalled");
    t.tower.push_back(N);
  }
  t.m = static_cast<int>(t.tower.size()) - 1;
  Subgroup Phi = frattini(G, c.E);
  t.q = quotient_section(G, Phi);
  const PcPresentation& P = t.q.pres;
  Subgroup SP = whole_group(P);
  for (const auto& N : t.tower) t.towerP.push_back(t.q.image(G, N));
  const int mP = SP.size_exp() - t.towerP[0].size_exp();
  t.regular = mP >= 2 && t.m == mP;
  if (!t.regular) return t;
  const int m = t.m;
  t.HP.assign(m + 1, Subgroup{});
  for (int i = 1; i <= m - 1; ++i) {
    auto zs = upper_central_series_of(P, t.towerP[i]);
    t.HP[i] = static_cast<size_t>(i) < zs.size() ? zs[i] : t.towerP[i];
  }
  Subgroup Z1 = center(P, t.towerP[1]);
  t.HP[m] = join(P, Z1, commutator_subgroup(P, SP, SP));
  return t;
}

FactCheck fact(const std::string& name, bool pass, const std::string& detail = {}) { return {name, pass, detail}; }

// All subgroups K of `top` containing `start`, closed under joins with one
// element; `keep` filters (and closes) each new subgroup.
template <class Close>
std::vector<Subgroup> overgroup_scan(const PcPresentation& G, const Subgroup& start, const Subgroup& top,
                                     Close close, uint64_t& used, uint64_t budget) {
  std::set<Subgroup> seen{start};
  std::vector<Subgroup> todo{start};
  while (!todo.empty()) {
    Subgroup H = todo.back();
    todo.pop_back();
    for (const Elem& g : right_transversal(G, top, H)) {
      if (is_identity(g)) continue;
      if (++used > budget) throw BudgetExceeded("overgroup scan exceeded budget", used);
      Subgroup K = close(join(G, H, std::vector<Elem>{g}));
      if (seen.insert(K).second) todo.push_back(K);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

std::vector<PearlCandidate> find_pearl_candidates(const PcPresentation& G, const SeriesData& sd) {
  std::vector<PearlCandidate> out;
  if (G.n() < 4 || !sd.is_maximal_class || !sd.gamma1 || !sd.cs_z2) return out;
  const uint64_t p = G.p();
  Subgroup S = whole_group(G);
  Subgroup Z1 = sd.Z(G, 1), Z2 = sd.Z(G, 2);
  const Subgroup& g1 = *sd.gamma1;
  const Subgroup& c2 = *sd.cs_z2;
  std::set<Subgroup> seen;
  std::unordered_set<Subgroup, SubgroupHash> verified;
  auto consider = [&](const Elem& x, PearlKind kind) {
    if (g1.contains(G, x) || c2.contains(G, x) || G.order(x) != p) return;
    const Subgroup& N = kind == PearlKind::abelian ? Z1 : Z2;
    // N<x> is reached from every power of x; only the least representative builds it
    Elem y = x;
    for (uint64_t k = 2; k < p; ++k) {
      y = G.mul(y, x);
      if (N.reduce_right(G, y) < x) return;
    }
    PearlCandidate c;
    c.kind = kind;
    c.epsilon = kind == PearlKind::abelian ? 0 : 1;
    c.E = join(G, N, std::vector<Elem>{x});
    c.witness = x;
    if (!seen.insert(c.E).second) return;
    if (kind == PearlKind::extraspecial && subgroup_exponent(G, c.E) != p) return;
    // the conditions are conjugation invariant: check one member per S-class
    if (!verified.count(c.E)) {
      check_candidate(G, c);
      for (auto& H : subgroup_orbit(G, S, c.E).orbit) verified.insert(std::move(H));
    }
    out.push_back(std::move(c));
  };
  for (const Elem& x : right_transversal(G, S, Z1)) consider(x, PearlKind::abelian);
  for (const Elem& x : right_transversal(G, S, Z2)) consider(x, PearlKind::extraspecial);
  std::sort(out.begin(), out.end(), candidate_less);
  return out;
}

std::vector<PearlCandidate> order_p3_candidates(const PcPresentation& G) {
  std::vector<PearlCandidate> out;
  if (G.n() != 3 || is_abelian(G, whole_group(G))) return out;
  Subgroup S = whole_group(G);
  Subgroup Z = center(G, S);
  std::set<Subgroup> seen;
  for (const Elem& x : right_transversal(G, S, Z)) {
    if (is_identity(x)) continue;
    PearlCandidate c;
    c.E = join(G, Z, std::vector<Elem>{x});
    c.witness = x;
    if (!seen.insert(c.E).second) continue;
    if (!profile(G, c.E).elementary_abelian) continue;
    check_candidate(G, c);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), candidate_less);
  return out;
}

std::vector<CandidateClass> candidate_classes(const PcPresentation& G, const std::vector<PearlCandidate>& c) {
  std::vector<CandidateClass> out;
  std::unordered_set<Subgroup, SubgroupHash> covered;
  Subgroup S = whole_group(G);
  for (const auto& e : c) {
    if (covered.count(e.E)) continue;
    OrbitResult orb = subgroup_orbit(G, S, e.E);
    for (const auto& H : orb.orbit) covered.insert(H);
    out.push_back({e, orb.orbit.size()});
  }
  return out;
}

TowerReport normalizer_tower(const PcPresentation& G, const SeriesData& sd, const PearlCandidate& c,
                             uint64_t budget) {
  (void)sd;
  TowerReport r;
  TowerCore t = tower_core(G, c);
  r.tower = t.tower;
  r.m = t.m;
  r.top_maximal = t.tower[t.m >= 1 ? t.m - 1 : 0];
  bool maximal = true;
  for (int i = 1; i <= t.m; ++i) {
    uint64_t idx = 1;
    for (int k = t.tower[i - 1].size_exp(); k < t.tower[i].size_exp(); ++k) idx *= G.p();
    r.indices.push_back(idx);
    maximal &= idx == static_cast<uint64_t>(G.p());
  }
  r.checks.push_back(fact("tower: every step has index p", maximal));

  uint64_t used = 0;
  Subgroup S = whole_group(G);
  auto over = overgroup_scan(G, c.E, S, [](Subgroup K) { return K; }, used, budget);
  r.overgroups_found = over.size();
  {
    std::set<Subgroup> tw(t.tower.begin(), t.tower.end());
    bool only = over.size() == tw.size();
    for (const auto& K : over) only &= tw.count(K) > 0;
    r.checks.push_back(fact("tower: members are the only overgroups", only,
                            std::to_string(over.size()) + " overgroups"));
  }
  {
    bool mc = true;
    std::string bad;
    for (int i = 0; i <= t.m; ++i) {
      if (t.tower[i].size_exp() < 2) continue;
      if (nilpotency_class(G, t.tower[i]) != t.tower[i].size_exp() - 1) {
        mc = false;
        bad += " N^" + std::to_string(i);
      }
    }
    r.checks.push_back(fact("overgroups of E have maximal class", mc, bad));
  }

  r.h_series_applicable = t.regular;
  if (!t.regular) return r;
  const PcPresentation& P = t.q.pres;
  const int m = t.m;
  const int p = G.p();
  r.H.assign(m + 1, Subgroup{});
  for (int i = 1; i <= m; ++i) r.H[i] = t.q.preimage(G, t.HP[i]);
  r.class_in_quotient.resize(m + 1);
  bool cls = true;
  for (int i = 0; i <= m; ++i) {
    r.class_in_quotient[i] = nilpotency_class(P, t.towerP[i]);
    if (i <= m - 1) cls &= r.class_in_quotient[i] == i + 1;
  }
  r.checks.push_back(fact("tower: class of N^i is i+1", cls));

  // (3)
  bool inside = true, charac = true;
  std::string cdetail;
  for (int i = 1; i <= m; ++i) {
    inside &= subset(P, t.HP[i], t.towerP[i - 1]);
    InducedSection sec = induced_section(P, t.towerP[i]);
    Subgroup Hs = sec.subgroup_to_section(P, t.HP[i]);
    AutGroupDescription A = automorphism_group(sec.pres, budget);
    for (const auto& a : A.generators) {
      if (image_of(sec.pres, a, Hs) != Hs) {
        charac = false;
        cdetail += " H_" + std::to_string(i);
        break;
      }
    }
  }
  r.checks.push_back(fact("tower: H_i <= N^{i-1}", inside));
  r.checks.push_back(fact("tower: H_i characteristic in N^i", charac, cdetail));

  // (4)
  bool idx = t.towerP[0].size_exp() - t.HP[1].size_exp() == 1 && subset(P, t.HP[1], t.towerP[0]);
  for (int i = 1; i <= m - 1; ++i) {
    idx &= subset(P, t.HP[i], t.HP[i + 1]) && t.HP[i + 1].size_exp() - t.HP[i].size_exp() == 1;
    idx &= t.towerP[i].size_exp() - t.HP[i + 1].size_exp() == 1;
  }
  r.checks.push_back(fact("tower: H-series index pattern", idx));

  // (5)
  bool cpcp = true;
  for (int i = 1; i <= m; ++i) {
    const Subgroup& N = t.towerP[i];
    cpcp &= is_normal_in(P, t.HP[i], N) && N.size_exp() - t.HP[i].size_exp() == 2 &&
            subset(P, frattini(P, N), t.HP[i]);
  }
  r.checks.push_back(fact("tower: N^i/H_i = C_p x C_p", cpcp));

  // (6)
  const Subgroup& A0 = t.towerP[0];
  auto close = [&](Subgroup K) { return normal_closure(P, K, A0); };
  auto inv = overgroup_scan(P, t.HP[1], t.HP[m], close, used, budget);
  r.invariant_chain_found = inv.size();
  {
    std::set<Subgroup> hs(t.HP.begin() + 1, t.HP.end());
    bool ok = inv.size() == hs.size();
    for (const auto& K : inv) ok &= hs.count(K) > 0;
    r.checks.push_back(fact("tower: H-chain is the only A-invariant chain over Z(N^1)", ok,
                            std::to_string(inv.size()) + " invariant subgroups"));
  }
  (void)p;
  return r;
}

CrossTowerReport cross_tower_checks(const PcPresentation& G, const SeriesData& sd,
                                    const std::vector<PearlCandidate>& cands, uint64_t budget) {
  CrossTowerReport r;
  Subgroup S = whole_group(G);
  auto classes = candidate_classes(G, cands);
  uint64_t used = 0;
  bool conj_ok = true;
  std::string d8;
  std::map<PearlKind, std::vector<std::pair<PearlCandidate, TowerCore>>> by_kind;
  for (const auto& cc : classes) by_kind[cc.rep.kind].push_back({cc.rep, tower_core(G, cc.rep)});

  for (const auto& [kind, reps] : by_kind) {
    for (const auto& [E, core] : reps) {
      OrbitResult orb = subgroup_orbit(G, S, E.E, &used, budget);
      std::unordered_set<Subgroup, SubgroupHash> conj(orb.orbit.begin(), orb.orbit.end());
      const Subgroup& M = core.tower[core.m >= 1 ? core.m - 1 : 0];
      for (const auto& Q : cands) {
        if (Q.kind != kind || !subset(G, Q.E, M)) continue;
        ++r.pairs;
        if (!conj.count(Q.E)) {
          conj_ok = false;
          d8 += " " + subgroup_to_string(G, Q.E);
        }
      }
    }
    if (reps.size() >= 2 && reps[0].second.regular) {
      r.single_class_per_kind = false;
      bool same = true;
      auto Hm0 = reps[0].second.q.preimage(G, reps[0].second.HP[reps[0].second.m]);
      for (size_t i = 1; i < reps.size(); ++i) {
        const auto& c2 = reps[i].second;
        if (!c2.regular) continue;
        same &= c2.q.preimage(G, c2.HP[c2.m]) == Hm0;
      }
      r.checks.push_back(fact(std::string("towers: H_m agrees across ") + kind_name(kind) + " classes", same));
    }
  }
  r.checks.push_back(fact("towers: same-kind candidates below top_maximal are S-conjugate to E", conj_ok, d8));

  // different kinds with the same maximal overgroup
  bool msb = true;
  std::string dm;
  auto ita = by_kind.find(PearlKind::abelian);
  if (ita != by_kind.end() && by_kind.count(PearlKind::extraspecial)) {
    for (const auto& [E, core] : ita->second) {
      if (core.m < 2) continue;
      const Subgroup& M = core.tower[core.m - 1];
      OrbitResult orb = subgroup_orbit(G, S, core.tower[1], &used, budget);
      std::unordered_set<Subgroup, SubgroupHash> conj(orb.orbit.begin(), orb.orbit.end());
      for (const auto& Q : cands) {
        if (Q.kind != PearlKind::extraspecial) continue;
        // the unique maximal subgroup over Q is Q gamma_2(S)
        if (join(G, Q.E, sd.gamma(G, 2)) != M) continue;
        ++r.pairs;
        if (!conj.count(Q.E)) {
          msb = false;
          dm += " " + subgroup_to_string(G, Q.E);
        }
      }
    }
  }
  r.checks.push_back(fact("towers: different kinds share M only via N^1(E)", msb, dm));
  return r;
}

const char* reason_name(ScanReason r) {
  switch (r) {
    case ScanReason::not_proper: return "not_proper";
    case ScanReason::not_centric: return "not_centric";
    case ScanReason::frattini_commutator: return "frattini_commutator";
    case ScanReason::stabilized_chain: return "stabilized_chain";
    case ScanReason::max_class_not_pearl: return "max_class_not_pearl";
    case ScanReason::inside_extraspecial_gamma1: return "inside_extraspecial_gamma1";
    case ScanReason::cs_z2_shape: return "cs_z2_shape";
    case ScanReason::lower_term_bound: return "lower_term_bound";
  }
  return "?";
}

const char* label_name(ScanLabel l) {
  switch (l) {
    case ScanLabel::pearl: return "pearl";
    case ScanLabel::gamma1: return "gamma1";
    case ScanLabel::cs_z2_family: return "cs_z2-family";
    case ScanLabel::other: return "other";
  }
  return "?";
}

std::vector<ScanEntry> ScanReport::survivors() const {
  std::vector<ScanEntry> out;
  for (const auto& e : entries)
    if (e.survives()) out.push_back(e);
  return out;
}

namespace {

// Characteristic chain Phi(E) = C_0 < ... < C_r = E refined by a few
// characteristic subgroups; returns whether some element of N_S(E) outside E
// acts trivially on every factor.
bool chain_stabilized_outside(const PcPresentation& G, const Subgroup& E, const Subgroup& N) {
  Subgroup Phi = frattini(G, E);
  std::vector<Subgroup> chain{Phi, E};
  std::vector<Subgroup> refiners;
  refiners.push_back(center(G, E));
  {
    auto zs = upper_central_series_of(G, E);
    if (zs.size() > 2) refiners.push_back(zs[2]);
  }
  {
    std::vector<Elem> om;
    for (const Elem& g : elements(G, E))
      if (G.order(g) <= static_cast<uint64_t>(G.p())) om.push_back(g);
    refiners.push_back(span(G, om));
  }
  refiners.push_back(commutator_subgroup(G, E, E));
  for (const auto& X : refiners) {
    std::vector<Subgroup> nc{chain[0]};
    for (size_t i = 1; i < chain.size(); ++i) {
      Subgroup mid = join(G, intersection(G, chain[i], X), chain[i - 1]);
      if (mid != nc.back() && mid != chain[i]) nc.push_back(mid);
      nc.push_back(chain[i]);
    }
    chain = std::move(nc);
  }
  Subgroup T = N;
  for (size_t i = 1; i < chain.size(); ++i)
    T = centralizer_mod(G, T, chain[i].gens(), chain[i - 1], &N);
  return !is_subgroup_of(G, T, E);
}

}  // namespace

ScanReport essential_candidate_scan(const PcPresentation& G, const SeriesData& sd, uint64_t budget) {
  ScanReport rep;
  if (G.n() < 4 || !sd.is_maximal_class || !sd.gamma1 || !sd.cs_z2)
    throw Undefined("essential scan needs a maximal-class group of order at least p^4");
  const int p = G.p();
  const int n = G.n();
  Subgroup S = whole_group(G);
  Subgroup Z1 = sd.Z(G, 1), Z2 = sd.Z(G, 2);
  const Subgroup& g1 = *sd.gamma1;
  const Subgroup& c2 = *sd.cs_z2;
  const SubgroupProfile g1p = profile(G, g1);
  QuotientSection q = quotient_section(G, Z1);
  std::vector<SubgroupClass> cls;
  try {
    cls = subgroup_classes(q.pres, budget, &rep.budget_used);
  } catch (const BudgetExceeded& ex) {
    throw BudgetExceeded("essential scan exceeded budget", ex.used(),
                         "S-classes of subgroups containing Z(S) (partially enumerated)");
  }
  for (const auto& sc : cls) {
    ScanEntry e;
    e.E = q.preimage(G, sc.rep);
    e.class_size = sc.class_size;
    auto rej = [&](ScanReason r) { e.rejected.push_back(r); };
    const int k = e.E.size_exp();
    if (e.E == S) {
      rej(ScanReason::not_proper);
      rep.entries.push_back(std::move(e));
      continue;
    }
    if (!subset(G, centralizer(G, S, e.E), e.E)) {
      rej(ScanReason::not_centric);
      rep.entries.push_back(std::move(e));
      continue;
    }
    Subgroup N = normalizer(G, S, e.E);
    SubgroupProfile pr = profile(G, e.E);
    Subgroup X = join(G, commutator_subgroup(G, N, e.E), pr.frattini);
    if (X == pr.frattini || X == e.E) rej(ScanReason::frattini_commutator);
    if (chain_stabilized_outside(G, e.E, N)) rej(ScanReason::stabilized_chain);
    const bool maxclass = k >= 2 && nilpotency_class(G, e.E) == k - 1;
    const bool pearl_shape = (k == 2 && pr.elementary_abelian) || (k == 3 && pr.extraspecial && pr.exponent == static_cast<uint64_t>(p));
    if (maxclass && !pearl_shape) rej(ScanReason::max_class_not_pearl);
    const bool in_g1 = subset(G, e.E, g1);
    const bool in_c2 = subset(G, e.E, c2);
    if (g1p.extraspecial && in_g1 && e.E != g1) rej(ScanReason::inside_extraspecial_gamma1);
    if (g1 != c2 && in_c2 && !in_g1) {
      bool ok = k >= 3 && k <= 5 && pr.exponent == static_cast<uint64_t>(p);
      if (ok) {
        bool s1 = k == 3 && pr.elementary_abelian;
        bool s2 = k == 4 && !pr.abelian && center(G, e.E) == Z2 &&
                  commutator_subgroup(G, e.E, e.E).size_exp() == 1;
        bool s3 = false;
        if (k == 5 && subset(G, Z2, e.E)) {
          QuotientSection qq = quotient_section(G, Z2);
          Subgroup img = qq.image(G, e.E);
          SubgroupProfile qp = profile(qq.pres, img);
          s3 = qp.extraspecial && qp.exponent == static_cast<uint64_t>(p) && img.size_exp() == 3;
        }
        ok = s1 || s2 || s3;
      }
      if (!ok) rej(ScanReason::cs_z2_shape);
    }
    if (in_g1 && n > p + 1) {
      for (int i = 2; i <= n - 1; ++i) {
        if (subset(G, sd.gamma(G, i), e.E)) continue;
        bool ok = sd.degree_of_commutativity && *sd.degree_of_commutativity <= (p - 2) - i &&
                  n <= 4 * (p - 2) - 2 * i;
        if (!ok) {
          rej(ScanReason::lower_term_bound);
          break;
        }
      }
    }
    if (e.E == g1) e.label = ScanLabel::gamma1;
    else if (pearl_shape && !in_g1 && !in_c2) e.label = ScanLabel::pearl;
    else if (in_c2 && !in_g1) e.label = ScanLabel::cs_z2_family;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace pf

// Constrained families of maximal-class groups, one level (order) at a time.
//
// Every maximal-class C of order p^(m+1) is a central extension of C/Z(C),
// which has maximal class and order p^m. Fix a parent P in a normalized basis
// (x, s_1, ..., s_{m-1}). A child is P's relations with z-coordinates added:
// z-parts of x^p, s_i^p, [s_{m-1}, x] and [s_j, s_i] (i + j <= m). The
// consistent parameters form a subspace V. Isomorphic children from the same
// parent are exactly the orbits of Aut(P) (acting linearly on V through lifted
// bases) together with z -> z^u.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "pearlforge/autos.hpp"
#include "pearlforge/catalog.hpp"
#include "pearlforge/fusion.hpp"
#include "pearlforge/pearls.hpp"

namespace pf {

namespace {

int md(long long a, int p) {
  long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int inv_mod(int a, int p) {
  int r = 1, b = md(a, p);
  for (int e = p - 2; e; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r;
}

int primitive_root(int p) {
  for (int g = 2; g < p; ++g) {
    int x = 1, ord = 0;
    do {
      x = x * g % p;
      ++ord;
    } while (x != 1);
    if (ord == p - 1) return g;
  }
  return 1;
}

struct Param {
  enum Kind { power, top, pair } kind;
  int i = 0, j = 0;
};

struct Layout {
  int m = 0;
  std::vector<Param> params;
};

Layout make_layout(int m, bool exponent_p) {
  Layout L;
  L.m = m;
  if (!exponent_p)
    for (int k = 0; k < m; ++k) L.params.push_back({Param::power, k, 0});
  L.params.push_back({Param::top, 0, m - 1});
  // [s_j, s_i] lies in gamma_{i+j} once l >= 0, so only i + j <= m can reach z
  for (int i = 1; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (i + j <= m) L.params.push_back({Param::pair, i, j});
  return L;
}

PcPresentation make_child(const PcPresentation& P, const Layout& L, const std::vector<int>& c) {
  const int m = L.m, p = P.p();
  std::vector<int> w(m + 1);
  w[0] = 1;
  for (int k = 1; k < m; ++k) w[k] = k;
  w[m] = m;
  PcPresentation C(p, m + 1, w);
  std::vector<Elem> pw(m);
  std::map<std::pair<int, int>, Elem> cm;
  for (int k = 0; k < m; ++k) pw[k] = P.power(k);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < j; ++i) cm[{j, i}] = P.comm_rel(j, i);
  for (size_t t = 0; t < L.params.size(); ++t) {
    const Param& q = L.params[t];
    uint8_t v = static_cast<uint8_t>(md(c[t], p));
    if (q.kind == Param::power) pw[q.i][m] = v;
    else if (q.kind == Param::top) cm[{m - 1, 0}][m] = v;
    else cm[{q.j, q.i}][m] = v;
  }
  for (int k = 0; k < m; ++k) C.set_power(k, pw[k]);
  for (const auto& [ji, e] : cm) C.set_comm(ji.first, ji.second, e);
  return C;
}

// Solutions of the homogeneous system rows * c = 0 in RREF form: returns the
// free columns and one basis vector per free column (1 there, 0 at the others).
struct Nullspace {
  std::vector<int> free_cols;
  std::vector<std::vector<int>> basis;
};

Nullspace nullspace(std::vector<std::vector<int>> rows, int ncols, int p) {
  std::vector<int> pivcol;
  size_t r = 0;
  for (int col = 0; col < ncols && r < rows.size(); ++col) {
    size_t piv = r;
    while (piv < rows.size() && !rows[piv][col]) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    int iv = inv_mod(rows[r][col], p);
    for (auto& v : rows[r]) v = v * iv % p;
    for (size_t o = 0; o < rows.size(); ++o) {
      if (o == r || !rows[o][col]) continue;
      int f = rows[o][col];
      for (int k = 0; k < ncols; ++k) rows[o][k] = md(rows[o][k] - f * rows[r][k], p);
    }
    pivcol.push_back(col);
    ++r;
  }
  Nullspace N;
  std::vector<char> is_piv(ncols, 0);
  for (int c : pivcol) is_piv[c] = 1;
  for (int f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    std::vector<int> v(ncols, 0);
    v[f] = 1;
    for (size_t k = 0; k < pivcol.size(); ++k) v[pivcol[k]] = md(-rows[k][f], p);
    N.free_cols.push_back(f);
    N.basis.push_back(std::move(v));
  }
  return N;
}

struct UnionFind {
  std::vector<uint32_t> up;
  explicit UnionFind(size_t n) : up(n) { std::iota(up.begin(), up.end(), 0u); }
  uint32_t find(uint32_t a) {
    while (up[a] != a) a = up[a] = up[up[a]];
    return a;
  }
  void unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) up[b] = a;
    else up[a] = b;
  }
};

class Budget {
 public:
  explicit Budget(uint64_t limit) : limit_(limit) {}
  void spend(uint64_t k, const char* where) {
    used_ += k;
    if (used_ > limit_)
      throw BudgetExceeded(std::string("family derivation exceeded budget in ") + where, used_,
                           "remaining parents and levels of the family search");
  }
  uint64_t used() const { return used_; }

 private:
  uint64_t limit_, used_ = 0;
};

bool has_maximal(const PcPresentation& G, bool (*pred)(const PcPresentation&, const Subgroup&)) {
  Subgroup Phi = frattini(G, whole_group(G));
  std::set<Subgroup> seen;
  for (const Elem& g : right_transversal(G, whole_group(G), Phi)) {
    if (is_identity(g)) continue;
    Subgroup M = join(G, Phi, std::vector<Elem>{g});
    if (M.size_exp() != G.n() - 1 || !seen.insert(M).second) continue;
    if (pred(G, M)) return true;
  }
  return false;
}

bool pred_elem_ab(const PcPresentation& G, const Subgroup& M) { return profile(G, M).elementary_abelian; }
bool pred_abelian(const PcPresentation& G, const Subgroup& M) { return is_abelian(G, M); }
bool pred_extraspecial(const PcPresentation& G, const Subgroup& M) {
  auto pr = profile(G, M);
  return pr.extraspecial;
}

bool tri_ok(Tri t, bool v) { return t == Tri::any || (t == Tri::yes) == v; }

bool divides(uint64_t a, uint64_t b) { return b % a == 0; }

// Predicates that pass from a group to its quotient by the center, checked on
// a level-m group whose descendants reach order p^n.
bool inherited_ok(const PcPresentation& G, const FamilyConstraints& c) {
  const int m = G.n();
  if (c.exponent && !divides(exponent_of(G, whole_group(G)), *c.exponent)) return false;
  SeriesData sd = analyze_series(G);
  if (c.derived_elementary_abelian == Tri::yes && m >= 3 && !profile(G, sd.lower[1]).elementary_abelian)
    return false;
  if (m >= 4 && sd.gamma1 && c.gamma1 == FamilyConstraints::Gamma1::abelian && !is_abelian(G, *sd.gamma1))
    return false;
  bool need_ea_max = c.maximal_elementary_abelian == Tri::yes || c.maximal_extraspecial == Tri::yes ||
                     (m >= 4 && c.gamma1 == FamilyConstraints::Gamma1::extraspecial);
  if (need_ea_max && !has_maximal(G, pred_elem_ab)) return false;
  if (c.maximal_abelian == Tri::yes && !has_maximal(G, pred_abelian)) return false;
  return true;
}

PcPresentation order_p3(int p, bool minus) {
  PcPresentation P(p, 3, {1, 1, 2});
  Elem z{};
  z[2] = 1;
  P.set_comm(1, 0, z);
  if (minus) P.set_power(0, z);
  if (!P.consistency_check().empty()) throw StateError("order p^3 construction failed");
  return P;
}

struct Level {
  std::vector<PcPresentation> groups;
};

// All children of one parent, up to isomorphism, in canonical order.
std::vector<PcPresentation> children_of(const PcPresentation& P, const FamilyConstraints& c, bool last,
                                        Budget& budget, std::mt19937_64& rng, size_t& maxclass_points) {
  const int m = P.n(), p = P.p();
  const bool exp_p = c.exponent && *c.exponent == static_cast<uint64_t>(p);
  Layout L = make_layout(m, exp_p);
  const int np = static_cast<int>(L.params.size());

  // defect matrix, one column per parameter
  std::map<std::string, std::vector<int>> rowmap;
  for (int t = 0; t < np; ++t) {
    std::vector<int> e(np, 0);
    e[t] = 1;
    PcPresentation C = make_child(P, L, e);
    budget.spend(1, "defect evaluation");
    for (const auto& f : C.overlap_defects()) {
      for (int k = 0; k < m; ++k)
        if (f.lhs[k] != f.rhs[k]) throw StateError("parent relations inconsistent at " + f.overlap);
      auto& row = rowmap[f.overlap];
      row.resize(np, 0);
      row[t] = md(f.lhs[m] - f.rhs[m], p);
    }
  }
  std::vector<std::vector<int>> rows;
  for (auto& [k, v] : rowmap) rows.push_back(v);
  Nullspace V = nullspace(rows, np, p);
  const int d = static_cast<int>(V.basis.size());
  uint64_t npts = 1;
  for (int k = 0; k < d; ++k) npts *= p;
  budget.spend(npts, "parameter points");

  auto coords = [&](const std::vector<int>& cv) {
    std::vector<int> u(d);
    for (int k = 0; k < d; ++k) u[k] = cv[V.free_cols[k]];
    return u;
  };
  auto in_V = [&](const std::vector<int>& cv) {
    for (const auto& row : rows) {
      long long s = 0;
      for (int t = 0; t < np; ++t) s += static_cast<long long>(row[t]) * cv[t];
      if (md(s, p)) return false;
    }
    return true;
  };
  auto point = [&](uint64_t idx) {
    std::vector<int> u(d);
    for (int k = 0; k < d; ++k) {
      u[k] = static_cast<int>(idx % p);
      idx /= p;
    }
    return u;
  };
  auto index_of = [&](const std::vector<int>& u) {
    uint64_t idx = 0;
    for (int k = d - 1; k >= 0; --k) idx = idx * p + u[k];
    return idx;
  };
  auto expand = [&](const std::vector<int>& u) {
    std::vector<int> cv(np, 0);
    for (int k = 0; k < d; ++k)
      if (u[k])
        for (int t = 0; t < np; ++t) cv[t] = md(cv[t] + u[k] * V.basis[k][t], p);
    return cv;
  };
  int top_t = -1, pair_t = -1;
  for (int t = 0; t < np; ++t) {
    if (L.params[t].kind == Param::top) top_t = t;
    if (L.params[t].kind == Param::pair && L.params[t].i == 1 && L.params[t].j == m - 1) pair_t = t;
  }
  auto max_class = [&](const std::vector<int>& cv) { return cv[top_t] || (pair_t >= 0 && cv[pair_t]); };

  // linear action of the non-inner generators of Aut(P) in V coordinates
  MaxClassForm F(P);
  AutGroupDescription A = automorphism_group(F);
  budget.spend(A.nodes, "parent automorphisms");
  std::vector<std::vector<std::vector<int>>> mats;  // mats[g][row][col]
  std::vector<PcPresentation> basis_children;
  for (int k = 0; k < d; ++k) {
    PcPresentation C = make_child(P, L, V.basis[k]);
    if (!C.consistency_check().empty()) throw StateError("solution vector gave an inconsistent extension");
    basis_children.push_back(std::move(C));
  }
  auto transform = [&](const PcPresentation& C, const Automorphism& beta) {
    auto lift = [&](Elem e) {
      e[m] = 0;
      return e;
    };
    auto proj = [&](Elem e) {
      e[m] = 0;
      return e;
    };
    std::vector<Elem> b(m), bp(m);
    b[0] = lift(beta.images[0]);
    b[1] = lift(beta.images[1]);
    for (int k = 2; k < m; ++k) b[k] = C.comm(b[k - 1], b[0]);
    for (int k = 0; k < m; ++k) bp[k] = proj(b[k]);
    auto zc = [&](const Elem& g) {
      auto e = F.express(bp, proj(g));
      Elem prod{};
      for (int k = 0; k < m; ++k)
        if (e[k]) prod = C.mul(prod, C.pow(b[k], e[k]));
      Elem r = C.mul(C.inv(prod), g);
      for (int k = 0; k < m; ++k)
        if (r[k]) throw StateError("lifted basis expression left a non-central residue");
      return static_cast<int>(r[m]);
    };
    std::vector<int> out(np);
    for (int t = 0; t < np; ++t) {
      const Param& q = L.params[t];
      if (q.kind == Param::power) out[t] = zc(C.pow(b[q.i], p));
      else if (q.kind == Param::top) out[t] = zc(C.comm(b[m - 1], b[0]));
      else out[t] = zc(C.comm(b[q.j], b[q.i]));
    }
    return out;
  };
  std::vector<size_t> gorder;
  for (size_t g = 0; g < A.generators.size(); ++g) gorder.push_back(g);
  std::shuffle(gorder.begin(), gorder.end(), rng);
  for (size_t g : gorder) {
    const auto& beta = A.generators[g];
    if (beta.is_inner.value_or(false)) continue;
    std::vector<std::vector<int>> M(d, std::vector<int>(d));
    for (int k = 0; k < d; ++k) {
      auto cv = transform(basis_children[k], beta);
      budget.spend(1, "transformed relations");
      if (!in_V(cv)) throw StateError("transformed parameters left the solution space");
      auto u = coords(cv);
      for (int r = 0; r < d; ++r) M[r][k] = u[r];
    }
    mats.push_back(std::move(M));
  }
  {
    int gi = inv_mod(primitive_root(p), p);
    std::vector<std::vector<int>> M(d, std::vector<int>(d, 0));
    for (int k = 0; k < d; ++k) M[k][k] = gi;
    mats.push_back(std::move(M));
  }

  UnionFind uf(npts);
  for (uint64_t idx = 0; idx < npts; ++idx) {
    auto u = point(idx);
    for (const auto& M : mats) {
      std::vector<int> v(d, 0);
      for (int r = 0; r < d; ++r) {
        long long s = 0;
        for (int k = 0; k < d; ++k) s += static_cast<long long>(M[r][k]) * u[k];
        v[r] = md(s, p);
      }
      uf.unite(static_cast<uint32_t>(idx), static_cast<uint32_t>(index_of(v)));
    }
  }
  budget.spend(npts * mats.size() / 16 + 1, "orbit union");

  std::vector<PcPresentation> out;
  for (uint64_t idx = 0; idx < npts; ++idx) {
    auto cv = expand(point(idx));
    if (!max_class(cv)) continue;
    ++maxclass_points;
    if (uf.find(static_cast<uint32_t>(idx)) != idx) continue;
    PcPresentation C = make_child(P, L, cv);
    if (!C.consistency_check().empty()) throw StateError("orbit representative inconsistent");
    budget.spend(1, "class representative");
    MaxClassForm FC(C);
    PcPresentation N = FC.normalized_presentation(FC.reference_basis());
    if (last) {
      if (!satisfies(N, c)) continue;
    } else if (!inherited_ok(N, c)) {
      continue;
    }
    out.push_back(std::move(N));
  }
  return out;
}

}  // namespace

bool satisfies(const PcPresentation& G, const FamilyConstraints& c, std::string* why) {
  auto no = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  if (G.p() != c.p || G.n() != c.n) return no("order");
  if (c.nilpotency_class && *c.nilpotency_class != c.n - 1) return no("class");
  SeriesData sd = analyze_series(G);
  if (!sd.is_maximal_class) return no("not of maximal class");
  Subgroup S = whole_group(G);
  if (c.exponent && exponent_of(G, S) != *c.exponent) return no("exponent");
  if (c.gamma1 != FamilyConstraints::Gamma1::any) {
    if (!sd.gamma1) return no("gamma_1 undefined");
    auto pr = profile(G, *sd.gamma1);
    using G1 = FamilyConstraints::Gamma1;
    if (c.gamma1 == G1::abelian && !pr.abelian) return no("gamma_1 not abelian");
    if (c.gamma1 == G1::nonabelian && pr.abelian) return no("gamma_1 abelian");
    if (c.gamma1 == G1::extraspecial && !pr.extraspecial) return no("gamma_1 not extraspecial");
  }
  if (c.cs_z2_abelian != Tri::any) {
    if (!sd.cs_z2) return no("C_S(Z_2) undefined");
    if (!tri_ok(c.cs_z2_abelian, is_abelian(G, *sd.cs_z2))) return no("C_S(Z_2) abelian");
  }
  if (c.derived_elementary_abelian != Tri::any &&
      !tri_ok(c.derived_elementary_abelian, profile(G, sd.lower[1]).elementary_abelian))
    return no("derived subgroup");
  if (c.maximal_elementary_abelian != Tri::any &&
      !tri_ok(c.maximal_elementary_abelian, has_maximal(G, pred_elem_ab)))
    return no("elementary abelian maximal subgroup");
  if (c.maximal_abelian != Tri::any && !tri_ok(c.maximal_abelian, has_maximal(G, pred_abelian)))
    return no("abelian maximal subgroup");
  if (c.maximal_extraspecial != Tri::any &&
      !tri_ok(c.maximal_extraspecial, has_maximal(G, pred_extraspecial)))
    return no("extraspecial maximal subgroup");
  if (c.pearl_candidates != Tri::any &&
      !tri_ok(c.pearl_candidates,
              !(G.n() == 3 ? order_p3_candidates(G) : find_pearl_candidates(G, sd)).empty()))
    return no("pearl candidates");
  if (c.sectional_rank) {
    RankReport rr = sectional_rank(G, 1'000'000'000);
    if (!rr.exact) throw Inconclusive("sectional rank could not be decided exactly");
    if (rr.k != *c.sectional_rank) return no("sectional rank " + std::to_string(rr.k));
  }
  if (c.pearl_delta != Tri::any) {
    bool any = false;
    auto cands = G.n() == 3 ? order_p3_candidates(G) : find_pearl_candidates(G, sd);
    if (!cands.empty()) {
      MaxClassForm F(G);
      AutGroupDescription A = automorphism_group(F);
      for (const auto& cc : candidate_classes(G, cands))
        if (construct_delta(F, A, cc.rep, default_lambda(G.p())).delta) {
          any = true;
          break;
        }
    }
    if (!tri_ok(c.pearl_delta, any)) return no("pearl candidate with a delta automorphism");
  }
  return true;
}

FamilyResult derive_family(const FamilyConstraints& c, uint64_t budget_limit, uint64_t shuffle_seed) {
  FamilyResult R;
  Budget budget(budget_limit);
  std::mt19937_64 rng(shuffle_seed);
  if (c.p < 3 || c.n < 3 || c.n > 7) throw InputError("family search needs an odd prime and 3 <= n <= 7");
  if (c.nilpotency_class && *c.nilpotency_class != c.n - 1) return R;

  std::vector<PcPresentation> level;
  for (bool minus : {false, true}) {
    PcPresentation P = order_p3(c.p, minus);
    if (c.n == 3 ? satisfies(P, c) : inherited_ok(P, c)) level.push_back(std::move(P));
  }
  R.levels.push_back({3, 0, 2, level.size()});
  for (int m = 3; m < c.n; ++m) {
    const bool last = m + 1 == c.n;
    FamilyLevelStat st;
    st.order_exp = m + 1;
    st.parents = level.size();
    std::vector<size_t> order(level.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<PcPresentation>> per_parent(level.size());
    for (size_t i : order) per_parent[i] = children_of(level[i], c, last, budget, rng, st.children);
    std::vector<PcPresentation> next;
    for (auto& v : per_parent)
      for (auto& g : v) next.push_back(std::move(g));
    st.classes = next.size();
    R.levels.push_back(st);
    level = std::move(next);
  }
  int k = 0;
  for (auto& G : level) {
    CatalogEntry e;
    e.label = std::to_string(c.p) + "^" + std::to_string(c.n) + "-class-" + std::to_string(++k);
    e.provenance = "derived-by-search";
    e.claim = c.describe();
    e.pres = std::move(G);
    R.classes.push_back(std::move(e));
  }
  R.budget_used = budget.used();
  return R;
}

}  // namespace pf

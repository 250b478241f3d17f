#include "pearlforge/subgroups.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace pf {

namespace {

int inv_mod(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  throw RangeError("no inverse mod p");
}

// Echelon builder with dynamic pivots, used by span/join/conjugate.
struct Echelon {
  const PcPresentation& G;
  std::array<bool, kMaxGens> used{};
  std::array<Elem, kMaxGens> gen{};
  std::array<std::vector<Elem>, kMaxGens> neg;  // neg[d][a] = gen[d]^-a
  int count = 0;

  explicit Echelon(const PcPresentation& g) : G(g) {}

  Elem sift(Elem x) const {
    for (int d = 0; d < G.n(); ++d) {
      if (!x[d]) continue;
      if (!used[d]) return x;
      x = G.mul(neg[d][x[d]], x);
    }
    return x;
  }

  // r is a nonidentity residue; normalizes and inserts it, returns its depth
  int insert(Elem r) {
    int d = G.depth(r);
    int p = G.p();
    if (r[d] != 1) r = G.pow(r, inv_mod(r[d], p));
    used[d] = true;
    gen[d] = r;
    neg[d].assign(p, Elem{});
    Elem pw{};
    for (int a = 1; a < p; ++a) {
      pw = G.mul(pw, r);
      neg[d][a] = G.inv(pw);
    }
    ++count;
    return d;
  }

  void seed(const Subgroup& H) {
    for (const Elem& h : H.gens()) {
      int d = G.depth(h);
      used[d] = true;
      gen[d] = h;
      neg[d].assign(G.p(), Elem{});
      for (int a = 1; a < G.p(); ++a) neg[d][a] = H.gen_negpow(H.slot(d), a);
      ++count;
    }
  }

  void close(std::vector<Elem> queue) {
    while (!queue.empty()) {
      Elem x = queue.back();
      queue.pop_back();
      Elem r = sift(x);
      if (is_identity(r)) continue;
      int d = insert(r);
      const Elem& g = gen[d];
      queue.push_back(G.pow(g, G.p()));
      for (int e = 0; e < G.n(); ++e)
        if (used[e] && e != d) queue.push_back(G.comm(g, gen[e]));
    }
  }

  std::vector<Elem> list() const {
    std::vector<Elem> out;
    for (int d = 0; d < G.n(); ++d)
      if (used[d]) out.push_back(gen[d]);
    return out;
  }
};

}  // namespace

bool Subgroup::operator<(const Subgroup& o) const {
  if (gens_.size() != o.gens_.size()) return gens_.size() < o.gens_.size();
  return gens_ < o.gens_;
}

size_t SubgroupHash::operator()(const Subgroup& H) const noexcept {
  size_t h = 1469598103934665603ull;
  ElemHash eh;
  for (const Elem& e : H.gens()) h = (h ^ eh(e)) * 1099511628211ull;
  return h;
}

Subgroup make_subgroup_from_igs(const PcPresentation& G, std::vector<Elem> igs) {
  int p = G.p();
  std::sort(igs.begin(), igs.end(), [&](const Elem& a, const Elem& b) { return G.depth(a) < G.depth(b); });
  for (size_t i = 0; i < igs.size(); ++i) {
    int d = G.depth(igs[i]);
    if (d == G.n()) throw RangeError("identity element in induced sequence");
    if (i && d == G.depth(igs[i - 1])) throw RangeError("repeated depth in induced sequence");
    if (igs[i][d] != 1) igs[i] = G.pow(igs[i], inv_mod(igs[i][d], p));
  }
  size_t m = igs.size();
  std::vector<std::vector<Elem>> pw(m), ng(m);
  for (size_t i = 0; i < m; ++i) {
    pw[i].assign(p, Elem{});
    ng[i].assign(p, Elem{});
  }
  // canonicalize from the deepest generator up so the right factors are final
  for (size_t ii = m; ii-- > 0;) {
    for (size_t j = ii + 1; j < m; ++j) {
      int dj = G.depth(igs[j]);
      int c = igs[ii][dj];
      if (c) igs[ii] = G.mul(igs[ii], ng[j][c]);
    }
    for (int a = 1; a < p; ++a) {
      pw[ii][a] = G.mul(pw[ii][a - 1], igs[ii]);
      ng[ii][a] = G.inv(pw[ii][a]);
    }
  }
  Subgroup H;
  H.gens_ = std::move(igs);
  H.slot_.fill(-1);
  for (size_t i = 0; i < m; ++i) {
    int d = G.depth(H.gens_[i]);
    H.mask_ |= 1u << d;
    H.slot_[d] = static_cast<int8_t>(i);
  }
  H.pow_ = std::make_shared<const std::vector<std::vector<Elem>>>(std::move(pw));
  H.negpow_ = std::make_shared<const std::vector<std::vector<Elem>>>(std::move(ng));
  return H;
}

bool Subgroup::sift(const PcPresentation& G, Elem& x) const {
  for (int d = 0; d < G.n(); ++d) {
    if (!x[d]) continue;
    if (!has_pivot(d)) return false;
    x = G.mul((*negpow_)[slot_[d]][x[d]], x);
  }
  return true;
}

bool Subgroup::contains(const PcPresentation& G, const Elem& x) const {
  Elem y = x;
  return sift(G, y);
}

Elem Subgroup::reduce_right(const PcPresentation& G, const Elem& x) const {
  Elem y = x;
  for (size_t i = 0; i < gens_.size(); ++i) {
    int d = G.depth(gens_[i]);
    if (y[d]) y = G.mul(y, (*negpow_)[i][y[d]]);
  }
  return y;
}

std::vector<int> Subgroup::coords(const PcPresentation& G, const Elem& x) const {
  std::vector<int> c(gens_.size(), 0);
  Elem y = x;
  for (int d = 0; d < G.n(); ++d) {
    if (!y[d]) continue;
    if (!has_pivot(d)) throw RangeError("element not in subgroup");
    c[slot_[d]] = y[d];
    y = G.mul((*negpow_)[slot_[d]][y[d]], y);
  }
  return c;
}

Elem Subgroup::from_coords(const PcPresentation& G, const std::vector<int>& c) const {
  Elem x{};
  for (size_t i = 0; i < gens_.size(); ++i)
    if (c[i]) x = G.mul(x, (*pow_)[i][c[i]]);
  return x;
}

Subgroup trivial_subgroup(const PcPresentation& G) { return make_subgroup_from_igs(G, {}); }

Subgroup pc_tail(const PcPresentation& G, int d) {
  std::vector<Elem> v;
  for (int i = d; i < G.n(); ++i) v.push_back(G.gen(i));
  return make_subgroup_from_igs(G, v);
}

Subgroup whole_group(const PcPresentation& G) { return pc_tail(G, 0); }

Subgroup span(const PcPresentation& G, const std::vector<Elem>& elems) {
  Echelon E(G);
  E.close(elems);
  return make_subgroup_from_igs(G, E.list());
}

Subgroup join(const PcPresentation& G, const Subgroup& A, const std::vector<Elem>& extra) {
  std::vector<Elem> q;
  for (const Elem& x : extra)
    if (!A.contains(G, x)) q.push_back(x);
  if (q.empty()) return A;
  Echelon E(G);
  E.seed(A);
  E.close(q);
  return make_subgroup_from_igs(G, E.list());
}

Subgroup join(const PcPresentation& G, const Subgroup& A, const Subgroup& B) {
  if (A.size_exp() >= B.size_exp()) return join(G, A, B.gens());
  return join(G, B, A.gens());
}

Subgroup conjugate(const PcPresentation& G, const Subgroup& H, const Elem& g) {
  if (is_identity(g)) return H;
  Elem gi = G.inv(g);
  Echelon E(G);
  std::vector<Elem> imgs;
  imgs.reserve(H.gens().size());
  for (const Elem& h : H.gens()) imgs.push_back(G.mul(gi, G.mul(h, g)));
  for (const Elem& x : imgs) {
    Elem r = E.sift(x);
    if (!is_identity(r)) E.insert(r);
  }
  if (E.count != H.size_exp()) E.close(imgs);
  return make_subgroup_from_igs(G, E.list());
}

Subgroup normal_closure(const PcPresentation& G, const Subgroup& H, const Subgroup& K) {
  Subgroup R = H;
  for (;;) {
    std::vector<Elem> extra;
    for (const Elem& k : K.gens()) {
      Elem ki = G.inv(k);
      for (const Elem& h : R.gens()) {
        Elem c = G.mul(ki, G.mul(h, k));
        if (!R.contains(G, c)) extra.push_back(c);
      }
    }
    if (extra.empty()) return R;
    R = join(G, R, extra);
  }
}

Subgroup commutator_subgroup(const PcPresentation& G, const Subgroup& A, const Subgroup& B) {
  std::vector<Elem> cs;
  for (const Elem& a : A.gens())
    for (const Elem& b : B.gens()) cs.push_back(G.comm(a, b));
  Subgroup C = span(G, cs);
  return normal_closure(G, C, join(G, A, B));
}

Subgroup intersection(const PcPresentation& G, const Subgroup& A, const Subgroup& B) {
  const Subgroup& small = A.size_exp() <= B.size_exp() ? A : B;
  const Subgroup& big = A.size_exp() <= B.size_exp() ? B : A;
  if (is_subgroup_of(G, small, big)) return small;
  // Walk the small subgroup layer by layer from the bottom: an element of
  // small ∩ big is found as coordinates over small's sequence.
  std::vector<Elem> found;
  Subgroup acc = trivial_subgroup(G);
  for (const Elem& x : elements(G, small)) {
    if (is_identity(x) || acc.contains(G, x)) continue;
    if (big.contains(G, x)) {
      found.push_back(x);
      acc = join(G, acc, std::vector<Elem>{x});
    }
  }
  return acc;
}

bool is_subgroup_of(const PcPresentation& G, const Subgroup& A, const Subgroup& B) {
  if (A.size_exp() > B.size_exp()) return false;
  for (const Elem& a : A.gens())
    if (!B.contains(G, a)) return false;
  return true;
}

bool normalizes(const PcPresentation& G, const Elem& g, const Subgroup& H) {
  Elem gi = G.inv(g);
  for (const Elem& h : H.gens())
    if (!H.contains(G, G.mul(gi, G.mul(h, g)))) return false;
  return true;
}

bool is_normal_in(const PcPresentation& G, const Subgroup& H, const Subgroup& K) {
  for (const Elem& k : K.gens())
    if (!normalizes(G, k, H)) return false;
  return true;
}

bool is_abelian(const PcPresentation& G, const Subgroup& H) {
  const auto& g = H.gens();
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = i + 1; j < g.size(); ++j)
      if (G.mul(g[i], g[j]) != G.mul(g[j], g[i])) return false;
  return true;
}

Subgroup centralizer_mod(const PcPresentation& G, const Subgroup& K, const std::vector<Elem>& X,
                         const Subgroup& N, const Subgroup* ambient) {
  Subgroup whole;
  if (!ambient) {
    whole = whole_group(G);
    ambient = &whole;
  }
  const int n = G.n();
  const int p = G.p();
  // M[d] = (ambient ∩ G_d) N
  std::vector<Subgroup> M(n + 1);
  M[n] = N;
  for (int d = n - 1; d >= 0; --d) {
    if (ambient->has_pivot(d))
      M[d] = join(G, M[d + 1], std::vector<Elem>{ambient->gens()[ambient->slot(d)]});
    else
      M[d] = M[d + 1];
  }
  Subgroup C = K;
  std::vector<Elem> xs;
  for (const Elem& x : X)
    if (!N.contains(G, x)) xs.push_back(x);
  if (xs.empty()) return C;

  for (int d = 0; d < n; ++d) {
    if (M[d].size_exp() == M[d + 1].size_exp()) continue;
    const Subgroup& Mn = M[d + 1];
    auto value = [&](const Elem& s) {
      std::vector<int> v(xs.size());
      for (size_t t = 0; t < xs.size(); ++t) {
        Elem r = G.comm(xs[t], s);
        Mn.sift(G, r);
        v[t] = r[d];
      }
      return v;
    };
    struct Row {
      Elem e;
      std::vector<int> v;
      size_t col;
    };
    std::vector<Row> rows;
    std::vector<Elem> kern;
    bool all_zero = true;
    for (const Elem& c : C.gens()) {
      Elem e = c;
      std::vector<int> v = value(c);
      for (const Row& r : rows) {
        int coef = v[r.col];
        if (!coef) continue;
        e = G.mul(e, G.pow(r.e, -coef));
        for (size_t t = 0; t < v.size(); ++t) v[t] = ((v[t] - coef * r.v[t]) % p + p) % p;
      }
      size_t col = 0;
      while (col < v.size() && !v[col]) ++col;
      if (col == v.size()) {
        kern.push_back(e);
        continue;
      }
      all_zero = false;
      int s = inv_mod(v[col], p);
      e = G.pow(e, s);
      for (int& t : v) t = t * s % p;
      rows.push_back({e, v, col});
    }
    if (all_zero) continue;
    for (const Row& r : rows) kern.push_back(G.pow(r.e, p));
    for (size_t a = 0; a < rows.size(); ++a)
      for (size_t b = a + 1; b < rows.size(); ++b) kern.push_back(G.comm(rows[a].e, rows[b].e));
    C = normal_closure(G, span(G, kern), C);
  }
  return C;
}

Subgroup centralizer(const PcPresentation& G, const Subgroup& K, const std::vector<Elem>& X) {
  return centralizer_mod(G, K, X, trivial_subgroup(G));
}

Subgroup centralizer(const PcPresentation& G, const Subgroup& K, const Subgroup& X) {
  return centralizer(G, K, X.gens());
}

Subgroup center(const PcPresentation& G, const Subgroup& H) {
  return centralizer_mod(G, H, H.gens(), trivial_subgroup(G), &H);
}

OrbitResult subgroup_orbit(const PcPresentation& G, const Subgroup& K, const Subgroup& H,
                           uint64_t* budget_used, uint64_t budget) {
  OrbitResult R;
  std::unordered_map<Subgroup, size_t, SubgroupHash> index;
  R.orbit.push_back(H);
  R.transversal.push_back(Elem{});
  index.emplace(H, 0);
  std::vector<Elem> stab;
  auto tick = [&](uint64_t k) {
    if (!budget_used) return;
    *budget_used += k;
    if (*budget_used > budget) throw BudgetExceeded("subgroup orbit exceeded budget", *budget_used);
  };
  tick(1);
  const auto& kg = K.gens();
  for (size_t ii = kg.size(); ii-- > 0;) {
    const Elem& g = kg[ii];
    Subgroup Hg = conjugate(G, H, g);
    auto it = index.find(Hg);
    if (it != index.end()) {
      stab.push_back(G.mul(g, G.inv(R.transversal[it->second])));
      continue;
    }
    size_t base = R.orbit.size();
    Elem ge{};
    for (int e = 1; e < G.p(); ++e) {
      ge = G.mul(ge, g);
      for (size_t t = 0; t < base; ++t) {
        Subgroup Q = conjugate(G, R.orbit[t], ge);
        index.emplace(Q, R.orbit.size());
        R.orbit.push_back(std::move(Q));
        R.transversal.push_back(G.mul(R.transversal[t], ge));
      }
      tick(base);
    }
  }
  R.stabilizer = span(G, stab);
  return R;
}

Subgroup normalizer(const PcPresentation& G, const Subgroup& K, const Subgroup& H) {
  return subgroup_orbit(G, K, H).stabilizer;
}

std::optional<Elem> find_conjugator(const PcPresentation& G, const Subgroup& K, const Subgroup& A,
                                    const Subgroup& B) {
  if (A.size_exp() != B.size_exp()) return std::nullopt;
  OrbitResult R = subgroup_orbit(G, K, A);
  for (size_t i = 0; i < R.orbit.size(); ++i)
    if (R.orbit[i] == B) return R.transversal[i];
  return std::nullopt;
}

std::vector<Elem> elements(const PcPresentation& G, const Subgroup& H) {
  std::vector<Elem> cur{Elem{}};
  for (size_t i = H.gens().size(); i-- > 0;) {
    std::vector<Elem> next;
    next.reserve(cur.size() * G.p());
    for (int a = 0; a < G.p(); ++a) {
      const Elem& ha = H.gen_pow(static_cast<int>(i), a);
      for (const Elem& e : cur) next.push_back(a ? G.mul(ha, e) : e);
    }
    cur.swap(next);
  }
  return cur;
}

std::vector<Elem> right_transversal(const PcPresentation& G, const Subgroup& K, const Subgroup& H) {
  if (K.size_exp() == G.n()) {
    // the representatives are exactly the vectors vanishing at H's pivots
    std::vector<int> free;
    for (int d = 0; d < G.n(); ++d)
      if (!H.has_pivot(d)) free.push_back(d);
    std::vector<Elem> out{Elem{}};
    for (int d : free) {
      const size_t m = out.size();
      for (int a = 1; a < G.p(); ++a)
        for (size_t i = 0; i < m; ++i) {
          Elem x = out[i];
          x[d] = static_cast<uint8_t>(a);
          out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::unordered_set<Elem, ElemHash> seen;
  std::vector<Elem> out;
  for (const Elem& x : elements(G, K)) {
    Elem r = H.reduce_right(G, x);
    if (seen.insert(r).second) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

uint64_t subgroup_order(const PcPresentation& G, const Subgroup& H) {
  uint64_t o = 1;
  for (int i = 0; i < H.size_exp(); ++i) o *= static_cast<uint64_t>(G.p());
  return o;
}

Subgroup frattini(const PcPresentation& G, const Subgroup& H) {
  std::vector<Elem> v;
  const auto& g = H.gens();
  for (size_t i = 0; i < g.size(); ++i) {
    v.push_back(G.pow(g[i], G.p()));
    for (size_t j = i + 1; j < g.size(); ++j) v.push_back(G.comm(g[i], g[j]));
  }
  return normal_closure(G, span(G, v), H);
}

int generator_rank(const PcPresentation& G, const Subgroup& H) {
  return H.size_exp() - frattini(G, H).size_exp();
}

uint64_t subgroup_exponent(const PcPresentation& G, const Subgroup& H) {
  uint64_t e = 1;
  for (const Elem& x : elements(G, H)) e = std::max(e, G.order(x));
  return e;
}

SubgroupProfile profile(const PcPresentation& G, const Subgroup& H) {
  SubgroupProfile P;
  P.frattini = frattini(G, H);
  P.d = H.size_exp() - P.frattini.size_exp();
  P.abelian = is_abelian(G, H);
  P.elementary_abelian = P.frattini.size_exp() == 0;
  P.exponent = subgroup_exponent(G, H);
  if (!P.abelian) {
    Subgroup Z = center(G, H);
    Subgroup D = commutator_subgroup(G, H, H);
    P.extraspecial = Z.size_exp() == 1 && Z == D && D == P.frattini;
  }
  return P;
}

std::vector<Subgroup> lower_central_series_of(const PcPresentation& G, const Subgroup& H) {
  std::vector<Subgroup> out{H};
  while (out.back().size_exp() > 0) {
    Subgroup next = commutator_subgroup(G, out.back(), H);
    if (next == out.back()) break;  // cannot happen for p-groups
    out.push_back(next);
  }
  return out;
}

std::vector<Subgroup> upper_central_series_of(const PcPresentation& G, const Subgroup& H) {
  std::vector<Subgroup> out{trivial_subgroup(G)};
  while (out.back() != H) {
    Subgroup next = centralizer_mod(G, H, H.gens(), out.back(), &H);
    if (next == out.back()) break;
    out.push_back(next);
  }
  return out;
}

int nilpotency_class(const PcPresentation& G, const Subgroup& H) {
  return static_cast<int>(lower_central_series_of(G, H).size()) - 1;
}

std::vector<SubgroupClass> subgroup_classes(const PcPresentation& G, uint64_t budget, uint64_t* used_out) {
  uint64_t used = 0;
  const int n = G.n();
  const int p = G.p();
  Subgroup S = whole_group(G);
  std::vector<SubgroupClass> out;
  std::vector<Subgroup> todo{trivial_subgroup(G)};
  while (!todo.empty()) {
    Subgroup L = std::move(todo.back());
    todo.pop_back();
    OrbitResult orb = subgroup_orbit(G, S, L, &used, budget);
    const Subgroup& N = orb.stabilizer;
    out.push_back({L, N, orb.orbit.size()});
    int dL = L.gens().empty() ? n : G.depth(L.gens().front());
    std::unordered_set<Subgroup, SubgroupHash> seen;
    for (int d = 0; d < dL; ++d) {
      if (!N.has_pivot(d)) continue;
      const Elem& base = N.gens()[N.slot(d)];
      // elements of N ∩ G_{d+1}
      std::vector<Elem> tail{Elem{}};
      for (size_t i = N.gens().size(); i-- > 0;) {
        if (G.depth(N.gens()[i]) <= d) break;
        std::vector<Elem> next;
        next.reserve(tail.size() * p);
        for (int a = 0; a < p; ++a) {
          const Elem& na = N.gen_pow(static_cast<int>(i), a);
          for (const Elem& e : tail) next.push_back(a ? G.mul(na, e) : e);
        }
        tail.swap(next);
      }
      std::unordered_set<Elem, ElemHash> xs;
      std::vector<Elem> order;
      for (const Elem& y : tail) {
        Elem x = L.reduce_right(G, G.mul(base, y));
        if (xs.insert(x).second) order.push_back(x);
      }
      std::sort(order.begin(), order.end());
      for (const Elem& x : order) {
        if (!L.contains(G, G.pow(x, p))) continue;
        std::vector<Elem> igs{x};
        igs.insert(igs.end(), L.gens().begin(), L.gens().end());
        Subgroup H = make_subgroup_from_igs(G, std::move(igs));
        if (++used > budget) throw BudgetExceeded("subgroup enumeration exceeded budget", used);
        if (seen.count(H)) continue;
        OrbitResult sub = subgroup_orbit(G, N, H, &used, budget);
        for (auto& Q : sub.orbit) seen.insert(std::move(Q));
        todo.push_back(std::move(H));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const SubgroupClass& a, const SubgroupClass& b) { return a.rep < b.rep; });
  if (used_out) *used_out = used;
  return out;
}

std::vector<Subgroup> enumerate_subgroups(const PcPresentation& G, int k, uint64_t budget) {
  uint64_t used = 0;
  auto classes = subgroup_classes(G, budget, &used);
  Subgroup S = whole_group(G);
  std::vector<Subgroup> out;
  for (const auto& c : classes) {
    if (c.rep.size_exp() != k) continue;
    auto orb = subgroup_orbit(G, S, c.rep, &used, budget);
    for (auto& Q : orb.orbit) out.push_back(std::move(Q));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Subgroup> all_subgroups(const PcPresentation& G, uint64_t budget) {
  uint64_t used = 0;
  auto classes = subgroup_classes(G, budget, &used);
  Subgroup S = whole_group(G);
  std::vector<Subgroup> out;
  for (const auto& c : classes) {
    auto orb = subgroup_orbit(G, S, c.rep, &used, budget);
    for (auto& Q : orb.orbit) out.push_back(std::move(Q));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Every subgroup between F and H where F ⊴ H and H/F is elementary abelian.
template <class Fn>
void for_each_section_subgroup(const PcPresentation& G, const Subgroup& H, const Subgroup& F, Fn&& fn) {
  std::vector<Elem> basis;
  for (const Elem& h : H.gens())
    if (!F.has_pivot(G.depth(h))) basis.push_back(h);
  const int r = static_cast<int>(basis.size());
  const int p = G.p();
  // subspaces of F_p^r in reduced row echelon form
  for (uint32_t pivmask = 0; pivmask < (1u << r); ++pivmask) {
    std::vector<int> piv;
    for (int c = 0; c < r; ++c)
      if ((pivmask >> c) & 1u) piv.push_back(c);
    // free slots: (row i, column c) with c > piv[i] and c not a pivot
    std::vector<std::pair<int, int>> free;
    for (size_t i = 0; i < piv.size(); ++i)
      for (int c = piv[i] + 1; c < r; ++c)
        if (!((pivmask >> c) & 1u)) free.emplace_back(static_cast<int>(i), c);
    std::vector<int> val(free.size(), 0);
    for (;;) {
      std::vector<Elem> gens(F.gens().begin(), F.gens().end());
      for (size_t i = 0; i < piv.size(); ++i) {
        Elem e = basis[piv[i]];
        for (size_t f = 0; f < free.size(); ++f)
          if (free[f].first == static_cast<int>(i) && val[f]) e = G.mul(e, G.pow(basis[free[f].second], val[f]));
        gens.push_back(e);
      }
      fn(span(G, gens));
      size_t t = 0;
      while (t < val.size() && ++val[t] == p) val[t++] = 0;
      if (t == val.size()) break;
    }
  }
}

}  // namespace

RankReport sectional_rank(const PcPresentation& G, uint64_t budget) {
  RankReport R;
  try {
    uint64_t used = 0;
    auto classes = subgroup_classes(G, budget, &used);
    R.exact = true;
    R.budget_used = used;
    R.k = -1;
    for (const auto& c : classes) {
      int d = generator_rank(G, c.rep);
      if (d > R.k) {
        R.k = d;
        R.witness = c.rep;
      }
    }
    R.scanned.push_back("all subgroup classes");
    return R;
  } catch (const BudgetExceeded& e) {
    R.exact = false;
    R.budget_used = e.used();
  }
  R.k = -1;
  auto consider = [&](const Subgroup& H) {
    int d = generator_rank(G, H);
    if (d > R.k || (d == R.k && H < R.witness)) {
      R.k = d;
      R.witness = H;
    }
  };
  Subgroup S = whole_group(G);
  auto lcs = lower_central_series_of(G, S);
  for (const auto& H : lcs) consider(H);
  R.scanned.push_back("lower central series");
  auto ucs = upper_central_series_of(G, S);
  for (const auto& H : ucs) consider(H);
  R.scanned.push_back("upper central series");
  Subgroup F = frattini(G, S);
  for_each_section_subgroup(G, S, F, [&](const Subgroup& H) {
    if (H.size_exp() == G.n() - 1) consider(H);
  });
  R.scanned.push_back("maximal subgroups");
  int n = G.n();
  if (static_cast<int>(lcs.size()) - 1 == n - 1 && n >= 4) {
    std::vector<Elem> x2 = lcs[1].gens();
    Subgroup g1 = centralizer_mod(G, S, x2, lcs[3]);
    Subgroup F1 = frattini(G, g1);
    for_each_section_subgroup(G, g1, F1, [&](const Subgroup& H) { consider(H); });
    R.scanned.push_back("subgroups of the two-step centralizer containing its Frattini subgroup");
  }
  return R;
}

std::string subgroup_to_string(const PcPresentation& G, const Subgroup& H) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < H.gens().size(); ++i) os << (i ? " " : "") << elem_to_string(G, H.gens()[i]);
  os << ']';
  return os.str();
}

}  // namespace pf

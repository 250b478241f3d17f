// Brute-force reference arithmetic for small groups. Shares nothing with the
// engine beyond reading relation data out of a PcPresentation: words are
// rewritten letter by letter, and everything else works on a full
// multiplication table.
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

#include "pearlforge/pc.hpp"

namespace oracle {

using Vec = std::vector<int>;

struct Rules {
  int p = 0, n = 0;
  std::vector<Vec> power;             // g_i^p
  std::vector<std::vector<Vec>> comm;  // comm[j][i] = [g_j, g_i], j > i
};

inline Rules rules_of(const pf::PcPresentation& G) {
  Rules R;
  R.p = G.p();
  R.n = G.n();
  R.power.assign(R.n, Vec(R.n, 0));
  R.comm.assign(R.n, std::vector<Vec>(R.n, Vec(R.n, 0)));
  for (int i = 0; i < R.n; ++i)
    for (int k = 0; k < R.n; ++k) R.power[i][k] = G.power(i)[k];
  for (int j = 0; j < R.n; ++j)
    for (int i = 0; i < j; ++i)
      for (int k = 0; k < R.n; ++k) R.comm[j][i][k] = G.comm_rel(j, i)[k];
  return R;
}

inline std::vector<int> letters(const Vec& v) {
  std::vector<int> w;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) w.insert(w.end(), v[i], i);
  return w;
}

// Leftmost rewriting: swap g_j g_i -> g_i g_j [g_j, g_i] for j > i, then
// collapse p equal letters by the power relation. Throws past max_len.
inline Vec normal_form(const Rules& R, std::vector<int> w, size_t max_len = 1u << 22) {
  size_t k = 0;
  while (true) {
    if (w.size() > max_len) throw std::length_error("oracle word too long");
    bool changed = false;
    for (; k + 1 < w.size(); ++k) {
      if (w[k] > w[k + 1]) {
        int j = w[k], i = w[k + 1];
        auto c = letters(R.comm[j][i]);
        w[k] = i;
        w[k + 1] = j;
        w.insert(w.begin() + k + 2, c.begin(), c.end());
        changed = true;
        break;
      }
    }
    if (changed) {
      k = k ? k - 1 : 0;
      continue;
    }
    // sorted: look for a run of p
    size_t run = 1;
    for (k = 1; k <= w.size(); ++k) {
      if (k < w.size() && w[k] == w[k - 1]) {
        if (++run == static_cast<size_t>(R.p)) break;
      } else {
        run = 1;
      }
    }
    if (k > w.size() || w.empty()) break;
    size_t start = k + 1 - R.p;
    int g = w[start];
    auto c = letters(R.power[g]);
    w.erase(w.begin() + start, w.begin() + k + 1);
    w.insert(w.begin() + start, c.begin(), c.end());
    k = start ? start - 1 : 0;
  }
  Vec v(R.n, 0);
  for (int g : w) ++v[g];
  return v;
}

inline Vec product(const Rules& R, const Vec& a, const Vec& b) {
  auto w = letters(a);
  auto wb = letters(b);
  w.insert(w.end(), wb.begin(), wb.end());
  return normal_form(R, w);
}

// Multiplication table on all p^n normal forms.
struct Table {
  int p = 0, n = 0;
  uint32_t N = 0;
  std::vector<uint32_t> mul;
  std::vector<uint32_t> inv;

  uint32_t encode(const Vec& v) const {
    uint32_t x = 0;
    for (int i = n - 1; i >= 0; --i) x = x * p + v[i];
    return x;
  }
  Vec decode(uint32_t x) const {
    Vec v(n);
    for (int i = 0; i < n; ++i) {
      v[i] = x % p;
      x /= p;
    }
    return v;
  }
  uint32_t encode(const pf::Elem& e) const {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = e[i];
    return encode(v);
  }
  pf::Elem elem(uint32_t x) const {
    pf::Elem e{};
    auto v = decode(x);
    for (int i = 0; i < n; ++i) e[i] = static_cast<uint8_t>(v[i]);
    return e;
  }
  uint32_t operator()(uint32_t a, uint32_t b) const { return mul[size_t(a) * N + b]; }
  uint32_t gen(int i) const {
    Vec v(n, 0);
    v[i] = 1;
    return encode(v);
  }
  uint32_t comm(uint32_t a, uint32_t b) const { return (*this)((*this)(inv[a], inv[b]), (*this)(a, b)); }
  uint64_t order(uint32_t a) const {
    uint64_t k = 1;
    for (uint32_t x = a; x != 0; x = (*this)(x, a)) ++k;
    return k;
  }
};

inline Table build_table(const Rules& R) {
  Table T;
  T.p = R.p;
  T.n = R.n;
  T.N = 1;
  for (int i = 0; i < R.n; ++i) T.N *= R.p;
  T.mul.resize(size_t(T.N) * T.N);
  std::vector<Vec> el(T.N);
  for (uint32_t x = 0; x < T.N; ++x) el[x] = T.decode(x);
  for (uint32_t a = 0; a < T.N; ++a)
    for (uint32_t b = 0; b < T.N; ++b) T.mul[size_t(a) * T.N + b] = T.encode(product(R, el[a], el[b]));
  T.inv.assign(T.N, UINT32_MAX);
  for (uint32_t a = 0; a < T.N; ++a)
    for (uint32_t b = 0; b < T.N; ++b)
      if (T(a, b) == 0) T.inv[a] = b;
  return T;
}

inline bool associative(const Table& T) {
  for (uint32_t a = 0; a < T.N; ++a)
    for (uint32_t b = 0; b < T.N; ++b) {
      uint32_t ab = T(a, b);
      for (uint32_t c = 0; c < T.N; ++c)
        if (T(ab, c) != T(a, T(b, c))) return false;
    }
  return true;
}

using Set = std::vector<uint32_t>;  // sorted element ids

inline Set closure(const Table& T, const std::vector<uint32_t>& gens) {
  std::vector<char> in(T.N, 0);
  std::deque<uint32_t> q{0};
  in[0] = 1;
  Set out;
  while (!q.empty()) {
    uint32_t x = q.front();
    q.pop_front();
    out.push_back(x);
    for (uint32_t g : gens) {
      uint32_t y = T(x, g);
      if (!in[y]) {
        in[y] = 1;
        q.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Set whole(const Table& T) {
  Set s(T.N);
  for (uint32_t x = 0; x < T.N; ++x) s[x] = x;
  return s;
}

inline Set commutator(const Table& T, const Set& A, const Set& B) {
  std::vector<uint32_t> g;
  for (uint32_t a : A)
    for (uint32_t b : B) g.push_back(T.comm(a, b));
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return closure(T, g);
}

inline std::vector<Set> lower_central(const Table& T) {
  std::vector<Set> L{whole(T)};
  while (L.back().size() > 1) L.push_back(commutator(T, L.back(), whole(T)));
  return L;
}

inline Set centralizer(const Table& T, const std::vector<uint32_t>& X) {
  Set c;
  for (uint32_t s = 0; s < T.N; ++s) {
    bool ok = true;
    for (uint32_t x : X) ok = ok && T(s, x) == T(x, s);
    if (ok) c.push_back(s);
  }
  return c;
}

inline std::vector<Set> upper_central(const Table& T) {
  std::vector<Set> Z{{0}};
  while (Z.back().size() < T.N) {
    std::vector<char> in(T.N, 0);
    for (uint32_t z : Z.back()) in[z] = 1;
    Set next;
    for (uint32_t s = 0; s < T.N; ++s) {
      bool ok = true;
      for (uint32_t g = 0; g < T.N && ok; ++g) ok = in[T.comm(s, g)];
      if (ok) next.push_back(s);
    }
    if (next.size() == Z.back().size()) break;  // not nilpotent
    Z.push_back(next);
  }
  return Z;
}

// Every subgroup, grown one element at a time from the trivial group.
inline std::set<Set> all_subgroups(const Table& T) {
  std::set<Set> seen{{0}};
  std::deque<Set> q{{0}};
  while (!q.empty()) {
    Set H = q.front();
    q.pop_front();
    std::vector<char> in(T.N, 0);
    for (uint32_t h : H) in[h] = 1;
    for (uint32_t x = 0; x < T.N; ++x) {
      if (in[x]) continue;
      std::vector<uint32_t> g = H;
      g.push_back(x);
      Set K = closure(T, g);
      if (seen.insert(K).second) q.push_back(K);
    }
  }
  return seen;
}

// log_p |H : Phi(H)|
inline int generator_rank(const Table& T, const Set& H) {
  std::vector<uint32_t> g;
  for (uint32_t h : H) {
    uint32_t x = 0;
    for (int k = 0; k < T.p; ++k) x = T(x, h);
    g.push_back(x);
  }
  for (uint32_t a : H)
    for (uint32_t b : H) g.push_back(T.comm(a, b));
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  size_t idx = H.size() / closure(T, g).size();
  int r = 0;
  while (idx > 1) {
    idx /= T.p;
    ++r;
  }
  return r;
}

// Homomorphism G -> H sending gens[i] to imgs[i], walked over the Cayley graph;
// empty when some relation fails.
inline std::vector<uint32_t> extend(const Table& G, const std::vector<uint32_t>& gens, const Table& H,
                                    const std::vector<uint32_t>& imgs) {
  std::vector<uint32_t> f(G.N, UINT32_MAX);
  f[0] = 0;
  std::deque<uint32_t> q{0};
  while (!q.empty()) {
    uint32_t x = q.front();
    q.pop_front();
    for (size_t i = 0; i < gens.size(); ++i) {
      uint32_t y = G(x, gens[i]), fy = H(f[x], imgs[i]);
      if (f[y] == UINT32_MAX) {
        f[y] = fy;
        q.push_back(y);
      } else if (f[y] != fy) {
        return {};
      }
    }
  }
  for (uint32_t v : f)
    if (v == UINT32_MAX) return {};  // gens do not generate
  return f;
}

inline bool bijective(const std::vector<uint32_t>& f) {
  std::vector<char> hit(f.size(), 0);
  for (uint32_t v : f) {
    if (v >= f.size() || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

// Isomorphisms or automorphisms through a two-element generating set of G.
inline uint64_t count_isos(const Table& G, uint32_t a, uint32_t b, const Table& H, bool stop_at_first) {
  if (G.N != H.N) return 0;
  uint64_t c = 0;
  for (uint32_t x = 1; x < H.N; ++x)
    for (uint32_t y = 1; y < H.N; ++y) {
      auto f = extend(G, {a, b}, H, {x, y});
      if (!f.empty() && bijective(f)) {
        ++c;
        if (stop_at_first) return c;
      }
    }
  return c;
}

}  // namespace oracle

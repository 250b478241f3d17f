#include "pearlforge/autos.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace pf {

namespace {

int md(long long a, int p) {
  a %= p;
  return static_cast<int>(a < 0 ? a + p : a);
}

int pow_mod(long long b, long long e, int p) {
  b = md(b, p);
  e %= (p - 1);
  if (e < 0) e += p - 1;
  long long r = 1;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<int>(r);
}

int inv_mod(int a, int p) { return pow_mod(a, p - 2, p); }

uint64_t p_prime_part(uint64_t m, int p) {
  while (m % p == 0) m /= p;
  return m;
}

uint64_t ipow(uint64_t b, int e) {
  uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Automorphism basics

Elem Automorphism::apply(const PcPresentation& G, const Elem& g) const {
  Elem r{};
  for (int i = 0; i < G.n(); ++i)
    if (g[i]) r = G.mul(r, G.pow(images[i], g[i]));
  return r;
}

Automorphism identity_automorphism(const PcPresentation& G) {
  Automorphism a;
  for (int i = 0; i < G.n(); ++i) a.images.push_back(G.gen(i));
  a.is_inner = true;
  return a;
}

Automorphism inner_automorphism(const PcPresentation& G, const Elem& g) {
  Automorphism a;
  for (int i = 0; i < G.n(); ++i) a.images.push_back(G.conj(G.gen(i), g));
  a.is_inner = true;
  return a;
}

Automorphism compose(const PcPresentation& G, const Automorphism& a, const Automorphism& b) {
  Automorphism c;
  c.images.reserve(a.images.size());
  for (const auto& y : a.images) c.images.push_back(b.apply(G, y));
  if (a.is_inner && b.is_inner && *a.is_inner && *b.is_inner) c.is_inner = true;
  return c;
}

Automorphism inverse(const PcPresentation& G, const Automorphism& a) {
  const int n = G.n(), p = G.p();
  // echelon of image-side elements, each tagged with a preimage
  std::vector<std::optional<std::pair<Elem, Elem>>> slot(n);
  std::deque<std::pair<Elem, Elem>> queue;
  for (int i = 0; i < n; ++i) queue.emplace_back(a.images[i], G.gen(i));
  while (!queue.empty()) {
    auto [e, pre] = queue.front();
    queue.pop_front();
    for (;;) {
      int d = G.depth(e);
      if (d == n) break;
      if (slot[d]) {
        int c = e[d];
        e = G.mul(G.pow(slot[d]->first, -c), e);
        pre = G.mul(G.pow(slot[d]->second, -c), pre);
        continue;
      }
      int k = inv_mod(e[d], p);
      e = G.pow(e, k);
      pre = G.pow(pre, k);
      slot[d] = std::make_pair(e, pre);
      queue.emplace_back(G.pow(e, p), G.pow(pre, p));
      for (int q = 0; q < n; ++q)
        if (q != d && slot[q])
          queue.emplace_back(G.comm(e, slot[q]->first), G.comm(pre, slot[q]->second));
      break;
    }
  }
  for (int d = 0; d < n; ++d)
    if (!slot[d]) throw InvarianceError("images do not generate the group");
  Automorphism r;
  for (int i = 0; i < n; ++i) {
    Elem e = G.gen(i), pre{};
    for (int d = 0; d < n; ++d) {
      if (!e[d]) continue;
      int c = e[d];
      e = G.mul(G.pow(slot[d]->first, -c), e);
      pre = G.mul(pre, G.pow(slot[d]->second, c));
    }
    r.images.push_back(pre);
  }
  r.is_inner = a.is_inner;
  return r;
}

uint64_t automorphism_order(const PcPresentation& G, const Automorphism& a) {
  Automorphism id = identity_automorphism(G);
  Automorphism cur = a;
  uint64_t k = 1;
  while (cur.images != id.images) {
    cur = compose(G, cur, a);
    if (++k > 100'000'000ull) throw BudgetExceeded("automorphism order", k);
  }
  return k;
}

bool is_isomorphism(const PcPresentation& A, const PcPresentation& B, const std::vector<Elem>& images) {
  if (A.p() != B.p() || A.n() != B.n() || static_cast<int>(images.size()) != A.n()) return false;
  Automorphism f{images, {}};
  const int n = A.n(), p = A.p();
  for (int i = 0; i < n; ++i) {
    if (B.pow(images[i], p) != f.apply(B, A.power(i))) return false;
    for (int j = i + 1; j < n; ++j)
      if (B.comm(images[j], images[i]) != f.apply(B, A.comm_rel(j, i))) return false;
  }
  return span(B, images).size_exp() == n;
}

bool is_automorphism(const PcPresentation& G, const Automorphism& a) { return is_isomorphism(G, G, a.images); }

Subgroup image_of(const PcPresentation& G, const Automorphism& a, const Subgroup& H) {
  std::vector<Elem> v;
  for (const auto& h : H.gens()) v.push_back(a.apply(G, h));
  return span(G, v);
}

// ---------------------------------------------------------------------------
// MaxClassForm

MaxClassForm::MaxClassForm(const PcPresentation& G) : G_(G) {
  if (!G_.consistent()) throw StateError("presentation has not passed consistency_check");
  n_ = G_.n();
  p_ = G_.p();
  sd_ = central_series(G_);
  if (!sd_.is_maximal_class || n_ < 3)
    throw Unsupported("normalized bases need a maximal-class group of order at least p^3");
  if (n_ >= 4) two_step_centralizers(G_, sd_);
  inv_.assign(p_, 0);
  for (int a = 1; a < p_; ++a) inv_[a] = inv_mod(a, p_);

  gam_.resize(n_ + 1);
  for (int k = 2; k <= n_; ++k) gam_[k] = sd_.gamma(G_, k);
  adapted_ = true;
  for (int k = 2; k < n_; ++k)
    if (gam_[k] != pc_tail(G_, k)) adapted_ = false;

  t_.assign(n_, Elem{});
  for (int k = 2; k < n_; ++k)
    for (const auto& g : gam_[k].gens())
      if (!gam_[k + 1].contains(G_, g)) {
        t_[k] = g;
        break;
      }
  if (n_ >= 4) {
    for (const auto& g : sd_.gamma1->gens())
      if (!gam_[2].contains(G_, g)) {
        t_[1] = g;
        break;
      }
    for (int i = 0; i < n_; ++i)
      if (!sd_.gamma1->contains(G_, G_.gen(i))) {
        r0_ = G_.gen(i);
        break;
      }
  } else {
    int i1 = -1;
    for (int i = 0; i < n_ && i1 < 0; ++i)
      if (!gam_[2].contains(G_, G_.gen(i))) i1 = i;
    t_[1] = G_.gen(i1);
    Subgroup L = join(G_, gam_[2], std::vector<Elem>{t_[1]});
    for (int i = 0; i < n_; ++i)
      if (!L.contains(G_, G_.gen(i))) {
        r0_ = G_.gen(i);
        break;
      }
  }

  if (adapted_) {
    int det = md(r0_[0] * t_[1][1] - t_[1][0] * r0_[1], p_);
    if (!det) throw StateError("layer-1 reference elements are dependent");
    int di = inv_[det];
    l1inv_ = {md(t_[1][1] * di, p_), md(-t_[1][0] * di, p_), md(-r0_[1] * di, p_), md(r0_[0] * di, p_)};
  } else {
    for (int a = 0; a < p_; ++a)
      for (int b = 0; b < p_; ++b)
        layer1_tab_[gam_[2].reduce_right(G_, G_.mul(G_.pow(r0_, a), G_.pow(t_[1], b)))] = {a, b};
    layer_tab_.resize(n_);
    for (int k = 2; k < n_; ++k)
      for (int a = 0; a < p_; ++a) layer_tab_[k][gam_[k + 1].reduce_right(G_, G_.pow(t_[k], a))] = a;
  }

  if (n_ >= 4) {
    auto xs = x_candidates();
    ref_ = make_basis(xs.front(), t_[1]);
  } else {
    ref_ = make_basis(r0_, t_[1]);
  }
  for (int i = 0; i < n_; ++i) gen_expr_.push_back(express(ref_, G_.gen(i)));
}

std::pair<int, int> MaxClassForm::layer1(const Elem& g) const {
  if (adapted_) {
    int u = g[0], v = g[1];
    return {md(l1inv_[0] * u + l1inv_[1] * v, p_), md(l1inv_[2] * u + l1inv_[3] * v, p_)};
  }
  auto it = layer1_tab_.find(gam_[2].reduce_right(G_, g));
  if (it == layer1_tab_.end()) throw StateError("layer-1 lookup failed");
  return it->second;
}

int MaxClassForm::layer(int k, const Elem& g) const {
  if (adapted_) return md(g[k] * inv_[t_[k][k]], p_);
  auto it = layer_tab_[k].find(gam_[k + 1].reduce_right(G_, g));
  if (it == layer_tab_[k].end()) throw StateError("layer lookup failed");
  return it->second;
}

std::vector<Elem> MaxClassForm::make_basis(const Elem& x, const Elem& s1) const {
  std::vector<Elem> b(n_);
  b[0] = x;
  b[1] = s1;
  for (int k = 2; k < n_; ++k) b[k] = G_.comm(b[k - 1], x);
  return b;
}

std::vector<int> MaxClassForm::express(const std::vector<Elem>& b, const Elem& g) const {
  std::vector<int> e(n_, 0);
  auto [u, v] = layer1(g);
  auto [a0, c0] = layer1(b[0]);
  auto [a1, c1] = layer1(b[1]);
  int det = md(a0 * c1 - a1 * c0, p_);
  if (!det) throw StateError("not a basis: layer-1 images are dependent");
  int di = inv_[det];
  e[0] = md((u * c1 - v * a1) * di, p_);
  e[1] = md((a0 * v - c0 * u) * di, p_);
  Elem rest = G_.mul(G_.inv(G_.mul(G_.pow(b[0], e[0]), G_.pow(b[1], e[1]))), g);
  for (int k = 2; k < n_; ++k) {
    int lk = layer(k, b[k]);
    if (!lk) throw StateError("not a basis: degenerate layer");
    e[k] = md(layer(k, rest) * inv_[lk], p_);
    if (e[k]) rest = G_.mul(G_.pow(b[k], -e[k]), rest);
  }
  if (!is_identity(rest)) throw StateError("basis expression did not terminate at the identity");
  return e;
}

Elem MaxClassForm::evaluate(const std::vector<Elem>& b, const std::vector<int>& e) const {
  Elem r{};
  for (int k = 0; k < n_; ++k)
    if (e[k]) r = G_.mul(r, G_.pow(b[k], e[k]));
  return r;
}

std::vector<uint8_t> MaxClassForm::relations(const std::vector<Elem>& b) const {
  std::vector<uint8_t> out;
  auto put = [&](const Elem& v) {
    auto e = express(b, v);
    for (int k = 0; k < n_; ++k) out.push_back(static_cast<uint8_t>(e[k]));
  };
  put(G_.pow(b[0], p_));
  for (int k = 1; k < n_; ++k) put(G_.pow(b[k], p_));
  for (int i = 1; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) put(G_.comm(b[j], b[i]));
  return out;
}

PcPresentation MaxClassForm::normalized_presentation(const std::vector<Elem>& b) const {
  std::vector<int> w(n_);
  w[0] = 1;
  for (int k = 1; k < n_; ++k) w[k] = std::max(1, k);
  PcPresentation P(p_, n_, w);
  auto as_elem = [&](const std::vector<int>& e) {
    Elem r{};
    for (int k = 0; k < n_; ++k) r[k] = static_cast<uint8_t>(e[k]);
    return r;
  };
  P.set_power(0, as_elem(express(b, G_.pow(b[0], p_))));
  for (int k = 1; k < n_; ++k) P.set_power(k, as_elem(express(b, G_.pow(b[k], p_))));
  for (int k = 1; k + 1 < n_; ++k) {
    Elem e{};
    e[k + 1] = 1;
    P.set_comm(k, 0, e);
  }
  for (int i = 1; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) P.set_comm(j, i, as_elem(express(b, G_.comm(b[j], b[i]))));
  if (!P.consistency_check().empty()) throw StateError("normalized presentation failed consistency");
  return P;
}

bool MaxClassForm::admissible_x(const Elem& x) const {
  if (n_ >= 4) return !sd_.gamma1->contains(G_, x) && !sd_.cs_z2->contains(G_, x);
  return !gam_[2].contains(G_, x);
}

std::vector<Elem> MaxClassForm::x_candidates() const {
  std::vector<Elem> out;
  for (int a = 0; a < p_; ++a)
    for (int b = 0; b < p_; ++b) {
      if (!a && !b) continue;
      Elem x = G_.mul(G_.pow(r0_, a), G_.pow(t_[1], b));
      if (admissible_x(x)) out.push_back(x);
    }
  return out;
}

bool MaxClassForm::search(const std::vector<uint8_t>& target, const Elem& x,
                          const std::function<bool(const std::vector<Elem>&)>& visit, uint64_t& nodes,
                          uint64_t budget) const {
  if (!admissible_x(x)) return true;
  std::vector<Elem> firsts;
  if (n_ >= 4) {
    for (int a = 1; a < p_; ++a) firsts.push_back(G_.pow(t_[1], a));
  } else {
    auto [xa, xb] = layer1(x);
    for (int a = 0; a < p_; ++a)
      for (int b = 0; b < p_; ++b)
        if (md(xa * b - xb * a, p_)) firsts.push_back(G_.mul(G_.pow(r0_, a), G_.pow(t_[1], b)));
  }
  const size_t rows = target.size() / n_;
  std::function<bool(const Elem&, int)> rec = [&](const Elem& s1, int u) -> bool {
    if (u >= 2) {
      if (++nodes > budget) throw BudgetExceeded("normalized-basis search", nodes);
      auto b = make_basis(x, s1);
      auto rel = relations(b);
      for (size_t r = 0; r < rows; ++r)
        for (int k = 2; k <= u; ++k)
          if (rel[r * n_ + k] != target[r * n_ + k]) return true;
      if (u == n_ - 1) return visit(b);
    }
    int nu = u + 1;
    for (int d = 0; d < p_; ++d) {
      Elem s = d ? G_.mul(s1, G_.pow(t_[nu], d)) : s1;
      if (!rec(s, nu)) return false;
    }
    return true;
  };
  for (const auto& s1 : firsts)
    if (!rec(s1, 1)) return false;
  return true;
}

Automorphism MaxClassForm::automorphism_from_basis(const std::vector<Elem>& b) const {
  Automorphism a;
  for (int i = 0; i < n_; ++i) a.images.push_back(evaluate(b, gen_expr_[i]));
  return a;
}

std::pair<Elem, Elem> MaxClassForm::leaf_key(const Elem& x_image, const Elem& s1_image) const {
  if (n_ < 4) throw Unsupported("leaf keys need |S| >= p^4");
  auto [a, b] = layer1(x_image);
  Elem target = G_.mul(G_.pow(r0_, a), G_.pow(t_[1], b));
  Elem y = x_image, g{};
  for (int k = 2; k < n_; ++k) {
    Elem w = G_.mul(G_.inv(y), target);
    int c = md(layer(k, w) * inv_[layer(k, G_.comm(y, t_[k - 1]))], p_);
    if (!c) continue;
    Elem h = G_.pow(t_[k - 1], c);
    y = G_.conj(y, h);
    g = G_.mul(g, h);
  }
  if (y != target) throw StateError("leaf normalization failed");
  return {target, G_.conj(s1_image, g)};
}

// ---------------------------------------------------------------------------
// matrices

Mat2 mat_mul(const Mat2& a, const Mat2& b, int p) {
  return {md(a[0] * b[0] + a[1] * b[2], p), md(a[0] * b[1] + a[1] * b[3], p), md(a[2] * b[0] + a[3] * b[2], p),
          md(a[2] * b[1] + a[3] * b[3], p)};
}

uint64_t mat_order(const Mat2& m, int p) {
  const Mat2 id{1, 0, 0, 1};
  Mat2 cur = m;
  uint64_t k = 1;
  while (cur != id) {
    cur = mat_mul(cur, m, p);
    if (++k > static_cast<uint64_t>(p) * p * p) throw StateError("matrix is not invertible");
  }
  return k;
}

namespace {

Mat2 leaf_matrix(const MaxClassForm& F, const Elem& x_img, const Elem& s1_img) {
  const int p = F.p();
  const auto& ref = F.reference_basis();
  auto [ra, rc] = F.layer1(ref[0]);
  auto [sa, sc] = F.layer1(ref[1]);
  // B_ref columns: coordinates of the reference basis in (r0, r1)
  int det = md(ra * sc - sa * rc, p);
  int di = inv_mod(det, p);
  Mat2 binv{md(sc * di, p), md(-sa * di, p), md(-rc * di, p), md(ra * di, p)};
  auto [xa, xc] = F.layer1(x_img);
  auto [ya, yc] = F.layer1(s1_img);
  Mat2 bl{xa, ya, xc, yc};
  return mat_mul(bl, binv, p);
}

int leaf_center_scalar(const MaxClassForm& F, const Elem& z_img) {
  const int n = F.n(), p = F.p();
  int base = F.layer(n - 1, F.reference_basis()[n - 1]);
  return md(F.layer(n - 1, z_img) * inv_mod(base, p), p);
}

}  // namespace

Mat2 action_on_frattini_quotient(const MaxClassForm& F, const Automorphism& a) {
  const auto& G = F.group();
  const auto& ref = F.reference_basis();
  return leaf_matrix(F, a.apply(G, ref[0]), a.apply(G, ref[1]));
}

int action_on_center(const MaxClassForm& F, const Automorphism& a) {
  return leaf_center_scalar(F, a.apply(F.group(), F.reference_basis()[F.n() - 1]));
}

// ---------------------------------------------------------------------------
// automorphism group

AutGroupDescription automorphism_group(const PcPresentation& G, uint64_t budget) {
  MaxClassForm F(G);
  return automorphism_group(F, budget);
}

AutGroupDescription automorphism_group(const MaxClassForm& F, uint64_t budget) {
  const auto& G = F.group();
  const int n = F.n(), p = F.p();
  AutGroupDescription A;
  auto target = F.relations(F.reference_basis());
  for (const auto& x : F.x_candidates())
    F.search(
        target, x,
        [&](const std::vector<Elem>& b) {
          A.leaves.push_back(b);
          return true;
        },
        A.nodes, budget);
  A.order = A.leaves.size() * ipow(p, n - 2);
  A.inner_order = ipow(p, n - 1);

  std::map<Mat2, size_t> first_leaf;
  for (size_t i = 0; i < A.leaves.size(); ++i)
    first_leaf.emplace(leaf_matrix(F, A.leaves[i][0], A.leaves[i][1]), i);
  for (const auto& [m, i] : first_leaf) A.gl2_image.push_back(m);
  A.p_prime_part = p_prime_part(A.gl2_image.size(), p);
  A.p_part = A.order / A.p_prime_part;
  for (const auto& m : A.gl2_image)
    if (mat_order(m, p) == A.p_prime_part) {
      A.p_prime_cyclic = true;
      A.p_prime_generator = m;
      A.p_prime_generator_order = A.p_prime_part;
      break;
    }

  // generators: Inn, leaves covering the GL_2 image, leaves covering the kernel
  for (int k = 0; k + 1 < n; ++k) {
    auto a = inner_automorphism(G, F.reference_basis()[k]);
    A.generators.push_back(a);
  }
  {
    std::set<Mat2> closure{Mat2{1, 0, 0, 1}};
    std::vector<Mat2> gens;
    for (const auto& [m, i] : first_leaf) {
      if (closure.count(m)) continue;
      gens.push_back(m);
      A.generators.push_back(F.automorphism_from_basis(A.leaves[i]));
      std::vector<Mat2> frontier(closure.begin(), closure.end());
      while (!frontier.empty()) {
        std::vector<Mat2> next;
        for (const auto& c : frontier)
          for (const auto& g : gens) {
            Mat2 d = mat_mul(g, c, p);
            if (closure.insert(d).second) next.push_back(d);
          }
        frontier.swap(next);
      }
    }
  }
  if (n >= 4) {
    const Mat2 id{1, 0, 0, 1};
    std::vector<std::vector<Elem>> kernel;
    for (const auto& b : A.leaves)
      if (leaf_matrix(F, b[0], b[1]) == id) kernel.push_back(b);
    const auto& ref = F.reference_basis();
    std::set<std::pair<Elem, Elem>> closure{F.leaf_key(ref[0], ref[1])};
    std::vector<Automorphism> kgens;
    for (const auto& b : kernel) {
      auto key = F.leaf_key(b[0], b[1]);
      if (closure.count(key)) continue;
      kgens.push_back(F.automorphism_from_basis(b));
      A.generators.push_back(kgens.back());
      std::vector<std::pair<Elem, Elem>> frontier(closure.begin(), closure.end());
      while (!frontier.empty()) {
        std::vector<std::pair<Elem, Elem>> next;
        for (const auto& [x, s] : frontier)
          for (const auto& g : kgens) {
            auto k2 = F.leaf_key(g.apply(G, x), g.apply(G, s));
            if (closure.insert(k2).second) next.push_back(k2);
          }
        frontier.swap(next);
      }
      if (closure.size() == kernel.size()) break;
    }
  }
  return A;
}

// ---------------------------------------------------------------------------

AutoSReport verify_autoS_structure(const MaxClassForm& F, const AutGroupDescription& A) {
  AutoSReport R;
  const auto& G = F.group();
  const int n = F.n(), p = F.p();
  if (n < 4) {
    R.note = "needs |S| >= p^4";
    return R;
  }
  const auto& sd = F.series();
  auto prof = profile(G, *sd.gamma1);
  if (prof.abelian) {
    R.note = "gamma_1 is abelian";
    return R;
  }
  if (prof.extraspecial) {
    R.note = "gamma_1 is extraspecial";
    return R;
  }
  R.applicable = true;
  bool equal2 = *sd.gamma1 == *sd.cs_z2;
  const auto& s = F.reference_basis();
  bool found = false;
  for (int i = 1; i + 1 <= n - 2 && !found; ++i)
    for (int j = i + 1; j <= n - 2 && !found; ++j) {
      Elem c = G.comm(s[i], s[j]);
      if (is_identity(c)) continue;
      int r = 2;
      while (r + 1 <= n && F.gamma(r + 1).contains(G, c)) ++r;
      if (!equal2 && r >= n - 1) continue;
      R.i = i;
      R.j = j;
      R.r = r;
      found = true;
    }
  if (!found) {
    R.note = "no commutator [s_i, s_j] below Z(S) found";
    R.scalar_relation_holds = false;
  } else {
    int e = R.r + 1 - R.i - R.j;
    R.scalar_relation_holds = true;
    for (const auto& m : A.gl2_image) {
      int a = m[0], b = m[3];
      if (m[1] != 0 || b != pow_mod(a, e, p)) R.scalar_relation_holds = false;
    }
  }
  R.p_prime_cyclic = A.p_prime_cyclic;
  R.p_prime_order = A.p_prime_part;
  R.divides_p_minus_1 = (p - 1) % A.p_prime_part == 0;
  return R;
}

CenterActionScan center_action_scan(const MaxClassForm& F, const AutGroupDescription& A) {
  CenterActionScan S;
  const int p = F.p(), n = F.n();
  std::set<std::pair<uint64_t, int>> seen;
  std::set<Mat2> done;
  for (const auto& b : A.leaves) {
    Mat2 m = leaf_matrix(F, b[0], b[1]);
    if (!done.insert(m).second) continue;
    uint64_t o = p_prime_part(mat_order(m, p), p);
    int mu = leaf_center_scalar(F, b[n - 1]);
    seen.insert({o, mu});
    if (mu == 1) S.max_order_centralizing = std::max(S.max_order_centralizing, o);
  }
  S.samples.assign(seen.begin(), seen.end());
  S.p_prime_faithful_on_center = S.max_order_centralizing == 1;
  return S;
}

RestrictedAutomorphism restriction(const PcPresentation& G, const Automorphism& a, const Subgroup& H) {
  if (image_of(G, a, H) != H) throw InvarianceError("subgroup is not invariant under the automorphism");
  RestrictedAutomorphism R;
  R.section = induced_section(G, H);
  for (const auto& h : H.gens()) R.aut.images.push_back(R.section.to_section(G, a.apply(G, h)));
  return R;
}

// ---------------------------------------------------------------------------
// isomorphism

namespace {

std::vector<std::pair<std::string, std::string>> iso_invariants(const MaxClassForm& F) {
  const auto& G = F.group();
  const auto& sd = F.series();
  std::vector<std::pair<std::string, std::string>> v;
  v.emplace_back("exponent", std::to_string(exponent_of(G, whole_group(G))));
  if (F.n() >= 4) {
    auto prof = profile(G, *sd.gamma1);
    v.emplace_back("gamma_1 abelian", prof.abelian ? "yes" : "no");
    v.emplace_back("gamma_1 extraspecial", prof.extraspecial ? "yes" : "no");
    v.emplace_back("gamma_1 exponent", std::to_string(prof.exponent));
    v.emplace_back("gamma_1 = C_S(Z_2)", *sd.gamma1 == *sd.cs_z2 ? "yes" : "no");
    v.emplace_back("C_S(Z_2) abelian", is_abelian(G, *sd.cs_z2) ? "yes" : "no");
  }
  auto d = profile(G, sd.gamma(G, 2));
  v.emplace_back("derived subgroup elementary abelian", d.elementary_abelian ? "yes" : "no");
  return v;
}

}  // namespace

IsoResult isomorphism_test(const PcPresentation& A, const PcPresentation& B, uint64_t budget) {
  IsoResult R;
  if (A.p() != B.p() || A.n() != B.n()) {
    R.invariants.push_back("order: " + std::to_string(A.p()) + "^" + std::to_string(A.n()) + " vs " +
                           std::to_string(B.p()) + "^" + std::to_string(B.n()));
    return R;
  }
  MaxClassForm FA(A), FB(B);
  auto ia = iso_invariants(FA), ib = iso_invariants(FB);
  for (size_t k = 0; k < ia.size(); ++k)
    if (ia[k].second != ib[k].second)
      R.invariants.push_back(ia[k].first + ": " + ia[k].second + " vs " + ib[k].second);
  if (!R.invariants.empty()) return R;
  auto target = FA.relations(FA.reference_basis());
  std::optional<std::vector<Elem>> hit;
  try {
    for (const auto& x : FB.x_candidates()) {
      bool cont = FB.search(
          target, x,
          [&](const std::vector<Elem>& b) {
            hit = b;
            return false;
          },
          R.nodes, budget);
      if (!cont) break;
    }
  } catch (const BudgetExceeded& e) {
    throw Inconclusive("isomorphism search exceeded its budget after " + std::to_string(e.used()) + " nodes");
  }
  if (!hit) {
    R.invariants.push_back("normalized relation tables: no matching basis in an exhaustive search");
    return R;
  }
  for (int i = 0; i < A.n(); ++i)
    R.images.push_back(FB.evaluate(*hit, FA.express(FA.reference_basis(), A.gen(i))));
  if (!is_isomorphism(A, B, R.images)) throw StateError("isomorphism candidate failed verification");
  R.isomorphic = true;
  return R;
}

}  // namespace pf

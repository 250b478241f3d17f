#include "pearlforge/pc.hpp"

#include <sstream>

namespace pf {

namespace {

bool is_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

// Conjugation tables for collection from the left.
// cj[((k*p + e)*n + j)*p + t] = (g_j^t)^(g_k^e) for j > k, an element of G_{k+1}.
struct PcPresentation::Tables {
  int p = 0, n = 0;
  int central_from = 0;             // gens >= this are central with trivial power
  std::vector<uint8_t> conj_trivial;  // g_k centralizes every later generator
  std::vector<Elem> cj;

  const Elem& at(int k, int e, int j, int t) const {
    return cj[((static_cast<size_t>(k) * p + e) * n + j) * p + t];
  }
  Elem& at(int k, int e, int j, int t) {
    return cj[((static_cast<size_t>(k) * p + e) * n + j) * p + t];
  }

  // x <- x * g_k^e, 0 < e < p
  void mul_gen(Elem& x, int k, int e, const std::vector<Elem>& powers) const {
    if (k >= central_from) {
      x[k] = static_cast<uint8_t>((x[k] + e) % p);
      return;
    }
    int s = x[k] + e;
    bool overflow = s >= p;
    x[k] = static_cast<uint8_t>(s % p);

    Elem lo{}, hi{};
    bool has_lo = false, has_hi = false;
    for (int j = k + 1; j < n; ++j) {
      if (!x[j]) continue;
      if (j < central_from) {
        lo[j] = x[j];
        has_lo = true;
      } else {
        hi[j] = x[j];
        has_hi = true;
      }
      x[j] = 0;
    }
    if (!overflow && !has_lo && !has_hi) return;

    Elem tail{};
    if (overflow) tail = powers[k];
    if (has_lo) {
      if (conj_trivial[k]) {
        mul_into(tail, lo, powers);
      } else {
        for (int j = k + 1; j < central_from; ++j)
          if (lo[j]) mul_into(tail, at(k, e, j, lo[j]), powers);
      }
    }
    if (has_hi)
      for (int j = central_from; j < n; ++j)
        tail[j] = static_cast<uint8_t>((tail[j] + hi[j]) % p);
    // x has zeros past k and tail lives in G_{k+1}: concatenation is normal.
    for (int j = k + 1; j < n; ++j) x[j] = tail[j];
  }

  void mul_into(Elem& x, const Elem& y, const std::vector<Elem>& powers) const {
    for (int j = 0; j < n; ++j)
      if (y[j]) mul_gen(x, j, y[j], powers);
  }
};

PcPresentation::PcPresentation(int p, int n, std::vector<int> weights)
    : p_(p), n_(n), weights_(std::move(weights)) {
  if (!is_odd_prime(p) || p > 251)
    throw MalformedPresentation("prime must be odd and at most 251, got " + std::to_string(p));
  if (n < 1 || n > kMaxGens)
    throw MalformedPresentation("rank must be in [1," + std::to_string(kMaxGens) + "]");
  if (static_cast<int>(weights_.size()) != n)
    throw MalformedPresentation("weights must have n entries");
  for (int i = 0; i < n; ++i) {
    if (weights_[i] < 1) throw MalformedPresentation("weights must be positive");
    if (i && weights_[i] < weights_[i - 1])
      throw MalformedPresentation("weights must be nondecreasing");
  }
  powers_.assign(n, Elem{});
  comms_.assign(static_cast<size_t>(n) * n, Elem{});
}

void PcPresentation::set_power(int i, const Elem& rhs) {
  if (i < 0 || i >= n_) throw MalformedPresentation("power index out of range");
  powers_[i] = rhs;
  consistent_ = false;
  tab_.reset();
}

void PcPresentation::set_comm(int j, int i, const Elem& rhs) {
  if (i < 0 || j >= n_ || j <= i) throw MalformedPresentation("commutator index pair must satisfy j > i");
  comms_[j * n_ + i] = rhs;
  consistent_ = false;
  tab_.reset();
}

void PcPresentation::validate_structure() const {
  auto check = [&](const Elem& v, int min_weight_exclusive, const std::string& what) {
    for (int t = 0; t < kMaxGens; ++t) {
      if (t >= n_) {
        if (v[t]) throw MalformedPresentation(what + ": entry beyond rank");
        continue;
      }
      if (v[t] >= p_) throw MalformedPresentation(what + ": entry not reduced mod p");
      if (v[t] && weights_[t] <= min_weight_exclusive)
        throw MalformedPresentation(what + ": right-hand side involves g" + std::to_string(t + 1) +
                                    " of weight " + std::to_string(weights_[t]) +
                                    ", needs weight > " + std::to_string(min_weight_exclusive));
    }
  };
  for (int i = 0; i < n_; ++i)
    check(powers_[i], weights_[i], "power of g" + std::to_string(i + 1));
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < j; ++i)
      check(comms_[j * n_ + i], weights_[j],
            "[g" + std::to_string(j + 1) + ",g" + std::to_string(i + 1) + "]");
}

void PcPresentation::build_tables() const {
  auto T = std::make_shared<Tables>();
  T->p = p_;
  T->n = n_;
  T->conj_trivial.assign(n_, 1);
  T->cj.assign(static_cast<size_t>(n_) * p_ * n_ * p_, Elem{});

  // central tail
  int cf = n_;
  for (int j = n_ - 1; j >= 0; --j) {
    bool central = is_identity(powers_[j]);
    for (int i = 0; i < n_ && central; ++i) {
      if (i == j) continue;
      const Elem& c = i < j ? comms_[j * n_ + i] : comms_[i * n_ + j];
      if (!is_identity(c)) central = false;
    }
    if (!central) break;
    cf = j;
  }
  T->central_from = cf;

  for (int k = 0; k < n_; ++k)
    for (int j = k + 1; j < n_; ++j)
      if (!is_identity(comms_[j * n_ + k])) T->conj_trivial[k] = 0;

  // Bottom-up: tables for k only use multiplication inside G_{k+1}.
  for (int k = n_ - 1; k >= 0; --k) {
    for (int j = k + 1; j < n_; ++j) {
      Elem gj{};
      gj[j] = 1;
      T->at(k, 0, j, 0) = Elem{};
      Elem base = gj;
      T->mul_into(base, comms_[j * n_ + k], powers_);
      Elem acc{};
      for (int t = 0; t < p_; ++t) {
        Elem pw{};
        if (t) pw[j] = static_cast<uint8_t>(t);
        T->at(k, 0, j, t) = pw;
        T->at(k, 1, j, t) = acc;
        T->mul_into(acc, base, powers_);
      }
    }
    for (int e = 2; e < p_; ++e)
      for (int j = k + 1; j < n_; ++j)
        for (int t = 0; t < p_; ++t) {
          const Elem& y = T->at(k, e - 1, j, t);
          Elem r{};
          for (int l = k + 1; l < n_; ++l)
            if (y[l]) T->mul_into(r, T->at(k, 1, l, y[l]), powers_);
          T->at(k, e, j, t) = r;
        }
  }
  tab_ = std::move(T);
}

const PcPresentation::Tables& PcPresentation::tables() const {
  if (!tab_) build_tables();
  return *tab_;
}

void PcPresentation::require_consistent() const {
  if (!consistent_)
    throw StateError("arithmetic on a presentation that has not passed consistency_check");
}

Elem PcPresentation::mul_unchecked(const Elem& a, const Elem& b) const {
  const Tables& T = tables();
  Elem x = a;
  T.mul_into(x, b, powers_);
  return x;
}

std::vector<ConsistencyFailure> PcPresentation::overlap_defects() const {
  validate_structure();
  std::vector<ConsistencyFailure> out;
  auto g = [&](int i) {
    Elem e{};
    e[i] = 1;
    return e;
  };
  auto gp = [&](int i, int t) {
    Elem e{};
    e[i] = static_cast<uint8_t>(t);
    return e;
  };
  auto M = [&](const Elem& a, const Elem& b) { return mul_unchecked(a, b); };
  auto name = [](int i) { return "g" + std::to_string(i + 1); };
  auto record = [&](std::string s, const Elem& l, const Elem& r) {
    if (l != r) out.push_back({std::move(s), l, r});
  };

  for (int k = n_ - 1; k >= 0; --k)
    for (int j = k - 1; j >= 0; --j)
      for (int i = j - 1; i >= 0; --i)
        record("(" + name(k) + " " + name(j) + ") " + name(i), M(M(g(k), g(j)), g(i)),
               M(g(k), M(g(j), g(i))));
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < j; ++i) {
      record("(" + name(j) + "^p) " + name(i), M(powers_[j], g(i)),
             M(gp(j, p_ - 1), M(g(j), g(i))));
      record(name(j) + " (" + name(i) + "^p)", M(g(j), powers_[i]),
             M(M(g(j), g(i)), gp(i, p_ - 1)));
    }
  for (int i = 0; i < n_; ++i)
    record(name(i) + " (" + name(i) + "^p)", M(g(i), powers_[i]), M(powers_[i], g(i)));
  return out;
}

std::vector<ConsistencyFailure> PcPresentation::consistency_check() {
  consistent_ = false;
  auto out = overlap_defects();
  if (out.empty()) consistent_ = true;
  return out;
}

Elem PcPresentation::gen(int i) const {
  if (i < 0 || i >= n_) throw MalformedWord("generator index " + std::to_string(i + 1) + " out of range");
  Elem e{};
  e[i] = 1;
  return e;
}

Elem PcPresentation::mul(const Elem& a, const Elem& b) const {
  require_consistent();
  return mul_unchecked(a, b);
}

Elem PcPresentation::inv(const Elem& a) const {
  require_consistent();
  const Tables& T = tables();
  Elem z = a, y{};
  for (int i = 0; i < n_; ++i) {
    if (!z[i]) continue;
    int c = p_ - z[i];
    T.mul_gen(z, i, c, powers_);
    y[i] = static_cast<uint8_t>(c);
  }
  return y;
}

Elem PcPresentation::pow(const Elem& a, long long k) const {
  require_consistent();
  Elem base = k < 0 ? inv(a) : a;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-(k + 1)) + 1 : static_cast<unsigned long long>(k);
  Elem r{};
  while (e) {
    if (e & 1) r = mul_unchecked(r, base);
    e >>= 1;
    if (e) base = mul_unchecked(base, base);
  }
  return r;
}

Elem PcPresentation::comm(const Elem& a, const Elem& b) const {
  require_consistent();
  return mul_unchecked(inv(mul_unchecked(b, a)), mul_unchecked(a, b));
}

Elem PcPresentation::conj(const Elem& a, const Elem& b) const {
  require_consistent();
  return mul_unchecked(inv(b), mul_unchecked(a, b));
}

Elem PcPresentation::collect(const Word& w) const {
  require_consistent();
  Elem x{};
  for (const Letter& l : w) {
    if (l.gen < 0 || l.gen >= n_)
      throw MalformedWord("generator index " + std::to_string(l.gen + 1) + " out of range");
    if (l.exp == 0) continue;
    x = mul_unchecked(x, pow(gen(l.gen), l.exp));
  }
  return x;
}

uint64_t PcPresentation::order(const Elem& a) const {
  require_consistent();
  uint64_t o = 1;
  Elem x = a;
  while (!is_identity(x)) {
    x = pow(x, p_);
    o *= static_cast<uint64_t>(p_);
  }
  return o;
}

int PcPresentation::depth(const Elem& a) const {
  for (int i = 0; i < n_; ++i)
    if (a[i]) return i;
  return n_;
}

uint64_t PcPresentation::group_order() const {
  uint64_t o = 1;
  for (int i = 0; i < n_; ++i) {
    if (o > UINT64_MAX / static_cast<uint64_t>(p_)) throw RangeError("group order overflows 64 bits");
    o *= static_cast<uint64_t>(p_);
  }
  return o;
}

Elem PcPresentation::normalize(const std::vector<long long>& raw) const {
  if (static_cast<int>(raw.size()) != n_) throw MalformedWord("exponent vector has wrong length");
  Elem e{};
  for (int i = 0; i < n_; ++i) {
    long long v = raw[i] % p_;
    if (v < 0) v += p_;
    e[i] = static_cast<uint8_t>(v);
  }
  return e;
}

bool PcPresentation::same_relations(const PcPresentation& o) const {
  return p_ == o.p_ && n_ == o.n_ && weights_ == o.weights_ && powers_ == o.powers_ && comms_ == o.comms_;
}

std::string elem_to_string(const PcPresentation& G, const Elem& e) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < G.n(); ++i) os << (i ? "," : "") << int(e[i]);
  os << ')';
  return os.str();
}

}  // namespace pf

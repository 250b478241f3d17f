#include "pearlforge/sections.hpp"

namespace pf {

namespace {

Elem vec_to_elem(const std::vector<int>& v) {
  Elem e{};
  for (size_t i = 0; i < v.size(); ++i) e[i] = static_cast<uint8_t>(v[i]);
  return e;
}

std::vector<int> elem_to_vec(const Elem& e, int m) { return std::vector<int>(e.begin(), e.begin() + m); }

}  // namespace

InducedSection induced_section(const PcPresentation& G, const Subgroup& H) {
  InducedSection s;
  s.H = H;
  int m = H.size_exp();
  std::vector<int> w(m);
  for (int i = 0; i < m; ++i) w[i] = i + 1;
  PcPresentation P(G.p(), m, w);
  const auto& h = H.gens();
  for (int i = 0; i < m; ++i) {
    P.set_power(i, vec_to_elem(H.coords(G, G.pow(h[i], G.p()))));
    for (int j = i + 1; j < m; ++j) P.set_comm(j, i, vec_to_elem(H.coords(G, G.comm(h[j], h[i]))));
  }
  if (!P.consistency_check().empty()) throw StateError("induced presentation failed consistency");
  s.pres = std::move(P);
  return s;
}

Elem InducedSection::to_section(const PcPresentation& G, const Elem& g) const {
  return vec_to_elem(H.coords(G, g));
}

Elem InducedSection::from_section(const PcPresentation& G, const Elem& h) const {
  return H.from_coords(G, elem_to_vec(h, H.size_exp()));
}

Subgroup InducedSection::subgroup_to_section(const PcPresentation& G, const Subgroup& K) const {
  std::vector<Elem> v;
  for (const auto& g : K.gens()) v.push_back(to_section(G, g));
  return span(pres, v);
}

Subgroup InducedSection::subgroup_from_section(const PcPresentation& G, const Subgroup& K) const {
  std::vector<Elem> v;
  for (const auto& g : K.gens()) v.push_back(from_section(G, g));
  return span(G, v);
}

QuotientSection quotient_section(const PcPresentation& G, const Subgroup& N) {
  QuotientSection q;
  q.N = N;
  for (int d = 0; d < G.n(); ++d)
    if (!N.has_pivot(d)) q.keep.push_back(d);
  int m = static_cast<int>(q.keep.size());
  std::vector<int> w(m);
  for (int i = 0; i < m; ++i) w[i] = G.weight(q.keep[i]);
  PcPresentation P(G.p(), m, w);
  for (int i = 0; i < m; ++i) {
    Elem gi = G.gen(q.keep[i]);
    P.set_power(i, q.to_section(G, G.pow(gi, G.p())));
    for (int j = i + 1; j < m; ++j) P.set_comm(j, i, q.to_section(G, G.comm(G.gen(q.keep[j]), gi)));
  }
  if (!P.consistency_check().empty()) throw StateError("quotient presentation failed consistency");
  q.pres = std::move(P);
  return q;
}

Elem QuotientSection::to_section(const PcPresentation& G, const Elem& g) const {
  Elem r = N.reduce_right(G, g);
  Elem e{};
  for (size_t i = 0; i < keep.size(); ++i) e[i] = r[keep[i]];
  return e;
}

Elem QuotientSection::lift(const PcPresentation&, const Elem& q) const {
  Elem e{};
  for (size_t i = 0; i < keep.size(); ++i) e[keep[i]] = q[i];
  return e;
}

Subgroup QuotientSection::image(const PcPresentation& G, const Subgroup& K) const {
  std::vector<Elem> v;
  for (const auto& g : K.gens()) v.push_back(to_section(G, g));
  return span(pres, v);
}

Subgroup QuotientSection::preimage(const PcPresentation& G, const Subgroup& K) const {
  std::vector<Elem> v;
  for (const auto& g : K.gens()) v.push_back(lift(G, g));
  return join(G, N, v);
}

}  // namespace pf

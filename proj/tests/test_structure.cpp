#include <map>

#include "doctest.h"
#include "pearlforge/autos.hpp"
#include "pearlforge/series.hpp"
#include "support.hpp"

using namespace pf;

namespace {

struct Small {
  const CatalogEntry* e;
  oracle::Table T;
};

// catalog groups of order at most 3^4, with their tables
const std::vector<Small>& small_groups() {
  static const std::vector<Small> v = [] {
    std::vector<Small> out;
    for (const auto& e : test_catalog())
      if (e.pres.group_order() <= 81) out.push_back({&e, oracle::build_table(oracle::rules_of(e.pres))});
    return out;
  }();
  return v;
}

}  // namespace

TEST_CASE("small catalog groups are covered") {
  // 3^{1+2}, four of order 3^4 by search, Sp4(3)-Sylow, C3 wr C3
  CHECK(small_groups().size() == 7);
  for (const auto& s : small_groups()) CHECK(oracle::associative(s.T));
}

TEST_CASE("element orders match the table") {
  for (const auto& [e, T] : small_groups()) {
    CAPTURE(e->label);
    for (uint32_t x = 0; x < T.N; ++x) CHECK(e->pres.order(T.elem(x)) == T.order(x));
  }
}

TEST_CASE("multiplication matches the table") {
  for (const auto& [e, T] : small_groups()) {
    CAPTURE(e->label);
    int bad = 0;
    for (uint32_t a = 0; a < T.N; ++a)
      for (uint32_t b = 0; b < T.N; ++b) bad += T.encode(e->pres.mul(T.elem(a), T.elem(b))) != T(a, b);
    CHECK(bad == 0);
  }
}

TEST_CASE("lower and upper central series match the table") {
  for (const auto& [e, T] : small_groups()) {
    CAPTURE(e->label);
    const auto& G = e->pres;
    auto sd = analyze_series(G);
    auto L = oracle::lower_central(T);
    REQUIRE(sd.lower.size() == L.size());
    for (size_t i = 0; i < L.size(); ++i) CHECK(as_set(T, G, sd.lower[i]) == L[i]);
    auto Z = oracle::upper_central(T);
    REQUIRE(sd.zeta.size() == Z.size());
    for (size_t i = 0; i < Z.size(); ++i) CHECK(as_set(T, G, sd.zeta[i]) == Z[i]);
    CHECK(sd.nilpotency_class == static_cast<int>(L.size()) - 1);
  }
}

TEST_CASE("two-step centralizer matches the table") {
  for (const auto& [e, T] : small_groups()) {
    if (e->pres.n() < 4) continue;
    CAPTURE(e->label);
    const auto& G = e->pres;
    auto sd = analyze_series(G);
    auto L = oracle::lower_central(T);
    // {s : [s, gamma_2] <= gamma_4}, with gamma_i = L[i-1]
    std::vector<char> in4(T.N, 0);
    for (uint32_t z : L[3]) in4[z] = 1;
    oracle::Set g1;
    for (uint32_t s = 0; s < T.N; ++s) {
      bool ok = true;
      for (uint32_t y : L[1]) ok = ok && in4[T.comm(s, y)];
      if (ok) g1.push_back(s);
    }
    REQUIRE(sd.gamma1);
    CHECK(as_set(T, G, *sd.gamma1) == g1);
    auto Z = oracle::upper_central(T);
    CHECK(as_set(T, G, *sd.cs_z2) == oracle::centralizer(T, Z[2]));
  }
}

TEST_CASE("centralizers of every element match the table") {
  for (const auto& [e, T] : small_groups()) {
    CAPTURE(e->label);
    const auto& G = e->pres;
    Subgroup S = whole_group(G);
    for (uint32_t x = 0; x < T.N; ++x)
      CHECK(as_set(T, G, centralizer(G, S, std::vector<Elem>{T.elem(x)})) == oracle::centralizer(T, {x}));
    CHECK(as_set(T, G, center(G, S)) == oracle::centralizer(T, oracle::whole(T)));
  }
}

TEST_CASE("subgroup lattice and sectional rank match the table") {
  for (const auto& [e, T] : small_groups()) {
    CAPTURE(e->label);
    const auto& G = e->pres;
    auto subs = oracle::all_subgroups(T);
    auto mine = all_subgroups(G);
    std::set<oracle::Set> got;
    for (const auto& H : mine) got.insert(as_set(T, G, H));
    CHECK(got.size() == mine.size());
    CHECK(got == subs);
    int k = 0;
    for (const auto& H : subs) k = std::max(k, oracle::generator_rank(T, H));
    auto r = sectional_rank(G);
    CHECK(r.exact);
    CHECK(r.k == k);
    uint64_t classes_total = 0;
    for (const auto& c : subgroup_classes(G)) classes_total += c.class_size;
    CHECK(classes_total == subs.size());
  }
}

TEST_CASE("automorphism group orders match a brute count") {
  for (const auto& [e, T] : small_groups()) {
    CAPTURE(e->label);
    const auto& G = e->pres;
    // every group here is 2-generated by its first two pc generators
    REQUIRE(oracle::closure(T, {T.gen(0), T.gen(1)}).size() == T.N);
    uint64_t brute = oracle::count_isos(T, T.gen(0), T.gen(1), T, false);
    auto A = automorphism_group(G);
    CHECK(A.order == brute);
    for (const auto& a : A.generators) CHECK(is_automorphism(G, a));
  }
}

TEST_CASE("isomorphism test matches brute force on order 81") {
  std::vector<const Small*> g81;
  for (const auto& s : small_groups())
    if (s.T.N == 81) g81.push_back(&s);
  REQUIRE(g81.size() == 6);
  for (size_t i = 0; i < g81.size(); ++i)
    for (size_t j = i; j < g81.size(); ++j) {
      CAPTURE(g81[i]->e->label);
      CAPTURE(g81[j]->e->label);
      bool brute =
          oracle::count_isos(g81[i]->T, g81[i]->T.gen(0), g81[i]->T.gen(1), g81[j]->T, true) > 0;
      auto r = isomorphism_test(g81[i]->e->pres, g81[j]->e->pres);
      CHECK(r.isomorphic == brute);
      if (r.isomorphic) CHECK(is_isomorphism(g81[i]->e->pres, g81[j]->e->pres, r.images));
    }
}

TEST_CASE("maximal-class profile of the catalog") {
  const std::map<std::string, int> expect = {
      {"3^{1+2}_+", 2}, {"5^{1+2}_+", 2}, {"7^{1+2}_+", 2}, {"Sp4(3)-Sylow", 3}, {"Sp4(5)-Sylow", 3},
      {"Sp4(7)-Sylow", 3}, {"7^5-exotic-host", 4}, {"789-equivalent", 5}, {"813-equivalent", 5},
      {"G2(7)-Sylow", 5}};
  for (const auto& e : test_catalog()) {
    CAPTURE(e.label);
    const auto& G = e.pres;
    auto sd = central_series(G);
    CHECK(sd.nilpotency_class == G.n() - 1);
    if (auto it = expect.find(e.label); it != expect.end()) CHECK(sd.nilpotency_class == it->second);
    // |S : gamma_2| = p^2, then index p down the series
    CHECK(G.n() - sd.lower[1].size_exp() == 2);
    for (size_t i = 1; i + 1 < sd.lower.size(); ++i)
      CHECK(sd.lower[i].size_exp() - sd.lower[i + 1].size_exp() == 1);
    // lower and upper series coincide up to reindexing
    for (int i = 0; i < G.n(); ++i) CHECK(sd.zeta[i] == sd.lower[G.n() - 1 - i]);
  }
}

TEST_CASE("G2(7)-Sylow has extraspecial gamma_1 different from C_S(Z_2)") {
  const auto& G = find_entry("G2(7)-Sylow").pres;
  auto sd = analyze_series(G);
  CHECK(profile(G, *sd.gamma1).extraspecial);
  CHECK(*sd.gamma1 != *sd.cs_z2);
  CHECK(sd.cs_z2->size_exp() == 5);
}

TEST_CASE("two-step centralizers are undefined at order p^3") {
  const auto& G = find_entry("5^{1+2}_+").pres;
  auto sd = central_series(G);
  CHECK_THROWS_AS(two_step_centralizers(G, sd), Undefined);
}

TEST_CASE("isomorphism invariance under a change of pc basis") {
  std::mt19937_64 rng(5);
  for (const char* label : {"Sp4(5)-Sylow", "7^5-exotic-host", "C5-on-Z[w]/(w-1)^5"}) {
    CAPTURE(label);
    const auto& G = find_entry(label).pres;
    MaxClassForm F(G);
    // another admissible basis gives another presentation of the same group
    auto xs = F.x_candidates();
    Elem x = xs[rng() % xs.size()];
    auto sd = analyze_series(G);
    Elem s1;
    do s1 = random_elem(G, rng);
    while (!sd.gamma1 || !sd.gamma1->contains(G, s1) || sd.lower[1].contains(G, s1));
    auto H = F.normalized_presentation(F.make_basis(x, s1));
    CHECK(H.consistency_check().empty());
    auto r = isomorphism_test(G, H);
    CHECK(r.isomorphic);
    CHECK(sectional_rank(H).k == sectional_rank(G).k);
    CHECK(automorphism_group(H).order == automorphism_group(G).order);
    auto sh = analyze_series(H);
    CHECK(profile(H, *sh.gamma1).abelian == profile(G, *sd.gamma1).abelian);
    CHECK(exponent_of(H, whole_group(H)) == exponent_of(G, whole_group(G)));
  }
}

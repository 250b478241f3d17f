#include <map>

#include "doctest.h"
#include "pearlforge/fusion.hpp"
#include "support.hpp"

using namespace pf;

namespace {

std::vector<PearlCandidate> candidates(const PcPresentation& G, const SeriesData& sd) {
  return G.n() == 3 ? order_p3_candidates(G) : find_pearl_candidates(G, sd);
}

const char* kTowerGroups[] = {"Sp4(3)-Sylow", "Sp4(5)-Sylow", "C3wrC3", "C3-on-Z[w]/(w-1)^4",
                              "C3-on-Z[w]/(w-1)^5", "C5-on-Z[w]/(w-1)^4", "3^4-maxclass-1",
                              "3^4-maxclass-2", "3^4-maxclass-3", "3^4-maxclass-4"};

}  // namespace

TEST_CASE("order p^3: the p+1 maximal subgroups") {
  for (int p : {3, 5, 7}) {
    auto G = extraspecial_plus(p);
    G.consistency_check();
    auto c = order_p3_candidates(G);
    CHECK(c.size() == static_cast<size_t>(p + 1));
    for (const auto& x : c) {
      CHECK(x.E.size_exp() == 2);
      CHECK(profile(G, x.E).elementary_abelian);
    }
  }
}

TEST_CASE("pearl candidates have the required shape") {
  for (const auto& e : test_catalog()) {
    const auto& G = e.pres;
    if (G.n() < 4 || G.group_order() > 100000) continue;
    CAPTURE(e.label);
    auto sd = analyze_series(G);
    for (const auto& c : find_pearl_candidates(G, sd)) {
      auto pr = profile(G, c.E);
      if (c.kind == PearlKind::abelian) {
        CHECK(c.E.size_exp() == 2);
        CHECK(pr.elementary_abelian);
      } else {
        CHECK(c.E.size_exp() == 3);
        CHECK(pr.extraspecial);
        CHECK(pr.exponent == static_cast<uint64_t>(G.p()));
      }
      CHECK(G.order(c.witness) == static_cast<uint64_t>(G.p()));
      CHECK(!sd.gamma1->contains(G, c.witness));
      CHECK(!sd.cs_z2->contains(G, c.witness));
      CHECK(c.E.contains(G, c.witness));
      // self-centralizing
      CHECK(is_subgroup_of(G, centralizer(G, whole_group(G), c.E), c.E));
    }
  }
}

TEST_CASE("normalizer towers: maximal, only overgroups, maximal class") {
  for (const char* label : kTowerGroups) {
    CAPTURE(label);
    const auto& G = find_entry(label).pres;
    auto sd = analyze_series(G);
    auto subs = all_subgroups(G);
    for (const auto& c : find_pearl_candidates(G, sd)) {
      auto t = normalizer_tower(G, sd, c);
      CHECK(t.pass());
      CHECK(t.tower.front() == c.E);
      CHECK(t.tower.back() == whole_group(G));
      for (size_t i = 1; i < t.tower.size(); ++i) {
        CHECK(t.tower[i].size_exp() == t.tower[i - 1].size_exp() + 1);
        CHECK(t.tower[i] == normalizer(G, whole_group(G), t.tower[i - 1]));
        // maximal class throughout; class i + 1 when E is abelian (modulo Phi(E) in general)
        CHECK(nilpotency_class(G, t.tower[i]) == t.tower[i].size_exp() - 1);
        if (c.kind == PearlKind::abelian) CHECK(nilpotency_class(G, t.tower[i]) == static_cast<int>(i) + 1);
      }
      // every subgroup containing E is a tower member (exhaustive)
      for (const auto& H : subs) {
        if (!is_subgroup_of(G, c.E, H)) continue;
        bool member = false;
        for (const auto& N : t.tower) member = member || N == H;
        CHECK(member);
      }
    }
    CHECK(cross_tower_checks(G, sd, find_pearl_candidates(G, sd)).pass());
  }
}

TEST_CASE("deltas on small groups satisfy their invariants") {
  for (const auto& e : test_catalog()) {
    const auto& G = e.pres;
    if (G.group_order() > 3125) continue;
    CAPTURE(e.label);
    auto sd = analyze_series(G);
    MaxClassForm F(G);
    auto A = automorphism_group(F);
    for (const auto& cls : candidate_classes(G, candidates(G, sd))) {
      auto r = construct_delta(F, A, cls.rep, default_lambda(G.p()));
      if (!r.delta) continue;
      const auto& d = *r.delta;
      CHECK(d.order == static_cast<uint64_t>(G.p() - 1));
      CHECK(is_automorphism(G, d.phi));
      for (const auto& c : check_delta(G, sd, d)) {
        CAPTURE(c.name);
        CHECK(c.pass);
      }
      if (G.n() >= 4) CHECK(verify_lambda_action(G, sd, d).pass());
      // phi centralizes Phi(E)
      Subgroup phi_e = frattini(G, d.E.E);
      for (const auto& z : phi_e.gens()) CHECK(d.phi.apply(G, z) == z);
    }
  }
}

TEST_CASE("lambda must have order p - 1") {
  const auto& G = find_entry("Sp4(5)-Sylow").pres;
  auto sd = analyze_series(G);
  auto c = find_pearl_candidates(G, sd);
  REQUIRE(!c.empty());
  CHECK_THROWS_AS(construct_delta(G, sd, c.front(), 4), RangeError);  // 4 = -1 mod 5
  CHECK_NOTHROW(construct_delta(G, sd, c.front(), 3));
}

TEST_CASE("certificates on p^{1+2}_+ and Sp4(3)") {
  for (int p : {3, 5}) {
    const auto& G = find_entry(std::to_string(p) + "^{1+2}_+").pres;
    CertificateRequest rq;
    rq.extraspecial = false;
    auto c = build_fusion_certificate(G, rq);
    CHECK(c.pass());
    CHECK(c.case_label == 1);
    CHECK(c.op_exact);
    CHECK(c.op_upper.size_exp() == 0);
    CHECK(c.sectional_rank == 2);
  }
  const auto& G = find_entry("Sp4(3)-Sylow").pres;
  CertificateRequest a, e;
  a.extraspecial = false;
  e.abelian = false;
  auto ca = build_fusion_certificate(G, a);
  auto ce = build_fusion_certificate(G, e);
  CHECK(ca.pass());
  CHECK(ce.pass());
  CHECK(ca.op_upper.size_exp() == 0);
  CHECK(ce.op_upper.size_exp() == 3);
}

TEST_CASE("no delta means no certificate") {
  const auto& G = find_entry("3^{1+2}_+").pres;
  CertificateRequest rq;
  rq.abelian = false;
  CHECK_THROWS_AS(build_fusion_certificate(G, rq), Undefined);
}

TEST_CASE("the scan on p^3 groups is not applicable, and marks survivors on larger ones") {
  const auto& G = find_entry("Sp4(3)-Sylow").pres;
  auto sd = analyze_series(G);
  auto scan = essential_candidate_scan(G, sd);
  std::map<std::string, int> labels;
  for (const auto& s : scan.survivors()) ++labels[label_name(s.label)];
  CHECK(labels["pearl"] >= 2);
  CHECK(labels["gamma1"] == 1);
  CHECK(labels["other"] == 0);
  for (const auto& s : scan.entries)
    if (!s.survives()) CHECK(!s.rejected.empty());
}

TEST_CASE("scan survivors on a 5^6 host are frozen") {
  // Group-level filters leave two non-pearl classes of order p^4 inside gamma_1 besides gamma_1 itself.
  const auto& G = find_entry("5^6-pearl-host-1").pres;
  auto sd = analyze_series(G);
  auto scan = essential_candidate_scan(G, sd);
  int pearls = 0, other = 0, g1 = 0;
  for (const auto& s : scan.survivors()) {
    if (s.label == ScanLabel::pearl) ++pearls;
    if (s.label == ScanLabel::gamma1) ++g1;
    if (s.label == ScanLabel::other) {
      ++other;
      CHECK(is_subgroup_of(G, s.E, *sd.gamma1));
      CHECK(s.E.size_exp() == 4);
    }
  }
  CHECK(pearls >= 1);
  CHECK(g1 == 1);
  CHECK(other == 2);
}

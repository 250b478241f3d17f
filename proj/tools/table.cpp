// verify-table: per realizable row of the sectional-rank <= 4 table, the
// instance battery on the catalog groups for that row.
#include <map>
#include <optional>

#include "commands.hpp"
#include "pearlforge/catalog.hpp"
#include "pearlforge/fusion.hpp"

namespace pf::cli {

namespace {

struct GroupData {
  CatalogEntry e;
  SeriesData sd;
  RankReport rank;
  std::optional<FusionCertificate> cert_a, cert_e;
  std::optional<ScanReport> scan;
};

GroupData compute(const CatalogEntry& e, const Options& opt) {
  GroupData d;
  d.e = e;
  const auto& G = e.pres;
  const uint64_t budget = opt.budget.value_or(kDefaultBudget);
  d.sd = analyze_series(G);
  d.rank = sectional_rank(G, std::max<uint64_t>(budget, 1'000'000'000));
  MaxClassForm F(G);
  AutGroupDescription A = automorphism_group(F, budget);
  for (int kind = 0; kind < 2; ++kind) {
    CertificateRequest rq;
    rq.abelian = kind == 0;
    rq.extraspecial = kind == 1;
    rq.lambda = opt.lambda;
    rq.budget = budget;
    try {
      (kind == 0 ? d.cert_a : d.cert_e) = build_fusion_certificate(F, A, rq);
    } catch (const Undefined&) {
    }
  }
  if (G.n() >= 4) d.scan = essential_candidate_scan(G, d.sd, budget);
  return d;
}

class Row {
 public:
  Row(Report& r, std::string id) : r_(r), id_(std::move(id)) {}
  void cell(const GroupData& d, const std::string& cell, bool pass, const std::string& got) {
    r_.check("row " + id_ + " [" + d.e.label + "]: " + cell, pass, got, "rank table, row " + id_ + ", " + cell);
  }

 private:
  Report& r_;
  std::string id_;
};

std::string s(long long v) { return std::to_string(v); }

bool cert_ok(const std::optional<FusionCertificate>& c) { return c && c->pass(); }

std::string kinds(const GroupData& d) {
  std::string k;
  if (d.cert_a) k += std::string("abelian") + (d.cert_a->pass() ? "" : "(failing)");
  if (d.cert_e) k += std::string(k.empty() ? "" : "+") + "extraspecial" + (d.cert_e->pass() ? "" : "(failing)");
  return k.empty() ? "none" : k;
}

// non-pearl survivors of the group-level scan, by label
std::map<std::string, int> non_pearl_survivors(const GroupData& d) {
  std::map<std::string, int> m;
  if (!d.scan) return m;
  for (const auto& e : d.scan->survivors())
    if (e.label != ScanLabel::pearl) ++m[label_name(e.label)];
  return m;
}

bool survivors_within(const GroupData& d, std::initializer_list<const char*> allowed, std::string& got) {
  got.clear();
  bool ok = true;
  for (const auto& [label, count] : non_pearl_survivors(d)) {
    bool in = false;
    for (const char* a : allowed) in = in || label == a;
    ok = ok && in;
    got += (got.empty() ? "" : ", ") + label + " x" + s(count);
  }
  if (got.empty()) got = "none";
  return ok;
}

nlohmann::json group_json(const GroupData& d) {
  const auto& G = d.e.pres;
  nlohmann::json j{{"label", d.e.label},
                   {"order", "p^" + s(G.n())},
                   {"p", G.p()},
                   {"sectional_rank", d.rank.k},
                   {"rank_exact", d.rank.exact},
                   {"pearl_kinds_with_certificate", kinds(d)}};
  auto cj = [&](const FusionCertificate& c) {
    return nlohmann::json{{"case", c.case_label},
                          {"torus_order", c.torus_order},
                          {"op_order", "p^" + s(c.op_upper.size_exp())},
                          {"op_exact", c.op_exact},
                          {"pearl_classes", c.pearls.size()},
                          {"pass", c.pass()}};
  };
  if (d.cert_a) j["certificate_abelian"] = cj(*d.cert_a);
  if (d.cert_e) j["certificate_extraspecial"] = cj(*d.cert_e);
  if (d.scan) {
    nlohmann::json np = nlohmann::json::object();
    for (const auto& [k, v] : non_pearl_survivors(d)) np[k] = v;
    j["non_pearl_scan_survivors"] = np;
  }
  return j;
}

bool is_pow(uint64_t x, int p, int e) {
  uint64_t y = 1;
  for (int i = 0; i < e; ++i) y *= p;
  return x == y;
}

bool proper_centric_all_elementary_p2(const PcPresentation& G) {
  Subgroup S = whole_group(G);
  for (const auto& H : all_subgroups(G)) {
    if (H == S) continue;
    if (!is_subgroup_of(G, centralizer(G, S, H), H)) continue;
    if (H.size_exp() != 2 || !profile(G, H).elementary_abelian) return false;
  }
  return true;
}

}  // namespace

Report run_verify_table(const Options& opt) {
  return guarded("verify-table", [&](Report& r) {
    const std::string dir = opt.catalog.empty() ? catalog_dir() : opt.catalog;
    auto catalog = load_catalog(dir, true);
    std::map<std::string, CatalogEntry> by;
    for (auto& e : catalog) by[e.label] = e;
    auto need = [&](const std::string& label) -> const CatalogEntry& {
      auto it = by.find(label);
      if (it == by.end()) throw InputError("catalog lacks " + label);
      return it->second;
    };
    std::map<std::string, GroupData> cache;
    auto data = [&](const std::string& label) -> const GroupData& {
      auto it = cache.find(label);
      if (it == cache.end()) it = cache.emplace(label, compute(need(label), opt)).first;
      return it->second;
    };
    nlohmann::json rows = nlohmann::json::object();

    {  // k = 2, S = p^{1+2}_+
      Row row(r, "k=2 p>=3 S=p^{1+2}_+");
      nlohmann::json gs = nlohmann::json::array();
      for (int p : {3, 5, 7}) {
        const auto& d = data(s(p) + "^{1+2}_+");
        const auto& G = d.e.pres;
        auto pr = profile(G, whole_group(G));
        row.cell(d, "sectional rank 2", d.rank.exact && d.rank.k == 2, s(d.rank.k));
        row.cell(d, "S extraspecial of order p^3, exponent p",
                 G.n() == 3 && pr.extraspecial && pr.exponent == static_cast<uint64_t>(p), "");
        row.cell(d, "pearls C_p x C_p", cert_ok(d.cert_a) && !d.cert_e, kinds(d));
        row.cell(d, "no essentials besides pearls", proper_centric_all_elementary_p2(G), "");
        gs.push_back(group_json(d));
      }
      rows["k=2, p>=3"] = gs;
    }

    {  // k = 2, p = 3, |S| >= 3^4
      Row row(r, "k=2 p=3 |S|>=3^4");
      nlohmann::json gs = nlohmann::json::array();
      for (const char* label : {"C3-on-Z[w]/(w-1)^4", "C3-on-Z[w]/(w-1)^5"}) {
        const auto& d = data(label);
        const auto& G = d.e.pres;
        const int n = G.n();
        row.cell(d, "sectional rank 2", d.rank.exact && d.rank.k == 2, s(d.rank.k));
        bool some = cert_ok(d.cert_a) || cert_ok(d.cert_e);
        bool all_ok = (!d.cert_a || d.cert_a->pass()) && (!d.cert_e || d.cert_e->pass());
        row.cell(d, "pearls C_3 x C_3 or 3^{1+2}_+", some && all_ok, kinds(d));
        auto g1 = profile(G, *d.sd.gamma1);
        bool homocyclic = g1.abelian && g1.d == 2 && n % 2 == 1 &&
                          is_pow(g1.exponent, 3, (n - 1) / 2);
        row.cell(d, "gamma_1 = C x C of exponent 3^((n-1)/2) exactly when n is odd", homocyclic == (n % 2 == 1),
                 "n = " + s(n) + ", exponent " + s(g1.exponent));
        std::string got;
        row.cell(d, "non-pearl essential candidates within {gamma_1}", survivors_within(d, {"gamma1"}, got), got);
        gs.push_back(group_json(d));
      }
      rows["k=2, p=3, |S|>=3^4"] = gs;
    }

    {  // k = 3, Sp4(p)
      Row row(r, "k=3 p>=3 Sp4(p)");
      nlohmann::json gs = nlohmann::json::array();
      for (int p : {3, 5, 7}) {
        const auto& d = data("Sp4(" + s(p) + ")-Sylow");
        const auto& G = d.e.pres;
        auto g1 = profile(G, *d.sd.gamma1);
        row.cell(d, "sectional rank 3", d.rank.exact && d.rank.k == 3, s(d.rank.k));
        row.cell(d, "|S| = p^4", G.n() == 4, "p^" + s(G.n()));
        row.cell(d, "pearls C_p x C_p and/or p^{1+2}_+", cert_ok(d.cert_a) && cert_ok(d.cert_e), kinds(d));
        row.cell(d, "gamma_1 elementary abelian of order p^3", g1.elementary_abelian && d.sd.gamma1->size_exp() == 3,
                 "");
        std::string got;
        row.cell(d, "non-pearl essential candidates within {gamma_1}", survivors_within(d, {"gamma1"}, got), got);
        gs.push_back(group_json(d));
      }
      const auto& w = need("C3wrC3");
      auto iso = isomorphism_test(w.pres, need("Sp4(3)-Sylow").pres);
      r.check("row k=3 p>=3 Sp4(p) [C3wrC3]: C_3 wr C_3 is the Sp4(3)-Sylow", iso.isomorphic, "",
              "rank table, row k=3 p>=3, S in Syl_3(Sp4(3))");
      rows["k=3, p>=3"] = gs;
    }

    {  // k = 3, p = 7, |S| = 7^5
      Row row(r, "k=3 p=7 |S|=7^5");
      const auto& d = data("7^5-exotic-host");
      const auto& G = d.e.pres;
      row.cell(d, "sectional rank 3", d.rank.exact && d.rank.k == 3, s(d.rank.k));
      row.cell(d, "|S| = 7^5", G.p() == 7 && G.n() == 5, "");
      row.cell(d, "pearls C_7 x C_7 only", cert_ok(d.cert_a) && !d.cert_e, kinds(d));
      row.cell(d, "one F-class of pearls (n - epsilon not divisible by p-1)", (G.n() - 0) % (G.p() - 1) != 0,
               "n = " + s(G.n()));
      if (d.cert_a) {
        row.cell(d, "Out_F(S) = C_6", d.cert_a->torus_order == 6, s(d.cert_a->torus_order));
        row.cell(d, "case 3 of the classification", d.cert_a->case_label == 3, s(d.cert_a->case_label));
        row.cell(d, "O_7(F) = 1", d.cert_a->op_exact && d.cert_a->op_upper.size_exp() == 0,
                 "p^" + s(d.cert_a->op_upper.size_exp()));
        row.cell(d, "certificate checks", d.cert_a->pass(), "");
      }
      rows["k=3, p=7"] = group_json(d);
    }

    {  // k = 4, p >= 5, |S| = p^5, gamma_1 elementary abelian
      Row row(r, "k=4 p>=5 |S|=p^5");
      const auto& d = data("C5-on-Z[w]/(w-1)^4");
      const auto& G = d.e.pres;
      auto g1 = profile(G, *d.sd.gamma1);
      row.cell(d, "sectional rank 4", d.rank.exact && d.rank.k == 4, s(d.rank.k));
      row.cell(d, "|S| = p^5", G.n() == 5, "");
      row.cell(d, "pearls C_p x C_p and/or p^{1+2}_+", cert_ok(d.cert_a) && cert_ok(d.cert_e), kinds(d));
      row.cell(d, "gamma_1 elementary abelian of order p^4", g1.elementary_abelian && d.sd.gamma1->size_exp() == 4,
               "");
      std::string got;
      row.cell(d, "non-pearl essential candidates within {gamma_1}", survivors_within(d, {"gamma1"}, got), got);
      rows["k=4, p>=5, |S|=p^5"] = group_json(d);
    }

    {  // k = 4, p = 5, |S| >= 5^6, gamma_1 abelian
      Row row(r, "k=4 p=5 |S|>=5^6 gamma_1 abelian");
      const auto& d = data("C5-on-Z[w]/(w-1)^5");
      const auto& G = d.e.pres;
      auto g1 = profile(G, *d.sd.gamma1);
      row.cell(d, "sectional rank 4", d.rank.exact && d.rank.k == 4, s(d.rank.k));
      row.cell(d, "|S| >= 5^6", G.n() >= 6, "");
      row.cell(d, "pearls C_5 x C_5 and/or 5^{1+2}_+", cert_ok(d.cert_a) && cert_ok(d.cert_e), kinds(d));
      row.cell(d, "gamma_1 = C_S(Z_2(S)) abelian of exponent > 5",
               *d.sd.gamma1 == *d.sd.cs_z2 && g1.abelian && g1.exponent > 5, "exponent " + s(g1.exponent));
      std::string got;
      row.cell(d, "non-pearl essential candidates within {gamma_1}", survivors_within(d, {"gamma1"}, got), got);
      rows["k=4, p=5, gamma_1 abelian"] = group_json(d);
    }

    {  // k = 4, p = 5, |S| >= 5^6, gamma_1 non-abelian
      Row row(r, "k=4 p=5 |S|>=5^6 gamma_1 non-abelian");
      nlohmann::json gs = nlohmann::json::array();
      for (int i = 1;; ++i) {
        const std::string label = "5^6-pearl-host-" + s(i);
        if (!by.count(label)) break;
        const auto& d = data(label);
        const auto& G = d.e.pres;
        auto g1 = profile(G, *d.sd.gamma1);
        row.cell(d, "sectional rank 4", d.rank.exact && d.rank.k == 4, s(d.rank.k));
        row.cell(d, "gamma_1 = C_S(Z_2(S)) non-abelian", *d.sd.gamma1 == *d.sd.cs_z2 && !g1.abelian, "");
        bool one_kind = (cert_ok(d.cert_a) != cert_ok(d.cert_e)) && (!d.cert_a || d.cert_a->pass()) &&
                        (!d.cert_e || d.cert_e->pass());
        row.cell(d, "pearls C_5 x C_5 or 5^{1+2}_+", one_kind, kinds(d));
        const auto& c = d.cert_a ? d.cert_a : d.cert_e;
        if (c) row.cell(d, "Out_F(S) = C_4", c->torus_order == 4, s(c->torus_order));
        gs.push_back(group_json(d));
      }
      row.cell(data("5^6-pearl-host-1"), "five candidate groups", gs.size() == 5, s(gs.size()));
      rows["k=4, p=5, gamma_1 non-abelian"] = gs;
    }

    {  // k = 4, p = 7, G2(7)
      Row row(r, "k=4 p=7 G2(7)");
      const auto& d = data("G2(7)-Sylow");
      const auto& G = d.e.pres;
      auto g1 = profile(G, *d.sd.gamma1);
      row.cell(d, "sectional rank 4", d.rank.exact && d.rank.k == 4, s(d.rank.k));
      row.cell(d, "|S| = 7^6", G.p() == 7 && G.n() == 6, "");
      row.cell(d, "pearls C_7 x C_7 only", cert_ok(d.cert_a) && !d.cert_e, kinds(d));
      row.cell(d, "gamma_1 = 7^{1+4}_+", g1.extraspecial && g1.exponent == 7 && d.sd.gamma1->size_exp() == 5, "");
      std::string got;
      row.cell(d, "non-pearl essential candidates within {gamma_1, C_S(Z_2)-family}",
               survivors_within(d, {"gamma1", "cs_z2-family"}, got), got);
      if (d.cert_a) {
        row.cell(d, "case 3 of the classification", d.cert_a->case_label == 3, s(d.cert_a->case_label));
        row.cell(d, "certificate checks", d.cert_a->pass(), "");
      }
      rows["k=4, p=7, G2(7)"] = group_json(d);
    }

    {  // k = 4, p = 7, extraspecial pearls
      Row row(r, "k=4 p=7 |S|=7^6 extraspecial pearls");
      const auto& d = data("813-equivalent");
      const auto& G = d.e.pres;
      row.cell(d, "sectional rank 4", d.rank.exact && d.rank.k == 4, s(d.rank.k));
      row.cell(d, "|S| = 7^6", G.p() == 7 && G.n() == 6, "");
      row.cell(d, "pearls 7^{1+2}_+ only", cert_ok(d.cert_e) && !d.cert_a, kinds(d));
      row.cell(d, "one F-class of pearls (n - epsilon not divisible by p-1)", (G.n() - 1) % (G.p() - 1) != 0,
               "n = " + s(G.n()));
      if (d.cert_e) {
        const auto& c = *d.cert_e;
        row.cell(d, "Out_F(S) = C_6", c.torus_order == 6, s(c.torus_order));
        Subgroup Z = d.sd.Z(G, 1);
        row.cell(d, "O_7(F) = Z(S)", c.op_exact && c.op_upper == Z, "p^" + s(c.op_upper.size_exp()));
        row.cell(d, "certificate checks", c.pass(), "");
        QuotientSection q = quotient_section(G, Z);
        auto iso = isomorphism_test(q.pres, need("7^5-exotic-host").pres);
        row.cell(d, "S/Z(S) is the 7^5 host (F/Z(S) relation)", iso.isomorphic, "");
      }
      rows["k=4, p=7, extraspecial pearls"] = group_json(d);
    }
    r.results["rows"] = rows;
  });
}

}  // namespace pf::cli

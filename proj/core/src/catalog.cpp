#include "pearlforge/catalog.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pearlforge/pc_io.hpp"

namespace pf {

namespace {

void require_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) throw InputError("p must be an odd prime");
  for (int d = 3; d * d <= p; d += 2)
    if (p % d == 0) throw InputError("p must be an odd prime");
}

Elem unit(int k, int a = 1) {
  Elem e{};
  e[k] = static_cast<uint8_t>(a);
  return e;
}

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

PcPresentation checked(PcPresentation P) {
  auto f = P.consistency_check();
  if (!f.empty()) throw StateError("catalog construction failed consistency at " + f.front().overlap);
  return P;
}

}  // namespace

PcPresentation extraspecial_plus(int p) {
  require_odd_prime(p);
  PcPresentation P(p, 3, {1, 1, 2});
  P.set_comm(1, 0, unit(2));
  return checked(std::move(P));
}

PcPresentation sp4_sylow(int p) {
  require_odd_prime(p);
  PcPresentation P(p, 4, {1, 1, 2, 3});
  P.set_comm(1, 0, unit(2));
  P.set_comm(2, 0, unit(3));
  return checked(std::move(P));
}

PcPresentation wreath_3() {
  // x permutes e1 -> e2 -> e3; (P - 1) e1 = 2 (1,2,0), (P - 1)(1,2,0) = 2 (1,1,1)
  PcPresentation P(3, 4, {1, 1, 2, 3});
  P.set_comm(1, 0, unit(2, 2));
  P.set_comm(2, 0, unit(3, 2));
  return checked(std::move(P));
}

PcPresentation cyclotomic(int p, int m) {
  require_odd_prime(p);
  if (m < 1 || m + 1 > kMaxGens) throw InputError("cyclotomic: m out of range");
  const int n = m + 1;
  std::vector<int> w(n);
  w[0] = 1;
  for (int k = 1; k < n; ++k) w[k] = k;
  // gens: x = g0, e_j = g_{j+1}; p e_j = -sum_{k=1}^{p-1} C(p, k+1) e_{j+k}
  std::vector<std::vector<int>> pe(m, std::vector<int>(m, 0));
  // add `amt` copies of e_t into v with carries (p e_t = pe[t], computed for t > current)
  std::function<void(std::vector<int>&, int, long long)> add = [&](std::vector<int>& v, int t, long long amt) {
    if (t >= m || amt == 0) return;
    long long s = v[t] + amt;
    long long q = s >= 0 ? s / p : -((-s + p - 1) / p);
    v[t] = static_cast<int>(s - q * p);
    if (q)
      for (int u = t + 1; u < m; ++u)
        if (pe[t][u]) add(v, u, q * pe[t][u]);
  };
  for (int j = m - 1; j >= 0; --j) {
    std::vector<int> v(m, 0);
    for (int k = 1; k <= p - 1; ++k) add(v, j + k, -binom(p, k + 1));
    pe[j] = v;
  }
  PcPresentation P(p, n, w);
  for (int j = 0; j < m; ++j) {
    Elem e{};
    for (int t = 0; t < m; ++t) e[t + 1] = static_cast<uint8_t>(pe[j][t]);
    P.set_power(j + 1, e);
    if (j + 1 < m) P.set_comm(j + 1, 0, unit(j + 2));
  }
  return checked(std::move(P));
}

CatalogEntry build_named(const std::string& name, int p) {
  CatalogEntry e;
  e.provenance = "explicit-construction";
  e.builder = name;
  e.builder_p = p;
  if (name == "extraspecial_plus") {
    e.pres = extraspecial_plus(p);
    e.label = std::to_string(p) + "^{1+2}_+";
    e.claim = "extraspecial group of order p^3 and exponent p";
  } else if (name == "sp4_sylow") {
    e.pres = sp4_sylow(p);
    e.label = "Sp4(" + std::to_string(p) + ")-Sylow";
    e.claim = "elementary abelian p^3 extended by a Jordan block of order p";
  } else if (name == "wreath_3") {
    if (p != 3) throw InputError("wreath_3 is defined for p = 3 only");
    e.pres = wreath_3();
    e.label = "C3wrC3";
    e.claim = "C_3 wr C_3, isomorphic to the Sp4(3)-Sylow";
  } else {
    throw InputError("unknown catalog name: " + name);
  }
  return e;
}

CatalogEntry build_cyclotomic(int p, int m) {
  CatalogEntry e;
  e.provenance = "explicit-construction";
  e.builder = "cyclotomic" + std::to_string(m);
  e.builder_p = p;
  e.pres = cyclotomic(p, m);
  e.label = "C" + std::to_string(p) + "-on-Z[w]/(w-1)^" + std::to_string(m);
  e.claim = "maximal class, gamma_1 abelian of rank p-1 when m >= p-1";
  return e;
}

std::string catalog_dir() {
  if (const char* env = std::getenv("PEARLFORGE_CATALOG"); env && *env) return env;
#ifdef PEARLFORGE_DEFAULT_CATALOG
  return PEARLFORGE_DEFAULT_CATALOG;
#else
  return "catalog";
#endif
}

std::string verify_entry(const CatalogEntry& e) {
  if (!e.pres.consistent()) return "presentation not consistent";
  if (!e.builder.empty()) {
    PcPresentation ref;
    if (e.builder.rfind("cyclotomic", 0) == 0)
      ref = cyclotomic(e.builder_p, std::stoi(e.builder.substr(10)));
    else
      ref = build_named(e.builder, e.builder_p).pres;
    if (!ref.same_relations(e.pres)) return "relations differ from builder " + e.builder;
  }
  if (!e.constraints.empty()) {
    std::string why;
    if (!satisfies(e.pres, FamilyConstraints::from_json(e.constraints), &why)) return "constraint fails: " + why;
  }
  return {};
}

std::vector<CatalogEntry> load_catalog(const std::string& dir, bool verify) {
  namespace fs = std::filesystem;
  fs::path mpath = fs::path(dir) / "manifest.json";
  std::ifstream in(mpath);
  if (!in) throw InputError("cannot open catalog manifest " + mpath.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ParseError(std::string("manifest: ") + ex.what());
  }
  std::vector<CatalogEntry> out;
  for (const auto& it : j.at("entries")) {
    CatalogEntry e;
    e.label = it.at("label").get<std::string>();
    e.file = it.at("file").get<std::string>();
    e.provenance = it.value("provenance", "");
    e.claim = it.value("claim", "");
    e.builder = it.value("builder", "");
    e.builder_p = it.value("builder_p", 0);
    if (it.contains("constraints")) e.constraints = it.at("constraints").dump();
    e.note = it.value("note", "");
    e.pres = load_checked((fs::path(dir) / e.file).string());
    if (verify) {
      std::string bad = verify_entry(e);
      if (!bad.empty()) throw StateError("catalog entry " + e.label + ": " + bad);
    }
    out.push_back(std::move(e));
  }
  return out;
}

CatalogEntry load_catalog_entry(const std::string& label, const std::string& dir, bool verify) {
  for (auto& e : load_catalog(dir, false))
    if (e.label == label) {
      if (verify) {
        std::string bad = verify_entry(e);
        if (!bad.empty()) throw StateError("catalog entry " + e.label + ": " + bad);
      }
      return e;
    }
  throw InputError("no catalog entry labeled " + label);
}

void write_catalog(const std::string& dir, const std::vector<CatalogEntry>& entries) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json j;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    save_presentation(e.pres, (fs::path(dir) / e.file).string());
    nlohmann::json r{{"label", e.label},
                     {"file", e.file},
                     {"provenance", e.provenance},
                     {"claim", e.claim},
                     {"p", e.pres.p()},
                     {"n", e.pres.n()}};
    if (!e.builder.empty()) {
      r["builder"] = e.builder;
      r["builder_p"] = e.builder_p;
    }
    if (!e.constraints.empty()) r["constraints"] = nlohmann::json::parse(e.constraints);
    if (!e.note.empty()) r["note"] = e.note;
    j["entries"].push_back(std::move(r));
  }
  std::ofstream out(fs::path(dir) / "manifest.json");
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

namespace {

const char* tri_str(Tri t) { return t == Tri::yes ? "yes" : t == Tri::no ? "no" : "any"; }

Tri tri_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return Tri::any;
  const auto& v = j.at(key);
  if (v.is_boolean()) return v.get<bool>() ? Tri::yes : Tri::no;
  std::string s = v.get<std::string>();
  if (s == "yes" || s == "true") return Tri::yes;
  if (s == "no" || s == "false") return Tri::no;
  if (s == "any") return Tri::any;
  throw ParseError(std::string("bad value for ") + key);
}

const char* kKeys[] = {"p",
                       "n",
                       "class",
                       "exponent",
                       "gamma1",
                       "cs_z2_abelian",
                       "derived_elementary_abelian",
                       "maximal_elementary_abelian",
                       "maximal_extraspecial",
                       "maximal_abelian",
                       "pearl_candidates",
                       "pearl_delta",
                       "sectional_rank"};

}  // namespace

std::string FamilyConstraints::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["n"] = n;
  j["class"] = nilpotency_class.value_or(n - 1);
  if (exponent) j["exponent"] = *exponent;
  const char* g = gamma1 == Gamma1::abelian        ? "abelian"
                  : gamma1 == Gamma1::nonabelian   ? "nonabelian"
                  : gamma1 == Gamma1::extraspecial ? "extraspecial"
                                                   : "any";
  j["gamma1"] = g;
  j["cs_z2_abelian"] = tri_str(cs_z2_abelian);
  j["derived_elementary_abelian"] = tri_str(derived_elementary_abelian);
  j["maximal_elementary_abelian"] = tri_str(maximal_elementary_abelian);
  j["maximal_extraspecial"] = tri_str(maximal_extraspecial);
  j["maximal_abelian"] = tri_str(maximal_abelian);
  j["pearl_candidates"] = tri_str(pearl_candidates);
  j["pearl_delta"] = tri_str(pearl_delta);
  if (sectional_rank) j["sectional_rank"] = *sectional_rank;
  return j.dump(2);
}

FamilyConstraints FamilyConstraints::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& ex) {
    throw ParseError(std::string("constraints: ") + ex.what());
  }
  if (!j.is_object()) throw ParseError("constraints must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKeys) known |= it.key() == k;
    if (!known) throw ParseError("unknown constraint: " + it.key());
  }
  FamilyConstraints c;
  try {
    c.p = j.at("p").get<int>();
    c.n = j.at("n").get<int>();
    if (j.contains("class")) c.nilpotency_class = j.at("class").get<int>();
    if (j.contains("exponent")) c.exponent = j.at("exponent").get<uint64_t>();
    if (j.contains("gamma1")) {
      std::string g = j.at("gamma1").get<std::string>();
      if (g == "abelian") c.gamma1 = Gamma1::abelian;
      else if (g == "nonabelian") c.gamma1 = Gamma1::nonabelian;
      else if (g == "extraspecial") c.gamma1 = Gamma1::extraspecial;
      else if (g != "any") throw ParseError("bad gamma1 value " + g);
    }
    c.cs_z2_abelian = tri_from(j, "cs_z2_abelian");
    c.derived_elementary_abelian = tri_from(j, "derived_elementary_abelian");
    c.maximal_elementary_abelian = tri_from(j, "maximal_elementary_abelian");
    c.maximal_extraspecial = tri_from(j, "maximal_extraspecial");
    c.maximal_abelian = tri_from(j, "maximal_abelian");
    c.pearl_candidates = tri_from(j, "pearl_candidates");
    c.pearl_delta = tri_from(j, "pearl_delta");
    if (j.contains("sectional_rank")) c.sectional_rank = j.at("sectional_rank").get<int>();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ParseError(std::string("constraints: ") + ex.what());
  }
  if (c.p < 3 || c.p % 2 == 0) throw ParseError("p must be an odd prime");
  if (c.n < 3 || c.n > 7) throw ParseError("n must lie in 3..7");
  return c;
}

std::string FamilyConstraints::describe() const {
  std::ostringstream os;
  os << "p=" << p << " n=" << n << " class=" << nilpotency_class.value_or(n - 1);
  if (exponent) os << " exponent=" << *exponent;
  if (gamma1 != Gamma1::any)
    os << " gamma1="
       << (gamma1 == Gamma1::abelian ? "abelian" : gamma1 == Gamma1::nonabelian ? "nonabelian" : "extraspecial");
  auto tri = [&](const char* name, Tri t) {
    if (t != Tri::any) os << " " << name << "=" << tri_str(t);
  };
  tri("cs_z2_abelian", cs_z2_abelian);
  tri("derived_elementary_abelian", derived_elementary_abelian);
  tri("maximal_elementary_abelian", maximal_elementary_abelian);
  tri("maximal_extraspecial", maximal_extraspecial);
  tri("maximal_abelian", maximal_abelian);
  tri("pearl_candidates", pearl_candidates);
  tri("pearl_delta", pearl_delta);
  if (sectional_rank) os << " sectional_rank=" << *sectional_rank;
  return os.str();
}

}  // namespace pf

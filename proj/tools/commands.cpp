#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "pearlforge/catalog.hpp"
#include "pearlforge/fusion.hpp"
#include "pearlforge/pc_io.hpp"

namespace pf::cli {

namespace fs = std::filesystem;

Report guarded(const std::string& command, const std::function<void(Report&)>& body) {
  Report r;
  r.command = command;
  auto t0 = std::chrono::steady_clock::now();
  auto fail = [&](int code, const char* kind, const std::string& msg) {
    r.error_code = code;
    r.error_kind = kind;
    r.error_message = msg;
  };
  try {
    body(r);
  } catch (const BudgetExceeded& e) {
    r.budget_used = e.used();
    fail(kBudget, "budget", std::string(e.what()) + (e.unscanned().empty() ? "" : "; unscanned: " + e.unscanned()));
  } catch (const Inconclusive& e) {
    fail(kBudget, "budget", e.what());
  } catch (const InputError& e) {
    fail(kInputError, "input", e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(kInputError, "input", e.what());
  } catch (const Error& e) {
    fail(kInputError, "input", e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {

uint64_t budget_or(const Options& o, uint64_t dflt) { return o.budget.value_or(dflt); }

void add_checks(Report& r, const std::string& prefix, const std::vector<FactCheck>& checks, const std::string& ref) {
  for (const auto& c : checks) r.check(prefix + c.name, c.pass, c.detail, ref);
}

// Loads and runs the consistency check; failures become input errors listing the overlap.
PcPresentation load_for_command(Report& r, const std::string& path) {
  PcPresentation G = load_presentation(path);
  G.validate_structure();
  auto f = G.consistency_check();
  if (!f.empty()) {
    nlohmann::json bad = nlohmann::json::array();
    for (const auto& x : f) bad.push_back(x.overlap);
    r.results["consistency"] = {{"pass", false}, {"failing_overlaps", bad}};
    throw InputError("presentation fails consistency at " + f.front().overlap);
  }
  r.group_label = fs::path(path).filename().string();
  r.group_hash = group_hash(G);
  r.results["group"] = {{"p", G.p()}, {"n", G.n()}, {"order", "p^" + std::to_string(G.n())}};
  r.results["consistency"] = {{"pass", true}};
  return G;
}

void emit(const Options& opt, const std::string& name, const PcPresentation& G) {
  if (opt.emit_dir.empty()) return;
  fs::create_directories(opt.emit_dir);
  save_presentation(G, (fs::path(opt.emit_dir) / name).string());
}

nlohmann::json profile_json(const PcPresentation& G, const Subgroup& H) {
  auto pr = profile(G, H);
  return {{"order", "p^" + std::to_string(H.size_exp())},
          {"rank", pr.d},
          {"abelian", pr.abelian},
          {"elementary_abelian", pr.elementary_abelian},
          {"extraspecial", pr.extraspecial},
          {"exponent", pr.exponent}};
}

nlohmann::json series_section(Report& r, const PcPresentation& G, SeriesData& sd, uint64_t budget) {
  nlohmann::json s;
  s["nilpotency_class"] = sd.nilpotency_class;
  s["maximal_class"] = sd.is_maximal_class;
  nlohmann::json low = nlohmann::json::array(), up = nlohmann::json::array();
  for (const auto& H : sd.lower) low.push_back(H.size_exp());
  for (const auto& H : sd.zeta) up.push_back(H.size_exp());
  s["lower_central_orders_exp"] = low;
  s["upper_central_orders_exp"] = up;
  if (!sd.is_maximal_class) return s;
  if (sd.gamma1) {
    s["gamma1"] = profile_json(G, *sd.gamma1);
    s["cs_z2"] = profile_json(G, *sd.cs_z2);
    s["gamma1_equals_cs_z2"] = *sd.gamma1 == *sd.cs_z2;
  }
  if (sd.degree_of_commutativity) s["degree_of_commutativity"] = *sd.degree_of_commutativity;
  if (G.n() >= 4) {
    auto oa = omega_agemo_chains(G, sd);
    r.check("series: omega/agemo chains", oa.ok, oa.ok ? "" : oa.checks.empty() ? "" : oa.checks.back(),
            "power structure of maximal-class groups");
    auto mf = verify_maximal_class_facts(G, sd, budget);
    s["maximal_class_facts_exhaustive"] = mf.exhaustive;
    s["maximal_subgroups_of_maximal_class"] = mf.maximal_subgroups_of_maximal_class;
    if (mf.applicable) add_checks(r, "series: ", mf.checks, "structure of maximal-class groups");
  }
  return s;
}

nlohmann::json tower_json(const PcPresentation& G, const TowerReport& t) {
  nlohmann::json idx = nlohmann::json::array(), cls = nlohmann::json::array();
  for (auto i : t.indices) idx.push_back(i);
  for (auto c : t.class_in_quotient) cls.push_back(c);
  return {{"length", t.m},
          {"indices", idx},
          {"top_maximal", subgroup_json(G, t.top_maximal)},
          {"h_series_applicable", t.h_series_applicable},
          {"class_in_quotient", cls},
          {"overgroups_found", t.overgroups_found}};
}

nlohmann::json towers_section(Report& r, const PcPresentation& G, const SeriesData& sd,
                              const std::vector<PearlCandidate>& cands, uint64_t budget) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& cc : candidate_classes(G, cands)) {
    auto t = normalizer_tower(G, sd, cc.rep, budget);
    nlohmann::json j = tower_json(G, t);
    j["kind"] = kind_name(cc.rep.kind);
    j["class_size"] = cc.size;
    j["E"] = subgroup_json(G, cc.rep.E);
    out.push_back(j);
    add_checks(r, std::string("towers[") + kind_name(cc.rep.kind) + " " + subgroup_to_string(G, cc.rep.E) + "]: ",
               t.checks, "normalizer towers of pearl candidates");
  }
  auto x = cross_tower_checks(G, sd, cands, budget);
  add_checks(r, "", x.checks, "conjugacy of candidates sharing a tower");
  return out;
}

nlohmann::json candidates_json(const PcPresentation& G, const std::vector<PearlCandidate>& cands) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& cc : candidate_classes(G, cands))
    out.push_back({{"kind", kind_name(cc.rep.kind)}, {"class_size", cc.size}, {"E", subgroup_json(G, cc.rep.E)}});
  return out;
}

nlohmann::json scan_json(const PcPresentation& G, const ScanReport& sc) {
  std::map<std::string, int> rejected;
  nlohmann::json surv = nlohmann::json::array();
  for (const auto& e : sc.entries) {
    for (auto why : e.rejected) ++rejected[reason_name(why)];
    if (e.survives())
      surv.push_back({{"label", label_name(e.label)}, {"class_size", e.class_size}, {"E", subgroup_json(G, e.E)}});
  }
  return {{"classes_scanned", sc.entries.size()}, {"survivors", surv}, {"rejections", rejected}};
}

nlohmann::json aut_json(const AutGroupDescription& A, const CenterActionScan& cs) {
  return {{"order", A.order},
          {"p_part", A.p_part},
          {"p_prime_part", A.p_prime_part},
          {"p_prime_cyclic", A.p_prime_cyclic},
          {"p_prime_generator_order", A.p_prime_generator_order},
          {"inner_order", A.inner_order},
          {"image_on_frattini_quotient", A.gl2_image.size()},
          {"center_action",
           {{"max_p_prime_order_centralizing", cs.max_order_centralizing},
            {"p_prime_faithful_on_center", cs.p_prime_faithful_on_center}}}};
}

nlohmann::json certificate_json(const PcPresentation& G, const FusionCertificate& C) {
  nlohmann::json pearls = nlohmann::json::array();
  for (const auto& pc : C.pearls) {
    nlohmann::json imgs = nlohmann::json::array();
    for (const auto& g : pc.delta.phi.images) imgs.push_back(elem_to_string(G, g));
    pearls.push_back({{"kind", kind_name(pc.cls.rep.kind)},
                      {"class_size", pc.cls.size},
                      {"E", subgroup_json(G, pc.delta.E.E)},
                      {"x", elem_to_string(G, pc.delta.x)},
                      {"z", elem_to_string(G, pc.delta.z)},
                      {"delta_images", imgs},
                      {"delta_order", pc.delta.order}});
  }
  nlohmann::json ess = nlohmann::json::array();
  for (const auto& e : C.essentials)
    ess.push_back({{"E", subgroup_json(G, e.E)},
                   {"kind", e.kind},
                   {"automizer", e.automizer},
                   {"class_size", e.class_size}});
  return {{"lambda", C.lambda},
          {"sectional_rank", C.sectional_rank},
          {"case", C.case_label},
          {"torus_order", C.torus_order},
          {"aut_p_prime_part", C.aut_p_prime},
          {"torus_flag", C.torus_flag},
          {"op_lower", subgroup_json(G, C.op_lower)},
          {"op_upper", subgroup_json(G, C.op_upper)},
          {"op_exact", C.op_exact},
          {"pearl_classes", pearls},
          {"essentials", ess},
          {"notes", C.notes}};
}

std::vector<PearlCandidate> candidates_of(const PcPresentation& G, const SeriesData& sd) {
  return G.n() == 3 ? order_p3_candidates(G) : find_pearl_candidates(G, sd);
}

}  // namespace

Report run_analyze(const std::string& path, const Options& opt) {
  return guarded("analyze " + path, [&](Report& r) {
    PcPresentation G = load_for_command(r, path);
    emit(opt, fs::path(path).filename().string(), G);
    const uint64_t budget = budget_or(opt, kDefaultBudget);
    SeriesData sd = central_series(G);
    if (sd.is_maximal_class) sd = analyze_series(G);
    r.results["series"] = series_section(r, G, sd, budget);
    auto rr = sectional_rank(G, budget);
    r.budget_used += rr.budget_used;
    r.results["sectional_rank"] = {{"k", rr.k}, {"exact", rr.exact}, {"witness", subgroup_json(G, rr.witness)}};
    if (!sd.is_maximal_class || G.n() < 3) {
      r.results["pearls"] = "not applicable: S is not of maximal class";
      return;
    }
    auto cands = candidates_of(G, sd);
    r.results["pearl_candidates"] = candidates_json(G, cands);
    if (G.n() == 3) {
      r.results["essential_scan"] = "not applicable at order p^3";
      return;
    }
    r.results["towers"] = towers_section(r, G, sd, cands, budget);
    auto sc = essential_candidate_scan(G, sd, budget);
    r.budget_used += sc.budget_used;
    r.results["essential_scan"] = scan_json(G, sc);
  });
}

Report run_aut(const std::string& path, const Options& opt) {
  return guarded("aut " + path, [&](Report& r) {
    PcPresentation G = load_for_command(r, path);
    MaxClassForm F(G);
    auto A = automorphism_group(F, budget_or(opt, kDefaultBudget));
    r.budget_used = A.nodes;
    auto cs = center_action_scan(F, A);
    r.results["automorphisms"] = aut_json(A, cs);
    auto st = verify_autoS_structure(F, A);
    if (st.applicable) {
      r.results["automorphisms"]["scalar_witness"] = {{"i", st.i}, {"j", st.j}, {"r", st.r}};
      r.check("aut: scalar relation on the commutator witness", st.scalar_relation_holds, "",
              "p'-automorphisms act by scalars tied through commutators");
      r.check("aut: p'-part cyclic", st.p_prime_cyclic, std::to_string(st.p_prime_order),
              "p'-part of Aut(S) is cyclic");
      r.check("aut: p'-order divides p-1", st.divides_p_minus_1, std::to_string(st.p_prime_order),
              "p'-part of Aut(S) divides p-1");
    } else {
      r.results["automorphisms"]["structure_note"] = st.note;
    }
  });
}

Report run_towers(const std::string& path, const Options& opt) {
  return guarded("towers " + path, [&](Report& r) {
    PcPresentation G = load_for_command(r, path);
    SeriesData sd = analyze_series(G);
    if (G.n() < 4) {
      r.results["towers"] = "not applicable below order p^4";
      return;
    }
    auto cands = find_pearl_candidates(G, sd);
    r.results["pearl_candidates"] = candidates_json(G, cands);
    r.results["towers"] = towers_section(r, G, sd, cands, budget_or(opt, kDefaultBudget));
  });
}

Report run_certificate(const std::string& path, const Options& opt) {
  return guarded("certificate " + path + (opt.pearl_kind.empty() ? "" : " --pearl-kind " + opt.pearl_kind),
                 [&](Report& r) {
                   PcPresentation G = load_for_command(r, path);
                   CertificateRequest rq;
                   if (opt.pearl_kind == "a") rq.extraspecial = false;
                   else if (opt.pearl_kind == "e") rq.abelian = false;
                   else if (!opt.pearl_kind.empty()) throw InputError("--pearl-kind must be a or e");
                   rq.lambda = opt.lambda;
                   rq.budget = budget_or(opt, kDefaultBudget);
                   FusionCertificate C;
                   try {
                     C = build_fusion_certificate(G, rq);
                   } catch (const Undefined& e) {
                     r.results["certificate"] = {{"status", "none"}, {"reason", e.what()}};
                     return;
                   }
                   r.results["certificate"] = certificate_json(G, C);
                   add_checks(r, "certificate: ", C.checks, "pearl fusion data and its consequences");
                   emit(opt, fs::path(path).filename().string(), G);
                 });
}

Report run_derive(const std::string& spec_path, const Options& opt) {
  return guarded("derive " + spec_path, [&](Report& r) {
    std::ifstream in(spec_path);
    if (!in) throw InputError("cannot open " + spec_path);
    std::stringstream ss;
    ss << in.rdbuf();
    FamilyConstraints c = FamilyConstraints::from_json(ss.str());
    r.group_label = c.describe();
    FamilyResult fr = derive_family(c, budget_or(opt, 200'000'000));
    r.budget_used = fr.budget_used;
    r.results["constraints"] = nlohmann::json::parse(c.to_json());
    r.results["count"] = fr.classes.size();
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : fr.levels)
      levels.push_back({{"order_exp", l.order_exp}, {"parents", l.parents}, {"children", l.children}, {"classes", l.classes}});
    r.results["levels"] = levels;
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& e : fr.classes) {
      nlohmann::json j{{"label", e.label}, {"hash", group_hash(e.pres)}};
      if (fr.classes.size() >= 2 && e.pres.n() >= 4) {
        MaxClassForm F(e.pres);
        auto cs = center_action_scan(F, automorphism_group(F));
        j["center_action"] = {{"max_p_prime_order_centralizing", cs.max_order_centralizing},
                              {"p_prime_faithful_on_center", cs.p_prime_faithful_on_center}};
      }
      if (opt.emit_dir.empty()) {
        j["presentation"] = format_presentation(e.pres);
      } else {
        std::string file = e.label + ".pc";
        emit(opt, file, e.pres);
        j["file"] = (fs::path(opt.emit_dir) / file).string();
      }
      classes.push_back(j);
    }
    r.results["classes"] = classes;
  });
}

}  // namespace pf::cli

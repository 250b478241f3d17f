// Runs the pearlforge binary end to end.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "pearlforge/pc_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = {}) {
  std::string cmd = env + (env.empty() ? "" : " ") + PEARLFORGE_BIN + std::string(" ") + args + " 2>&1";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f);
  char buf[4096];
  size_t k;
  while ((k = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, k);
  int st = pclose(f);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

nlohmann::json structured(const std::string& args, int expect_code) {
  auto r = run("--format structured " + args);
  CAPTURE(r.out);
  REQUIRE(r.code == expect_code);
  return nlohmann::json::parse(r.out);
}

std::string cat(const std::string& name) { return std::string(PEARLFORGE_TEST_CATALOG) + "/" + name; }

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("pearlforge-cli-" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("analyze on p^{1+2}_+") {
  auto j = structured("analyze " + cat("3__1_2___.pc"), 0);
  CHECK(j["results"]["series"]["nilpotency_class"] == 2);
  CHECK(j["results"]["essential_scan"].dump().find("not applicable at order p^3") != std::string::npos);
  CHECK(j["exit_code"] == 0);
}

TEST_CASE("analyze on G2(7)-Sylow flags extraspecial gamma_1") {
  auto j = structured("analyze " + cat("G2_7__Sylow.pc"), 0);
  CHECK(j["results"]["series"]["gamma1"]["extraspecial"] == true);
}

TEST_CASE("input errors exit 1") {
  auto bad = scratch("bad.pc");
  write(bad, "p 3\nn 3\nweights 1 1 2\npowers\n0 0 0\n0 0 0\n0 0 0\ncommutators\n2 1 : 0 0 1\n3 1 : 0 1 0\nend\n");
  CHECK(run("analyze " + bad.string()).code == 1);
  CHECK(run("aut /nonexistent.pc").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("certificate " + cat("3__1_2___.pc") + " --pearl-kind q").code == 1);
  auto spec = scratch("bad.json");
  write(spec, R"({"p":3,"n":4,"colour":"red"})");
  CHECK(run("derive " + spec.string()).code == 1);
}

TEST_CASE("inconsistent presentation reports the overlap and exits 1") {
  auto G = pf::load_presentation(cat("7_5_exotic_host.pc"));
  pf::Elem c = G.comm_rel(3, 1);
  c[4] = static_cast<uint8_t>((c[4] + 1) % 7);
  G.set_comm(3, 1, c);
  auto f = scratch("corrupt.pc");
  pf::save_presentation(G, f.string());
  auto r = run("--format structured analyze " + f.string());
  CAPTURE(r.out);
  CHECK(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["consistency"]["pass"] == false);
  CHECK(!j["results"]["consistency"]["failing_overlaps"].empty());
}

TEST_CASE("derive with contradictory constraints gives 0 classes") {
  auto spec = scratch("contra.json");
  write(spec, R"({"p":3,"n":4,"class":4,"exponent":3,"gamma1":"extraspecial"})");
  auto j = structured("derive " + spec.string(), 0);
  CHECK(j["results"]["count"] == 0);
}

TEST_CASE("derive 7^5 family, emitted presentations round-trip") {
  auto spec = scratch("75.json");
  write(spec, R"({"p":7,"n":5,"class":4,"exponent":7,"cs_z2_abelian":"no"})");
  auto dir = scratch("emit");
  auto j = structured("derive " + spec.string() + " --emit-presentations " + dir.string(), 0);
  REQUIRE(j["results"]["count"] == 1);
  std::string file = j["results"]["classes"][0]["file"];
  auto a = structured("certificate " + file + " --pearl-kind a", 0);
  auto b = structured("certificate " + cat("7_5_exotic_host.pc") + " --pearl-kind a", 0);
  CHECK(a["verdicts"].dump() == b["verdicts"].dump());
  // emitting again and re-running reproduces the verdicts byte for byte
  auto dir2 = scratch("emit2");
  structured("analyze " + file + " --emit-presentations " + dir2.string(), 0);
  auto again = (dir2 / fs::path(file).filename()).string();
  CHECK(structured("analyze " + file, 0)["verdicts"].dump() == structured("analyze " + again, 0)["verdicts"].dump());
}

TEST_CASE("budget exhaustion exits 3") {
  auto spec = scratch("75b.json");
  write(spec, R"({"p":7,"n":5,"class":4,"exponent":7,"cs_z2_abelian":"no"})");
  auto j = structured("derive " + spec.string() + " --budget 100", 3);
  CHECK(j["error"]["kind"] == "budget");
  CHECK(!j["results"].contains("count"));
}

TEST_CASE("certificate kinds") {
  auto a = structured("certificate " + cat("Sp4_3__Sylow.pc") + " --pearl-kind e", 0);
  CHECK(a["exit_code"] == 0);
  auto none = structured("certificate " + cat("3__1_2___.pc") + " --pearl-kind e", 0);
  CHECK(none["results"]["certificate"]["status"] == "none");
}

TEST_CASE("reports are deterministic and independent of --threads") {
  const std::string f = cat("C5_on_Z_w___w_1__4.pc");
  auto a = structured("towers " + f, 0);
  auto b = structured("towers " + f + " --threads 1", 0);
  auto c = structured("towers " + f + " --threads 4", 0);
  CHECK(a["verdicts"].dump() == b["verdicts"].dump());
  CHECK(a["verdicts"].dump() == c["verdicts"].dump());
  CHECK(a["results"].dump() == c["results"].dump());
}

TEST_CASE("aut on the 7^5 host") {
  auto j = structured("aut " + cat("7_5_exotic_host.pc"), 0);
  CHECK(j["results"]["automorphisms"]["p_prime_part"] == 6);
}

TEST_CASE("PEARLFORGE_CATALOG points verify-table elsewhere") {
  auto empty = scratch("empty-catalog");
  fs::create_directories(empty);
  auto r = run("verify-table", "PEARLFORGE_CATALOG=" + empty.string());
  CHECK(r.code == 1);
}

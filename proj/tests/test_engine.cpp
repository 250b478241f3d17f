#include <random>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "oracle.hpp"
#include "pearlforge/catalog.hpp"
#include "pearlforge/pc_io.hpp"
#include "support.hpp"

using namespace pf;

TEST_CASE("text format round trip on the catalog") {
  for (const auto& e : test_catalog()) {
    CAPTURE(e.label);
    auto text = format_presentation(e.pres);
    auto back = parse_presentation(text);
    CHECK(back.same_relations(e.pres));
    CHECK(format_presentation(back) == text);
  }
}

TEST_CASE("relation outside the weight filtration is malformed") {
  const char* text =
      "p 3\nn 3\nweights 1 1 2\npowers\n0 1 0\n0 0 0\n0 0 0\ncommutators\n2 1 : 0 0 1\nend\n";
  CHECK_THROWS_AS(parse_presentation(text).validate_structure(), MalformedPresentation);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_presentation("garbage\n"), ParseError);
  CHECK_THROWS_AS(parse_presentation("p 4\nn 1\nweights 1\npowers\n0\nend\n"), InputError);
  CHECK_THROWS_AS(load_presentation("/nonexistent/file.pc"), InputError);
}

TEST_CASE("arithmetic is refused before a consistency pass") {
  auto G = parse_presentation(format_presentation(extraspecial_plus(3)));
  CHECK_THROWS_AS(G.mul(G.gen(0), G.gen(1)), StateError);
  CHECK(G.consistency_check().empty());
  // g2 g1 = g1 g2 [g2, g1] = g1 g2 g3
  Elem want{};
  want[0] = want[1] = want[2] = 1;
  CHECK(G.mul(G.gen(1), G.gen(0)) == want);
  CHECK(G.collect({{1, 1}, {0, 1}}) == want);
}

TEST_CASE("catalog presentations pass the consistency check") {
  for (auto e : test_catalog()) {
    CAPTURE(e.label);
    CHECK(e.pres.consistency_check().empty());
  }
}

TEST_CASE("random triples associate") {
  std::mt19937_64 rng(2024);
  for (const auto& e : test_catalog()) {
    CAPTURE(e.label);
    const auto& G = e.pres;
    int bad = 0;
    for (int t = 0; t < 2000; ++t) {
      Elem a = random_elem(G, rng), b = random_elem(G, rng), c = random_elem(G, rng);
      bad += G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c));
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("inverses, powers and orders") {
  std::mt19937_64 rng(7);
  for (const auto& e : test_catalog()) {
    CAPTURE(e.label);
    const auto& G = e.pres;
    for (int t = 0; t < 200; ++t) {
      Elem a = random_elem(G, rng);
      CHECK(is_identity(G.mul(a, G.inv(a))));
      CHECK(is_identity(G.mul(G.inv(a), a)));
      uint64_t o = G.order(a);
      CHECK(is_identity(G.pow(a, static_cast<long long>(o))));
      if (o > 1) CHECK(!is_identity(G.pow(a, static_cast<long long>(o / G.p()))));
      CHECK(G.pow(a, -3) == G.inv(G.pow(a, 3)));
      Elem b = random_elem(G, rng);
      CHECK(G.comm(a, b) == G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b)));
    }
  }
}

TEST_CASE("collector agrees with naive rewriting") {
  std::mt19937_64 rng(99);
  for (const auto& e : test_catalog()) {
    CAPTURE(e.label);
    const auto& G = e.pres;
    auto R = oracle::rules_of(G);
    oracle::Table shape;
    shape.p = G.p();
    shape.n = G.n();
    for (int t = 0; t < 40; ++t) {
      Elem a = random_elem(G, rng), b = random_elem(G, rng);
      oracle::Vec va(G.n()), vb(G.n());
      for (int i = 0; i < G.n(); ++i) {
        va[i] = a[i];
        vb[i] = b[i];
      }
      CHECK(shape.elem(shape.encode(oracle::product(R, va, vb))) == G.mul(a, b));
    }
  }
}

namespace {

// Evaluates one reported overlap with the naive rewriter: both sides.
std::pair<oracle::Vec, oracle::Vec> naive_overlap(const oracle::Rules& R, const std::string& overlap) {
  std::smatch m;
  auto unit = [&](int i, int t) {
    oracle::Vec v(R.n, 0);
    v[i] = t;
    return v;
  };
  auto P = [&](const oracle::Vec& a, const oracle::Vec& b) { return oracle::product(R, a, b); };
  if (std::regex_match(overlap, m, std::regex(R"(\(g(\d+) g(\d+)\) g(\d+))"))) {
    int k = std::stoi(m[1]) - 1, j = std::stoi(m[2]) - 1, i = std::stoi(m[3]) - 1;
    return {P(P(unit(k, 1), unit(j, 1)), unit(i, 1)), P(unit(k, 1), P(unit(j, 1), unit(i, 1)))};
  }
  if (std::regex_match(overlap, m, std::regex(R"(\(g(\d+)\^p\) g(\d+))"))) {
    int j = std::stoi(m[1]) - 1, i = std::stoi(m[2]) - 1;
    return {P(R.power[j], unit(i, 1)), P(unit(j, R.p - 1), P(unit(j, 1), unit(i, 1)))};
  }
  if (std::regex_match(overlap, m, std::regex(R"(g(\d+) \(g(\d+)\^p\))"))) {
    int j = std::stoi(m[1]) - 1, i = std::stoi(m[2]) - 1;
    if (i == j) return {P(unit(i, 1), R.power[i]), P(R.power[i], unit(i, 1))};
    return {P(unit(j, 1), R.power[i]), P(P(unit(j, 1), unit(i, 1)), unit(i, R.p - 1))};
  }
  FAIL("unrecognized overlap " << overlap);
  return {};
}

}  // namespace

TEST_CASE("a perturbed structure constant fails consistency, confirmed by the naive rewriter") {
  auto host = find_entry("7^5-exotic-host").pres;
  // [g4, g2] picks up an extra g5
  PcPresentation bad = host;
  Elem c = bad.comm_rel(3, 1);
  c[4] = static_cast<uint8_t>((c[4] + 1) % 7);
  bad.set_comm(3, 1, c);
  bad.validate_structure();
  auto fails = bad.consistency_check();
  REQUIRE(!fails.empty());
  CHECK(!bad.consistent());
  auto R = oracle::rules_of(bad);
  oracle::Table shape;
  shape.p = 7;
  shape.n = 5;
  for (const auto& f : fails) {
    CAPTURE(f.overlap);
    auto [l, r] = naive_overlap(R, f.overlap);
    CHECK(l != r);
  }
  // every overlap the engine accepts also agrees under naive rewriting
  auto good = oracle::rules_of(host);
  for (int k = 0; k < 5; ++k)
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < j; ++i) {
        std::ostringstream s;
        s << "(g" << k + 1 << " g" << j + 1 << ") g" << i + 1;
        auto [l, r] = naive_overlap(good, s.str());
        CHECK(l == r);
      }
}

#pragma once

#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "pearlforge/catalog.hpp"
#include "pearlforge/subgroups.hpp"

// Catalog shipped with the sources, loaded without the (slow) re-verification.
inline const std::vector<pf::CatalogEntry>& test_catalog() {
  static const std::vector<pf::CatalogEntry> c = pf::load_catalog(PEARLFORGE_TEST_CATALOG, false);
  return c;
}

inline const pf::CatalogEntry& find_entry(const std::string& label) {
  for (const auto& e : test_catalog())
    if (e.label == label) return e;
  throw std::runtime_error("no catalog entry " + label);
}

inline pf::Elem random_elem(const pf::PcPresentation& G, std::mt19937_64& rng) {
  pf::Elem e{};
  std::uniform_int_distribution<int> d(0, G.p() - 1);
  for (int i = 0; i < G.n(); ++i) e[i] = static_cast<uint8_t>(d(rng));
  return e;
}

inline oracle::Set as_set(const oracle::Table& T, const pf::PcPresentation& G, const pf::Subgroup& H) {
  oracle::Set s;
  for (const auto& e : pf::elements(G, H)) s.push_back(T.encode(e));
  std::sort(s.begin(), s.end());
  return s;
}

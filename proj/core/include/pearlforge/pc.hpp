#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pearlforge/errors.hpp"

namespace pf {

constexpr int kMaxGens = 16;

// Exponent vector in normal form; only the first n entries are meaningful,
// the rest stay zero so whole-array comparison and hashing work.
using Elem = std::array<uint8_t, kMaxGens>;

struct ElemHash {
  size_t operator()(const Elem& e) const noexcept {
    return std::hash<std::string_view>{}(
        std::string_view(reinterpret_cast<const char*>(e.data()), e.size()));
  }
};

inline bool is_identity(const Elem& e) {
  for (uint8_t v : e)
    if (v) return false;
  return true;
}

// Unreduced word: (0-based generator index, integer exponent) pairs.
struct Letter {
  int gen;
  long long exp;
};
using Word = std::vector<Letter>;

struct ConsistencyFailure {
  std::string overlap;  // e.g. "(g4 g3) g1", 1-based
  Elem lhs{};
  Elem rhs{};
};

class PcPresentation {
 public:
  PcPresentation() = default;
  PcPresentation(int p, int n, std::vector<int> weights);

  int p() const { return p_; }
  int n() const { return n_; }
  int weight(int i) const { return weights_[i]; }
  const std::vector<int>& weights() const { return weights_; }
  const Elem& power(int i) const { return powers_[i]; }
  // [g_j, g_i] for j > i (0-based).
  const Elem& comm_rel(int j, int i) const { return comms_[j * n_ + i]; }

  // Mutators drop the consistency flag.
  void set_power(int i, const Elem& rhs);
  void set_comm(int j, int i, const Elem& rhs);

  bool consistent() const { return consistent_; }

  // Throws MalformedPresentation on support or range violations.
  void validate_structure() const;
  // Runs every overlap test. Empty result means pass and sets the flag.
  std::vector<ConsistencyFailure> consistency_check();

  // Same overlap list without touching the flag; used by family search on
  // candidate presentations.
  std::vector<ConsistencyFailure> overlap_defects() const;

  Elem identity() const { return Elem{}; }
  Elem gen(int i) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  Elem pow(const Elem& a, long long k) const;
  Elem comm(const Elem& a, const Elem& b) const;  // a^-1 b^-1 a b
  Elem conj(const Elem& a, const Elem& b) const;  // b^-1 a b
  Elem collect(const Word& w) const;
  uint64_t order(const Elem& a) const;
  int depth(const Elem& a) const;  // first nonzero index, n() for identity
  uint64_t group_order() const;
  Elem normalize(const std::vector<long long>& raw) const;

  // Arithmetic without the consistency gate. Only for the checker and for
  // search code that validates its own results afterwards.
  Elem mul_unchecked(const Elem& a, const Elem& b) const;

  bool same_relations(const PcPresentation& o) const;

 private:
  struct Tables;
  void require_consistent() const;
  void build_tables() const;
  const Tables& tables() const;

  int p_ = 0;
  int n_ = 0;
  std::vector<int> weights_;
  std::vector<Elem> powers_;
  std::vector<Elem> comms_;
  bool consistent_ = false;
  mutable std::shared_ptr<const Tables> tab_;
};

std::string elem_to_string(const PcPresentation& G, const Elem& e);

}  // namespace pf

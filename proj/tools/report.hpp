#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pearlforge/pc.hpp"
#include "pearlforge/subgroups.hpp"

namespace pf::cli {

enum ExitCode { kPass = 0, kInputError = 1, kFalsified = 2, kBudget = 3 };

struct Verdict {
  std::string name;
  bool pass = true;
  std::string reason;  // reason code or measured value
  std::string ref;     // the claim being checked
};

struct Report {
  std::string command;
  std::string group_label;
  std::string group_hash;
  nlohmann::json results = nlohmann::json::object();
  std::vector<Verdict> verdicts;
  // set when the command stopped on an exception
  std::optional<int> error_code;
  std::string error_kind, error_message;
  double seconds = 0;
  uint64_t budget_used = 0;

  void check(const std::string& name, bool pass, const std::string& reason, const std::string& ref);
  int exit_code() const;
  // verdict section only; stable across runs for fixed inputs
  nlohmann::json verdict_json() const;
  std::string render(const std::string& format) const;
};

struct Options {
  std::optional<uint64_t> budget;
  int threads = 1;
  int lambda = 0;
  std::string emit_dir;
  std::string format = "text";
  std::string pearl_kind;  // "", "a" or "e"
  std::string catalog;     // empty: catalog_dir()
};

std::string group_hash(const PcPresentation& G);
nlohmann::json subgroup_json(const PcPresentation& G, const Subgroup& H);

}  // namespace pf::cli

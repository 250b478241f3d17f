#include "report.hpp"

#include <cstdio>
#include <sstream>

#include "pearlforge/pc_io.hpp"

namespace pf::cli {

void Report::check(const std::string& name, bool pass, const std::string& reason, const std::string& ref) {
  verdicts.push_back({name, pass, reason, ref});
}

int Report::exit_code() const {
  if (error_code) return *error_code;
  for (const auto& v : verdicts)
    if (!v.pass) return kFalsified;
  return kPass;
}

nlohmann::json Report::verdict_json() const {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& v : verdicts)
    a.push_back({{"name", v.name}, {"pass", v.pass}, {"reason", v.reason}, {"ref", v.ref}});
  return a;
}

namespace {

void text_of(std::ostringstream& os, const nlohmann::json& j, int indent) {
  std::string pad(indent, ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_structured()) {
        os << pad << it.key() << ":\n";
        text_of(os, *it, indent + 2);
      } else {
        os << pad << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    bool flat = true;
    for (const auto& x : j) flat = flat && !x.is_structured();
    if (flat) {
      os << pad << j.dump() << "\n";
      return;
    }
    for (const auto& x : j) {
      os << pad << "-\n";
      text_of(os, x, indent + 2);
    }
  } else {
    os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

std::string Report::render(const std::string& format) const {
  if (format == "structured" || format == "json") {
    nlohmann::json j;
    j["command"] = command;
    j["group"] = {{"label", group_label}, {"hash", group_hash}};
    j["results"] = results;
    j["verdicts"] = verdict_json();
    if (error_code) j["error"] = {{"kind", error_kind}, {"message", error_message}};
    j["exit_code"] = exit_code();
    j["timing_s"] = seconds;
    j["budget_used"] = budget_used;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "command: " << command << "\n";
  if (!group_label.empty() || !group_hash.empty()) os << "group: " << group_label << " [" << group_hash << "]\n";
  text_of(os, results, 0);
  for (const auto& v : verdicts) {
    os << (v.pass ? "PASS " : "FAIL ") << v.name;
    if (!v.reason.empty()) os << " (" << v.reason << ")";
    if (!v.pass && !v.ref.empty()) os << " -- claim: " << v.ref;
    os << "\n";
  }
  if (error_code) os << "error (" << error_kind << "): " << error_message << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", seconds);
  os << "exit " << exit_code() << ", " << buf << " s, budget used " << budget_used << "\n";
  return os.str();
}

std::string group_hash(const PcPresentation& G) {
  // FNV-1a over the canonical text form
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : format_presentation(G)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json subgroup_json(const PcPresentation& G, const Subgroup& H) {
  return {{"order", "p^" + std::to_string(H.size_exp())}, {"gens", subgroup_to_string(G, H)}};
}

}  // namespace pf::cli

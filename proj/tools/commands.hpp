#pragma once

#include <functional>
#include <string>

#include "report.hpp"

namespace pf::cli {

Report run_analyze(const std::string& path, const Options& opt);
Report run_verify_table(const Options& opt);
Report run_derive(const std::string& spec_path, const Options& opt);
Report run_aut(const std::string& path, const Options& opt);
Report run_towers(const std::string& path, const Options& opt);
Report run_certificate(const std::string& path, const Options& opt);

// Runs body, mapping exceptions onto the report's error fields and exit codes.
Report guarded(const std::string& command, const std::function<void(Report&)>& body);

}  // namespace pf::cli

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cap4/formulas.hpp"
#include "cap4/io.hpp"

namespace cap4 {

enum ExitCode { kOk = 0, kError = 1, kNotFound = 2 };

json analyze_report(const Instance& in);
json pfister_report(const DiscPfister& D);
json decision_report(const Decision& d);
json crosscheck_report(const Crosscheck& c);

// built-in instances covering the three capacity-4 cases and characteristic 2
std::vector<json> selftest_corpus();

// args exclude the program name; the report goes to out as JSON
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cap4

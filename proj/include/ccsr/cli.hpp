#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ccsr {

// Runs one command line (without the program name). Exit codes: 0 valid /
// true / sat / ok, 1 invalid / false / unsat / rejected, 2 error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccsr

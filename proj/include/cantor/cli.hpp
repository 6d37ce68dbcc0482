#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cantor::cli {

// Dispatches one invocation. Exit status: 0 = success / all audits pass,
// 1 = audit violations found, 2 = usage or parse error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cantor::cli

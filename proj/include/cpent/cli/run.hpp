// run.hpp — CLI entry point

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpent::cli {

enum ExitCode : int { success = 0, config_error = 1, numerical_failure = 2 };

// Worker count from CP_ENTANGLE_THREADS (positive integer), else the
// hardware concurrency. Throws ConfigError on a malformed value.
unsigned thread_count();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// argv without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cpent::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xyep::cli {

enum ExitCode { Ok = 0, AssertionFailed = 1, ConfigError = 2, SingularParameter = 3, ContinuationAmbiguous = 4 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// XYEP_THREADS if set and positive, otherwise hardware concurrency.
int thread_count();

}  // namespace xyep::cli

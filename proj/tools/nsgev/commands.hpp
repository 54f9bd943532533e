#pragma once

#include <string>
#include <vector>

namespace nsgev::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

/// Parse key=value lines ('#' comments, blank lines ignored) into
/// --key=value arguments; keys already given in `cli_args` are dropped so
/// flags override the file.
std::vector<std::string> config_arguments(const std::string& text, const std::vector<std::string>& cli_args);

}  // namespace nsgev::cli

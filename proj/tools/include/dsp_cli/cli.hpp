#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsp::cli {

/// Directory holding the shipped maze, rule bundle and HC parameters.
/// DSP_DATA_DIR in the environment overrides the compiled-in location.
[[nodiscard]] std::string data_dir();

/// Runs the command line (without the program name). Returns the exit
/// code: 0 on success, 2 on a usage error, 1 on any other failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dsp::cli

#pragma once

#include <string>
#include <vector>

namespace focklab::cli {

/// Dispatch a command line. Subcommands: lp, cover, carleson, tg-check,
/// schatten, shift, density, weight-info. Reports are JSON (plus CSV side
/// files where a subcommand emits tabular data); identical invocations
/// produce byte-identical reports.
///
/// Exit codes: 0 success, 1 domain error (error name on stderr), 2 usage.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

extern const char* const kVersion;

} // namespace focklab::cli

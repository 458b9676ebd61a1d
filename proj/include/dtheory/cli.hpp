#pragma once

#include <iosfwd>
#include <vector>

#include "dtheory/corpus.hpp"

namespace dtheory::cli {

enum ExitCode : int {
  kOk = 0,
  kGoldenMismatch = 1,
  kUsage = 2,
  kInvalidModel = 3,
  kTheoryError = 4,
};

enum class Format { Table, Json };

/// Entry point for the `dtheory` binary; returns the process exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Verifies the given suites and prints the report. Returns kOk or kGoldenMismatch.
int golden(const std::vector<DilemmaSuite>& suites, Format format, std::ostream& out);

/// Exit code for an engine error.
int exit_code(const Error& error);

}  // namespace dtheory::cli

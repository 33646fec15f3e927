#pragma once

namespace rdlwe::cli {

/// Entry point for the command-line tool; returns the process exit code.
/// Exit codes: 0 success, 1 verification/property failure, 2 modulus too
/// small, 3 config or format error.
int dispatch(int argc, const char* const* argv);

} // namespace rdlwe::cli

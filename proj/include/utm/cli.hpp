#pragma once

#include <iosfwd>

namespace utm::cli {

/// Dispatch the utm command line. Exit codes: 0 success (verdicts like
/// IllPosed are results, not errors), 1 failed verification findings,
/// 2 operational errors (I/O, parse, unsupported requests).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace utm::cli

#pragma once

// Command-line frontend: one subcommand per library operation, a shared
// --format text|json|csv switch, and a sequence registry resolved from
// --registry or the SPARSE_ARITH_REGISTRY environment variable.

#include <ostream>
#include <string>
#include <vector>

namespace sparse_arith {

// Runs one subcommand from argv-style arguments (program name excluded),
// writing results to out and diagnostics to err. Returns 0 on success,
// 1 when the computation reports a domain error, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace sparse_arith

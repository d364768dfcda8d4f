#ifndef LBOUND_CLI_HPP
#define LBOUND_CLI_HPP

#include <iosfwd>

namespace lbound::cli {

// Entry point behind the `lbound` binary.  Returns the process exit code:
// 0 on success, 2 on argument/validation/config errors (the message on err
// names the offending option), 1 on computation failures.  Data goes to
// `out` (JSON for point queries, CSV for curves and samples), diagnostics
// to `err`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace lbound::cli

#endif  // LBOUND_CLI_HPP

#ifndef SHAPESEL_CLI_HPP
#define SHAPESEL_CLI_HPP

#include <iosfwd>

namespace shapesel {

/// Entry point of the `shapesel` tool. Returns 0 on success, 1 on data
/// errors (a single JSON line on `err`), 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace shapesel

#endif

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyparr {

/// Batch driver behind the command-line tool. Emits one JSON report on
/// `out` and returns the process exit code: 0 success, 1 domain errors
/// (invalid sheaf, non-polarization, acyclicity), 2 I/O or format errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out);

}  // namespace hyparr

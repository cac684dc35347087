#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moulton {

/// Entry point of the moulton_stab tool. args excludes the program name.
/// Returns 0 on success, 2 on usage or input errors, 1 on computational errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace moulton

#pragma once

#include <string>

namespace qlc {

// Entry point behind the qlc binary. Subcommands: verify, simulate, sweep-L, export.
// Exit codes: 0 success, 1 check or simulation failure, 2 config/usage error,
// 3 verify filter matched no checks.
int cli_main(int argc, char** argv);

// '*' and '?' glob used by verify --filter.
bool glob_match(const std::string& pattern, const std::string& text);

}  // namespace qlc

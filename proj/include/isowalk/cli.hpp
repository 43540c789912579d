#pragma once

namespace isowalk {

// Parses argv, dispatches to a subcommand, persists outputs.
// Exit codes: 0 success, 1 config/usage error, 2 runtime error,
// 3 assertion-style check failure.
int run_cli(int argc, const char* const* argv);

}  // namespace isowalk

#pragma once

namespace pcmrbm {

// Parses argv and dispatches to the experiment drivers.
// Exit codes: 0 success, 1 runtime failure, 2 bad arguments or config.
int run_cli(int argc, const char* const* argv);

} // namespace pcmrbm

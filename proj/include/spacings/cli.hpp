#pragma once

namespace spacings {

// Entry point for the spacings_lab tool. Exit codes: 0 success,
// 1 configuration error, 2 runtime error.
int cli_main(int argc, const char* const* argv);

}  // namespace spacings

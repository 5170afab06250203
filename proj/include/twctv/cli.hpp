#ifndef TWCTV_CLI_HPP
#define TWCTV_CLI_HPP

namespace twctv {

// Batch entry point. Exit codes: 0 success, 2 bad arguments, 3 IO failure,
// 4 numeric divergence, 5 solver hit the iteration cap without converging
// (outputs are still written).
int cli_main(int argc, const char* const* argv);

extern const char* kToolVersion;

}  // namespace twctv

#endif

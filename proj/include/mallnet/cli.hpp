// Command-line driver. Subcommands:
//
//   check-proof [FILE]                      verify a proof, print conclusion
//   translate --to KIND [PROOF] [-o OUT]    proof -> conflict|circuit|slices
//   check-net [FILE]                        full correctness check, any kind
//   sequentialize [FILE] [-o PROOF]         net -> proof
//   erase [FILE] [--trace[=json]] [--all-orders]
//   cotree [FILE]                           link-space cotree (conflict nets)
//   gen --seed N --rules K [-o PROOF]       deterministic random proof
//
// FILE defaults to standard input ("-" likewise); -o defaults to standard
// output. Exit codes: 0 accepted, 1 rejected (valid input, negative
// verdict), 2 malformed input or internal failure. Verdicts go to standard
// output, diagnostics to standard error. The environment variable
// MALLNET_STEP_LIMIT overrides the erasure step budget.
#pragma once

namespace mall {

int run_cli(int argc, const char* const* argv);

}  // namespace mall

#pragma once

namespace epdt {

/* Command-line front end. Subcommands:
 *   exponents   critical-exponent and hypothesis report for a parameter set
 *   hyp-verify  residual scans for the self-similar test functions
 *   simulate    radial solve, written as a run directory
 *   ode-blowup  comparison-ODE integration / lifespan scaling
 *   sweep       lifespan-vs-amplitude sweep (ODE surrogate or PDE)
 *   functionals blow-up functionals over an existing run directory
 * Exit codes: 0 success, 2 configuration error, 3 numerical failure.
 */
int cli_dispatch(int argc, char** argv);

} // namespace epdt

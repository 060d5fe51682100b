#pragma once

#include <ostream>

namespace qphase {

/// Built-in regression suite over the printed reference values (operator
/// axioms, the qubit transpose counterexample, the R projector trace, the
/// N = 5 ring rates and figure state). Prints one line per check; returns
/// true when everything passes.
bool run_selftest(std::ostream& out);

}  // namespace qphase

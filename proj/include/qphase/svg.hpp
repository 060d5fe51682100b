#pragma once

#include "qphase/dynamics.hpp"
#include "qphase/wigner.hpp"

#include <string>

namespace qphase {

/// SVG quiver picture of a rate matrix over a Wigner function: one dot per
/// phase point (radius scaled by |W|, fill sign-coded) and one arrow per
/// transition out of a nonzero-W point (width scaled by |r|, solid for
/// positive rates, dashed for negative; rates below 2% of the maximum are
/// dropped). a1 runs horizontally, a2 vertically upward.
std::string render_rate_quiver(const RateMatrix& rates, const WignerFunction& w);

}  // namespace qphase

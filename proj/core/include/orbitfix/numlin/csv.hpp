#pragma once

#include "orbitfix/numlin/eigenvalues.hpp"

#include <iosfwd>
#include <string>

namespace orbitfix {

/// %.17g: round-trips every double, byte-stable across runs.
std::string format_g17(double v);

/// `index,re,im`, 1-based index in the report's (descending modulus) order.
void write_spectrum_csv(std::ostream& os, const SpectrumReport& report);

}  // namespace orbitfix

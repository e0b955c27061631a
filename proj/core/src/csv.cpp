#include "orbitfix/numlin/csv.hpp"

#include <cstdio>
#include <ostream>

namespace orbitfix {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_spectrum_csv(std::ostream& os, const SpectrumReport& report) {
  os << "index,re,im\n";
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    os << i + 1 << ',' << format_g17(report.eigenvalues[i].real()) << ',' << format_g17(report.eigenvalues[i].imag())
       << '\n';
  }
}

}  // namespace orbitfix

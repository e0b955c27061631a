#include "orbitfix/solvers/trace.hpp"

#include <ostream>
#include <sstream>

namespace orbitfix {

namespace {
std::string field(const std::optional<double>& v) { return v ? format_g17(*v) : std::string(); }
}  // namespace

void IterationTrace::write_csv(std::ostream& os) const {
  os << "n,residual,ref_error,stab_factor,step_norm\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_g17(r.residual) << ',' << field(r.ref_error) << ',' << field(r.stab_factor) << ','
       << field(r.step_norm) << '\n';
  }
}

std::string IterationTrace::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

std::vector<double> convergence_ratios(const IterationTrace& trace) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < trace.rows.size(); ++i) {
    const auto& a = trace.rows[i].ref_error;
    const auto& b = trace.rows[i + 1].ref_error;
    if (!a || !b || *a == 0.0) break;
    out.push_back(*b / *a);
  }
  return out;
}

}  // namespace orbitfix

#pragma once

#include "orbitfix/numlin/csv.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace orbitfix {

struct TraceRow {
  int n = 0;
  double residual = 0.0;
  std::optional<double> ref_error;
  std::optional<double> stab_factor;
  std::optional<double> step_norm;
};

struct IterationTrace {
  std::vector<TraceRow> rows;

  bool empty() const { return rows.empty(); }
  std::size_t size() const { return rows.size(); }
  const TraceRow& back() const { return rows.back(); }

  /// `n,residual,ref_error,stab_factor,step_norm`, %.17g, empty fields for absent values.
  void write_csv(std::ostream& os) const;
  std::string to_csv() const;
};

/// E_{n+1}/E_n over consecutive rows; stops at the first missing or zero E_n.
std::vector<double> convergence_ratios(const IterationTrace& trace);

}  // namespace orbitfix

#pragma once

#include <vector>

namespace aci {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Minimize c.x subject to A x = b, x >= 0 (dense two-phase simplex with
// Bland's rule). Sized for the small problems in this project: tens of rows,
// a few hundred columns.
LPResult solve_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                  const std::vector<double>& c);

}  // namespace aci

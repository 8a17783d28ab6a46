#include "aci/lp.hpp"

#include <cmath>
#include <cstddef>

namespace aci {

namespace {

constexpr double kEps = 1e-11;

// Tableau with an objective row at index m; basis tracked per row.
struct Tableau {
  size_t m, n;  // constraint rows, structural+artificial columns
  std::vector<std::vector<double>> t;
  std::vector<size_t> basis;

  double& at(size_t r, size_t c) { return t[r][c]; }

  void pivot(size_t pr, size_t pc) {
    const double piv = t[pr][pc];
    for (size_t c = 0; c <= n; ++c) t[pr][c] /= piv;
    for (size_t r = 0; r <= m; ++r) {
      if (r == pr) continue;
      const double f = t[r][pc];
      if (std::abs(f) < kEps) continue;
      for (size_t c = 0; c <= n; ++c) t[r][c] -= f * t[pr][c];
    }
    basis[pr] = pc;
  }

  // Returns false when optimal, true after one pivot; Bland's rule.
  bool step() {
    size_t pc = n;
    for (size_t c = 0; c < n; ++c) {
      if (t[m][c] < -kEps) {
        pc = c;
        break;
      }
    }
    if (pc == n) return false;
    size_t pr = m;
    double best_ratio = 0.0;
    for (size_t r = 0; r < m; ++r) {
      if (t[r][pc] > kEps) {
        const double ratio = t[r][n] / t[r][pc];
        if (pr == m || ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps && basis[r] < basis[pr])) {
          pr = r;
          best_ratio = ratio;
        }
      }
    }
    if (pr == m) return false;  // unbounded; caller inspects reduced costs
    pivot(pr, pc);
    return true;
  }
};

}  // namespace

LPResult solve_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                  const std::vector<double>& c) {
  const size_t m = A.size();
  const size_t n = c.size();
  LPResult res;

  Tableau tab;
  tab.m = m;
  tab.n = n + m;  // structural + artificial
  tab.t.assign(m + 1, std::vector<double>(tab.n + 1, 0.0));
  tab.basis.resize(m);
  for (size_t r = 0; r < m; ++r) {
    const double sign = b[r] < 0.0 ? -1.0 : 1.0;
    for (size_t cc = 0; cc < n; ++cc) tab.t[r][cc] = sign * A[r][cc];
    tab.t[r][n + r] = 1.0;
    tab.t[r][tab.n] = sign * b[r];
    tab.basis[r] = n + r;
  }
  // Phase 1: minimize sum of artificials.
  for (size_t cc = 0; cc < n; ++cc) {
    double s = 0.0;
    for (size_t r = 0; r < m; ++r) s += tab.t[r][cc];
    tab.t[m][cc] = -s;
  }
  {
    double s = 0.0;
    for (size_t r = 0; r < m; ++r) s += tab.t[r][tab.n];
    tab.t[m][tab.n] = -s;
  }
  for (int guard = 0; guard < 20000 && tab.step(); ++guard) {
  }
  if (tab.t[m][tab.n] < -1e-7) {
    res.status = LPStatus::Infeasible;
    return res;
  }
  // Drive remaining artificials out of the basis where possible.
  for (size_t r = 0; r < m; ++r) {
    if (tab.basis[r] >= n) {
      for (size_t cc = 0; cc < n; ++cc) {
        if (std::abs(tab.t[r][cc]) > 1e-8) {
          tab.pivot(r, cc);
          break;
        }
      }
    }
  }

  // Phase 2 objective over structural columns only; artificials pinned.
  for (size_t cc = 0; cc <= tab.n; ++cc) tab.t[m][cc] = 0.0;
  for (size_t cc = 0; cc < n; ++cc) tab.t[m][cc] = c[cc];
  for (size_t cc = n; cc < tab.n; ++cc) tab.t[m][cc] = 1e9;  // keep artificials out
  for (size_t r = 0; r < m; ++r) {
    const double f = tab.t[m][tab.basis[r]];
    if (std::abs(f) > 0.0) {
      for (size_t cc = 0; cc <= tab.n; ++cc) tab.t[m][cc] -= f * tab.t[r][cc];
    }
  }
  int guard = 0;
  for (; guard < 20000 && tab.step(); ++guard) {
  }
  // Detect unboundedness: a negative reduced cost with no positive column.
  for (size_t cc = 0; cc < n; ++cc) {
    if (tab.t[m][cc] < -1e-7) {
      bool has_positive = false;
      for (size_t r = 0; r < m; ++r) {
        if (tab.t[r][cc] > kEps) has_positive = true;
      }
      if (!has_positive) {
        res.status = LPStatus::Unbounded;
        return res;
      }
    }
  }

  res.status = LPStatus::Optimal;
  res.x.assign(n, 0.0);
  for (size_t r = 0; r < m; ++r) {
    if (tab.basis[r] < n) res.x[tab.basis[r]] = tab.t[r][tab.n];
  }
  res.objective = 0.0;
  for (size_t cc = 0; cc < n; ++cc) res.objective += c[cc] * res.x[cc];
  return res;
}

}  // namespace aci

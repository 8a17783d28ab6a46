#pragma once

#include <span>
#include <vector>

#include "aci/aux_channel.hpp"
#include "aci/joint_pmf.hpp"

namespace aci {

// Non-negative weights over (r1, r2, z), normalized to sum 1.
struct ScalarWeights {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;

  static ScalarWeights make(double a, double b, double c);

  double dot(const KTriple& t) const { return l1 * t.r1 + l2 * t.r2 + l3 * t.z; }
};

// Flattened support-cell view of a pmf plus the entropy constants that the
// weighted objective needs. Shared by the optimizer and the oracles.
struct CellProblem {
  std::vector<int> cx, cy;       // cell coordinates
  std::vector<double> cp;        // cell masses
  int nx = 0, ny = 0;
  int n_cells = 0;
  double h_x = 0.0, h_y = 0.0, h_xy = 0.0;

  static CellProblem from(const JointPMF& pmf);
};

// Exact triple (and I(XY;Q)) for channel rows over the problem's cells.
// rows is row-major n_cells x q.
KTripleInfo eval_triple(const CellProblem& prob, std::span<const double> rows, int q);

// Scratch buffers reused across objective evaluations.
struct ObjectiveWorkspace {
  std::vector<double> rxq, ryq, rq, lxq, lyq, lq;
};

// Weighted objective l1*r1 + l2*r2 + l3*z as a function of the channel rows;
// optionally fills the gradient with respect to each row entry.
double eval_objective(const CellProblem& prob, const ScalarWeights& w,
                      std::span<const double> rows, int q,
                      std::vector<double>* grad_rows = nullptr,
                      ObjectiveWorkspace* ws = nullptr);

double scalarized_value(const JointPMF& pmf, const AuxChannel& ch, const ScalarWeights& w);

}  // namespace aci

#include "aci/scalarize.hpp"

#include <cmath>

#include "aci/infomath.hpp"

namespace aci {

ScalarWeights ScalarWeights::make(double a, double b, double c) {
  if (a < 0.0 || b < 0.0 || c < 0.0) fail(ErrorCode::ParamOutOfRange, "weights must be >= 0");
  const double s = a + b + c;
  if (s <= 0.0) fail(ErrorCode::ParamOutOfRange, "weights must not all be zero");
  ScalarWeights w;
  w.l1 = a / s;
  w.l2 = b / s;
  w.l3 = c / s;
  return w;
}

CellProblem CellProblem::from(const JointPMF& pmf) {
  CellProblem prob;
  prob.nx = pmf.nx();
  prob.ny = pmf.ny();
  for (const auto& [x, y] : pmf.support()) {
    prob.cx.push_back(x);
    prob.cy.push_back(y);
    prob.cp.push_back(pmf.p(x, y));
  }
  prob.n_cells = static_cast<int>(prob.cp.size());
  const InfoSummary s = info_summary(pmf);
  prob.h_x = s.H_X;
  prob.h_y = s.H_Y;
  prob.h_xy = s.H_XY;
  return prob;
}

KTripleInfo eval_triple(const CellProblem& prob, std::span<const double> rows, int q) {
  std::vector<double> rxq(static_cast<size_t>(prob.nx) * q, 0.0);
  std::vector<double> ryq(static_cast<size_t>(prob.ny) * q, 0.0);
  std::vector<double> rq(q, 0.0);
  double h_xyq = 0.0;
  for (int i = 0; i < prob.n_cells; ++i) {
    const double mass = prob.cp[i];
    const double* wrow = rows.data() + static_cast<size_t>(i) * q;
    for (int k = 0; k < q; ++k) {
      const double v = mass * wrow[k];
      h_xyq += phi(v);
      rxq[static_cast<size_t>(prob.cx[i]) * q + k] += v;
      ryq[static_cast<size_t>(prob.cy[i]) * q + k] += v;
      rq[k] += v;
    }
  }
  const double h_xq = entropy_bits(rxq);
  const double h_yq = entropy_bits(ryq);
  const double h_q = entropy_bits(rq);

  KTripleInfo out;
  out.triple.r1 = clamp_nonneg(h_xq + prob.h_xy - prob.h_x - h_xyq);
  out.triple.r2 = clamp_nonneg(h_yq + prob.h_xy - prob.h_y - h_xyq);
  out.triple.z = clamp_nonneg(h_xq + h_yq - h_q - h_xyq);
  out.i_xyq = clamp_nonneg(prob.h_xy + h_q - h_xyq);
  return out;
}

// In terms of the joint r(x,y,q) = p(x,y) w(q|x,y) and its marginals, the
// objective is
//   F = (l1+l3) H(XQ) + (l2+l3) H(YQ) - l3 H(Q) - H(XYQ) + const,
//   const = (l1+l2) H(XY) - l1 H(X) - l2 H(Y),
// so dF/dr(x,y,q) = log r(x,y,q) - (l1+l3) log r(x,q)
//                   - (l2+l3) log r(y,q) + l3 log r(q)
// (the log2(e) terms cancel because l1+l2+l3 = 1).
double eval_objective(const CellProblem& prob, const ScalarWeights& w,
                      std::span<const double> rows, int q, std::vector<double>* grad_rows,
                      ObjectiveWorkspace* ws) {
  const double a = w.l1 + w.l3;
  const double b = w.l2 + w.l3;

  ObjectiveWorkspace local;
  if (!ws) ws = &local;
  ws->rxq.assign(static_cast<size_t>(prob.nx) * q, 0.0);
  ws->ryq.assign(static_cast<size_t>(prob.ny) * q, 0.0);
  ws->rq.assign(q, 0.0);
  double h_xyq = 0.0;
  for (int i = 0; i < prob.n_cells; ++i) {
    const double mass = prob.cp[i];
    const double* wrow = rows.data() + static_cast<size_t>(i) * q;
    double* rx = ws->rxq.data() + static_cast<size_t>(prob.cx[i]) * q;
    double* ry = ws->ryq.data() + static_cast<size_t>(prob.cy[i]) * q;
    for (int k = 0; k < q; ++k) {
      const double v = mass * wrow[k];
      h_xyq += phi(v);
      rx[k] += v;
      ry[k] += v;
      ws->rq[k] += v;
    }
  }
  const double h_xq = entropy_bits(ws->rxq);
  const double h_yq = entropy_bits(ws->ryq);
  const double h_q = entropy_bits(ws->rq);
  const double constant = (w.l1 + w.l2) * prob.h_xy - w.l1 * prob.h_x - w.l2 * prob.h_y;
  const double value = a * h_xq + b * h_yq - w.l3 * h_q - h_xyq + constant;

  if (grad_rows) {
    // Marginal logs are shared across cells; cache them once per call.
    auto fill_logs = [](const std::vector<double>& src, std::vector<double>* dst) {
      dst->resize(src.size());
      for (size_t i = 0; i < src.size(); ++i) (*dst)[i] = safe_log2(src[i]);
    };
    fill_logs(ws->rxq, &ws->lxq);
    fill_logs(ws->ryq, &ws->lyq);
    fill_logs(ws->rq, &ws->lq);
    grad_rows->assign(rows.size(), 0.0);
    for (int i = 0; i < prob.n_cells; ++i) {
      const double mass = prob.cp[i];
      if (mass <= 0.0) continue;
      const double* wrow = rows.data() + static_cast<size_t>(i) * q;
      const double* lx = ws->lxq.data() + static_cast<size_t>(prob.cx[i]) * q;
      const double* ly = ws->lyq.data() + static_cast<size_t>(prob.cy[i]) * q;
      double* grow = grad_rows->data() + static_cast<size_t>(i) * q;
      for (int k = 0; k < q; ++k) {
        const double v = mass * wrow[k];
        if (v <= 0.0) {
          grow[k] = 0.0;  // zero-mass cells contribute nothing
          continue;
        }
        grow[k] = mass * (safe_log2(v) - a * lx[k] - b * ly[k] + w.l3 * ws->lq[k]);
      }
    }
  }
  return value;
}

double scalarized_value(const JointPMF& pmf, const AuxChannel& ch, const ScalarWeights& w) {
  if (ch.cells() != pmf.support()) {
    fail(ErrorCode::ShapeMismatch, "channel does not match pmf support");
  }
  const CellProblem prob = CellProblem::from(pmf);
  const KTripleInfo info = eval_triple(prob, ch.rows(), ch.q_size());
  return w.dot(info.triple);
}

}  // namespace aci

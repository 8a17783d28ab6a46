#include "aci/aux_channel.hpp"

#include <cmath>

#include "aci/infomath.hpp"

namespace aci {

AuxChannel AuxChannel::make(std::vector<std::pair<int, int>> cells, int q_size,
                            std::vector<double> rows, int alphabet_cap,
                            bool allow_large) {
  if (q_size < 1) fail(ErrorCode::ShapeMismatch, "q_size must be >= 1");
  if (!allow_large && q_size > alphabet_cap) {
    fail(ErrorCode::ShapeMismatch,
         "q_size " + std::to_string(q_size) + " exceeds cap " + std::to_string(alphabet_cap));
  }
  if (rows.size() != cells.size() * static_cast<size_t>(q_size)) {
    fail(ErrorCode::ShapeMismatch, "channel row storage does not match cells * q_size");
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    double s = 0.0;
    for (int q = 0; q < q_size; ++q) {
      const double v = rows[i * q_size + q];
      if (v < 0.0) fail(ErrorCode::NegativeMass, "negative channel entry");
      s += v;
    }
    if (std::abs(s - 1.0) > kRowTol) {
      fail(ErrorCode::RowNotNormalized, "channel row sums to " + std::to_string(s));
    }
  }
  AuxChannel ch;
  ch.q_size_ = q_size;
  ch.cells_ = std::move(cells);
  ch.rows_ = std::move(rows);
  return ch;
}

AuxChannel AuxChannel::from_cell_classes(const std::vector<std::pair<int, int>>& cells,
                                         const std::vector<int>& class_of_cell, int q_size) {
  if (class_of_cell.size() != cells.size()) {
    fail(ErrorCode::ShapeMismatch, "class list does not match cells");
  }
  std::vector<double> rows(cells.size() * static_cast<size_t>(q_size), 0.0);
  for (size_t i = 0; i < cells.size(); ++i) {
    if (class_of_cell[i] < 0 || class_of_cell[i] >= q_size) {
      fail(ErrorCode::ShapeMismatch, "cell class out of range");
    }
    rows[i * q_size + class_of_cell[i]] = 1.0;
  }
  AuxChannel ch;
  ch.q_size_ = q_size;
  ch.cells_ = cells;
  ch.rows_ = std::move(rows);
  return ch;
}

ThreeWayPMF extend(const JointPMF& pmf, const AuxChannel& ch) {
  if (ch.cells() != pmf.support()) {
    fail(ErrorCode::ShapeMismatch, "channel rows do not cover the pmf support cells");
  }
  const int q = ch.q_size();
  std::vector<double> probs(static_cast<size_t>(pmf.nx()) * pmf.ny() * q, 0.0);
  for (size_t i = 0; i < ch.cells().size(); ++i) {
    const auto [x, y] = ch.cells()[i];
    const double mass = pmf.p(x, y);
    for (int k = 0; k < q; ++k) {
      probs[(static_cast<size_t>(x) * pmf.ny() + y) * q + k] = mass * ch.w(static_cast<int>(i), k);
    }
  }
  return ThreeWayPMF(pmf, q, std::move(probs));
}

KTripleInfo k_triple(const ThreeWayPMF& three) {
  const JointPMF& base = three.base();
  const int nx = base.nx(), ny = base.ny(), nq = three.q_size();

  std::vector<double> rxq(static_cast<size_t>(nx) * nq, 0.0);
  std::vector<double> ryq(static_cast<size_t>(ny) * nq, 0.0);
  std::vector<double> rq(nq, 0.0);
  double h_xyq = 0.0;
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      for (int q = 0; q < nq; ++q) {
        const double v = three.p(x, y, q);
        h_xyq += phi(v);
        rxq[static_cast<size_t>(x) * nq + q] += v;
        ryq[static_cast<size_t>(y) * nq + q] += v;
        rq[q] += v;
      }
    }
  }
  const double h_xq = entropy_bits(rxq);
  const double h_yq = entropy_bits(ryq);
  const double h_q = entropy_bits(rq);
  const InfoSummary s = info_summary(base);

  KTripleInfo out;
  out.triple.r1 = clamp_nonneg(h_xq + s.H_XY - s.H_X - h_xyq);
  out.triple.r2 = clamp_nonneg(h_yq + s.H_XY - s.H_Y - h_xyq);
  out.triple.z = clamp_nonneg(h_xq + h_yq - h_q - h_xyq);
  out.i_xyq = clamp_nonneg(s.H_XY + h_q - h_xyq);
  return out;
}

}  // namespace aci

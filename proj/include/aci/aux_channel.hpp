#pragma once

#include <utility>
#include <vector>

#include "aci/joint_pmf.hpp"

namespace aci {

// One point (I(Q;Y|X), I(Q;X|Y), I(X;Y|Q)) in bits.
struct KTriple {
  double r1 = 0.0;
  double r2 = 0.0;
  double z = 0.0;

  double dot(double l1, double l2, double l3) const { return l1 * r1 + l2 * r2 + l3 * z; }
};

struct KTripleInfo {
  KTriple triple;
  double i_xyq = 0.0;  // I(X,Y;Q)
};

// Conditional distribution p(q|x,y), one row per support cell of a JointPMF,
// rows in the pmf's support order.
class AuxChannel {
 public:
  static constexpr double kRowTol = 1e-9;

  AuxChannel() = default;  // empty channel; q_size() == 0
  bool empty() const { return q_size_ == 0; }

  // Rows must each sum to 1 within kRowTol. q_size is capped at
  // |X||Y| + 2 unless allow_large is set.
  static AuxChannel make(std::vector<std::pair<int, int>> cells, int q_size,
                         std::vector<double> rows, int alphabet_cap,
                         bool allow_large = false);

  // Deterministic channel q = class(cell), one-hot rows.
  static AuxChannel from_cell_classes(const std::vector<std::pair<int, int>>& cells,
                                      const std::vector<int>& class_of_cell, int q_size);

  int q_size() const { return q_size_; }
  const std::vector<std::pair<int, int>>& cells() const { return cells_; }
  // Row-major: rows()[i * q_size() + q] = p(q | cell i).
  const std::vector<double>& rows() const { return rows_; }
  double w(int cell, int q) const { return rows_[static_cast<size_t>(cell) * q_size_ + q]; }

 private:
  int q_size_ = 0;
  std::vector<std::pair<int, int>> cells_;
  std::vector<double> rows_;
};

// Joint distribution of (X, Y, Q) with sums over q matching the base pmf.
class ThreeWayPMF {
 public:
  const JointPMF& base() const { return base_; }
  int q_size() const { return q_; }
  double p(int x, int y, int q) const {
    return probs_[(static_cast<size_t>(x) * base_.ny() + y) * q_ + q];
  }
  const std::vector<double>& flat() const { return probs_; }

  friend ThreeWayPMF extend(const JointPMF& pmf, const AuxChannel& ch);

 private:
  ThreeWayPMF(JointPMF base, int q, std::vector<double> probs)
      : base_(std::move(base)), q_(q), probs_(std::move(probs)) {}

  JointPMF base_;
  int q_;
  std::vector<double> probs_;
};

// probs[x][y][q] = pmf(x,y) * ch(q|x,y); channel rows must cover exactly the
// support cells of pmf.
ThreeWayPMF extend(const JointPMF& pmf, const AuxChannel& ch);

KTripleInfo k_triple(const ThreeWayPMF& three);

}  // namespace aci

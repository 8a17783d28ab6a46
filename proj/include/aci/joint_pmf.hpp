#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aci/errors.hpp"

namespace aci {

struct InfoSummary {
  double H_X = 0.0;
  double H_Y = 0.0;
  double H_XY = 0.0;
  double H_X_given_Y = 0.0;
  double H_Y_given_X = 0.0;
  double I_XY = 0.0;
};

// Finite joint distribution of a pair (X, Y). Immutable after construction;
// rows/columns of zero total mass are stripped, so conditionals are defined
// for every retained symbol.
class JointPMF {
 public:
  static constexpr double kSumTol = 1e-9;

  // Validates, strips zero-marginal symbols, keeps labels.
  static JointPMF make(std::vector<std::string> x_labels,
                       std::vector<std::string> y_labels,
                       const std::vector<std::vector<double>>& probs);

  // Convenience: default labels "x0,x1,.." / "y0,y1,..".
  static JointPMF make(const std::vector<std::vector<double>>& probs);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double p(int x, int y) const { return probs_[static_cast<size_t>(x) * ny_ + y]; }
  const std::vector<double>& flat() const { return probs_; }

  const std::vector<std::string>& x_labels() const { return x_labels_; }
  const std::vector<std::string>& y_labels() const { return y_labels_; }

  std::vector<double> marginal_x() const;
  std::vector<double> marginal_y() const;

  // Support cells in row-major order.
  const std::vector<std::pair<int, int>>& support() const { return support_; }

  bool operator==(const JointPMF& o) const = default;

 private:
  JointPMF() = default;

  int nx_ = 0, ny_ = 0;
  std::vector<std::string> x_labels_, y_labels_;
  std::vector<double> probs_;  // row-major nx*ny
  std::vector<std::pair<int, int>> support_;
};

InfoSummary info_summary(const JointPMF& pmf);

// JSON document {"x_labels": [..]?, "y_labels": [..]?, "pmf": [[..], ..]}.
JointPMF load_pmf(const std::string& json_text);
JointPMF load_pmf_file(const std::string& path);

// Emits the JSON schema above with 17 significant digits, so a round trip
// reproduces every double exactly.
std::string serialize_pmf(const JointPMF& pmf);

// Named families:
//   zsource(p):            2x2, p(0,0)=p(1,1)=p, p(1,0)=1-2p, p(0,1)=0
//   connected(delta):      4x4 two-block layout, within-block mass (1-d)/8,
//                          cross-block mass d/8
//   independent_uniform(n,m), identical_uniform(n)
JointPMF builtin(const std::string& name, const std::vector<double>& params);

// Product distribution on (X_a x X_b, Y_a x Y_b).
JointPMF tensor(const JointPMF& a, const JointPMF& b, int max_cells = 4096);

}  // namespace aci

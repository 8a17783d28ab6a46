#include "aci/joint_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aci/infomath.hpp"
#include "json.hpp"

namespace aci {

JointPMF JointPMF::make(std::vector<std::string> x_labels,
                        std::vector<std::string> y_labels,
                        const std::vector<std::vector<double>>& probs) {
  const size_t nx = probs.size();
  if (nx == 0) fail(ErrorCode::ShapeMismatch, "pmf has no rows");
  const size_t ny = probs[0].size();
  if (ny == 0) fail(ErrorCode::ShapeMismatch, "pmf has no columns");
  for (const auto& row : probs) {
    if (row.size() != ny) fail(ErrorCode::ShapeMismatch, "ragged pmf rows");
  }
  if (x_labels.size() != nx || y_labels.size() != ny) {
    fail(ErrorCode::ShapeMismatch, "label count does not match pmf shape");
  }

  double sum = 0.0;
  for (const auto& row : probs) {
    for (double v : row) {
      if (v < 0.0) fail(ErrorCode::NegativeMass, "negative probability entry");
      sum += v;
    }
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    fail(ErrorCode::SumNotOne, "pmf sums to " + std::to_string(sum));
  }

  std::vector<double> row_mass(nx, 0.0), col_mass(ny, 0.0);
  for (size_t i = 0; i < nx; ++i) {
    for (size_t j = 0; j < ny; ++j) {
      row_mass[i] += probs[i][j];
      col_mass[j] += probs[i][j];
    }
  }
  std::vector<int> keep_x, keep_y;
  for (size_t i = 0; i < nx; ++i)
    if (row_mass[i] > 0.0) keep_x.push_back(static_cast<int>(i));
  for (size_t j = 0; j < ny; ++j)
    if (col_mass[j] > 0.0) keep_y.push_back(static_cast<int>(j));

  JointPMF out;
  out.nx_ = static_cast<int>(keep_x.size());
  out.ny_ = static_cast<int>(keep_y.size());
  out.probs_.resize(static_cast<size_t>(out.nx_) * out.ny_);
  for (int i = 0; i < out.nx_; ++i) {
    out.x_labels_.push_back(x_labels[keep_x[i]]);
    for (int j = 0; j < out.ny_; ++j) {
      out.probs_[static_cast<size_t>(i) * out.ny_ + j] = probs[keep_x[i]][keep_y[j]];
    }
  }
  for (int j = 0; j < out.ny_; ++j) out.y_labels_.push_back(y_labels[keep_y[j]]);
  for (int i = 0; i < out.nx_; ++i)
    for (int j = 0; j < out.ny_; ++j)
      if (out.p(i, j) > 0.0) out.support_.push_back({i, j});
  return out;
}

JointPMF JointPMF::make(const std::vector<std::vector<double>>& probs) {
  std::vector<std::string> xl, yl;
  for (size_t i = 0; i < probs.size(); ++i) xl.push_back("x" + std::to_string(i));
  const size_t ny = probs.empty() ? 0 : probs[0].size();
  for (size_t j = 0; j < ny; ++j) yl.push_back("y" + std::to_string(j));
  return make(std::move(xl), std::move(yl), probs);
}

std::vector<double> JointPMF::marginal_x() const {
  std::vector<double> m(nx_, 0.0);
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j) m[i] += p(i, j);
  return m;
}

std::vector<double> JointPMF::marginal_y() const {
  std::vector<double> m(ny_, 0.0);
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j) m[j] += p(i, j);
  return m;
}

InfoSummary info_summary(const JointPMF& pmf) {
  InfoSummary s;
  s.H_XY = entropy_bits(pmf.flat());
  const auto mx = pmf.marginal_x();
  const auto my = pmf.marginal_y();
  s.H_X = entropy_bits(mx);
  s.H_Y = entropy_bits(my);
  s.H_X_given_Y = clamp_nonneg(s.H_XY - s.H_Y);
  s.H_Y_given_X = clamp_nonneg(s.H_XY - s.H_X);
  s.I_XY = clamp_nonneg(s.H_X + s.H_Y - s.H_XY);
  return s;
}

JointPMF load_pmf(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BadInput, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("pmf") || !doc["pmf"].is_array()) {
    fail(ErrorCode::BadInput, "expected object with a \"pmf\" array");
  }
  std::vector<std::vector<double>> probs;
  for (const auto& row : doc["pmf"]) {
    if (!row.is_array()) fail(ErrorCode::ShapeMismatch, "pmf rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) fail(ErrorCode::BadInput, "pmf entries must be numbers");
      r.push_back(v.get<double>());
    }
    probs.push_back(std::move(r));
  }
  const size_t nx = probs.size();
  const size_t ny = probs.empty() ? 0 : probs[0].size();
  std::vector<std::string> xl, yl;
  if (doc.contains("x_labels")) {
    for (const auto& v : doc["x_labels"]) xl.push_back(v.get<std::string>());
  } else {
    for (size_t i = 0; i < nx; ++i) xl.push_back("x" + std::to_string(i));
  }
  if (doc.contains("y_labels")) {
    for (const auto& v : doc["y_labels"]) yl.push_back(v.get<std::string>());
  } else {
    for (size_t j = 0; j < ny; ++j) yl.push_back("y" + std::to_string(j));
  }
  return JointPMF::make(std::move(xl), std::move(yl), probs);
}

JointPMF load_pmf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::BadInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_pmf(ss.str());
}

static void append_double_17(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

std::string serialize_pmf(const JointPMF& pmf) {
  std::string out = "{\"x_labels\":[";
  for (int i = 0; i < pmf.nx(); ++i) {
    if (i) out += ',';
    out += '"';
    out += pmf.x_labels()[i];
    out += '"';
  }
  out += "],\"y_labels\":[";
  for (int j = 0; j < pmf.ny(); ++j) {
    if (j) out += ',';
    out += '"';
    out += pmf.y_labels()[j];
    out += '"';
  }
  out += "],\"pmf\":[";
  for (int i = 0; i < pmf.nx(); ++i) {
    if (i) out += ',';
    out += '[';
    for (int j = 0; j < pmf.ny(); ++j) {
      if (j) out += ',';
      append_double_17(out, pmf.p(i, j));
    }
    out += ']';
  }
  out += "]}";
  return out;
}

static bool is_integer_param(double v) {
  return std::abs(v - std::round(v)) < 1e-9 && v >= 0.5;
}

JointPMF builtin(const std::string& name, const std::vector<double>& params) {
  if (name == "zsource") {
    if (params.size() != 1) fail(ErrorCode::ParamOutOfRange, "zsource needs p");
    const double p = params[0];
    if (p < 0.0 || p > 0.5) fail(ErrorCode::ParamOutOfRange, "zsource needs 0 <= p <= 1/2");
    return JointPMF::make({"x0", "x1"}, {"y0", "y1"},
                          {{p, 0.0}, {1.0 - 2.0 * p, p}});
  }
  if (name == "connected") {
    if (params.size() != 1) fail(ErrorCode::ParamOutOfRange, "connected needs delta");
    const double d = params[0];
    if (d < 0.0 || d > 1.0) fail(ErrorCode::ParamOutOfRange, "connected needs 0 <= delta <= 1");
    std::vector<std::vector<double>> probs(4, std::vector<double>(4));
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        probs[x][y] = (x / 2 == y / 2) ? (1.0 - d) / 8.0 : d / 8.0;
    return JointPMF::make({"x0", "x1", "x2", "x3"}, {"y0", "y1", "y2", "y3"}, probs);
  }
  if (name == "independent_uniform") {
    if (params.size() != 2 || !is_integer_param(params[0]) || !is_integer_param(params[1])) {
      fail(ErrorCode::ParamOutOfRange, "independent_uniform needs integer n,m >= 1");
    }
    const int n = static_cast<int>(std::round(params[0]));
    const int m = static_cast<int>(std::round(params[1]));
    std::vector<std::vector<double>> probs(n, std::vector<double>(m, 1.0 / (n * m)));
    return JointPMF::make(probs);
  }
  if (name == "identical_uniform") {
    if (params.size() != 1 || !is_integer_param(params[0])) {
      fail(ErrorCode::ParamOutOfRange, "identical_uniform needs integer n >= 1");
    }
    const int n = static_cast<int>(std::round(params[0]));
    std::vector<std::vector<double>> probs(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) probs[i][i] = 1.0 / n;
    return JointPMF::make(probs);
  }
  fail(ErrorCode::UnknownName, "unknown builtin \"" + name + "\"");
}

JointPMF tensor(const JointPMF& a, const JointPMF& b, int max_cells) {
  const long cells = static_cast<long>(a.nx()) * b.nx() * a.ny() * b.ny();
  if (cells > max_cells) {
    fail(ErrorCode::SizeLimit, "tensor result has " + std::to_string(cells) +
                                   " cells, cap is " + std::to_string(max_cells));
  }
  std::vector<std::string> xl, yl;
  for (int i = 0; i < a.nx(); ++i)
    for (int k = 0; k < b.nx(); ++k) xl.push_back(a.x_labels()[i] + "." + b.x_labels()[k]);
  for (int j = 0; j < a.ny(); ++j)
    for (int l = 0; l < b.ny(); ++l) yl.push_back(a.y_labels()[j] + "." + b.y_labels()[l]);
  std::vector<std::vector<double>> probs(xl.size(), std::vector<double>(yl.size()));
  for (int i = 0; i < a.nx(); ++i)
    for (int k = 0; k < b.nx(); ++k)
      for (int j = 0; j < a.ny(); ++j)
        for (int l = 0; l < b.ny(); ++l)
          probs[i * b.nx() + k][j * b.ny() + l] = a.p(i, j) * b.p(k, l);
  return JointPMF::make(std::move(xl), std::move(yl), probs);
}

}  // namespace aci

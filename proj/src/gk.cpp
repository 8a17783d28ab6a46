#include "aci/gk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aci/infomath.hpp"

namespace aci {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

GKDecomposition gk_decompose(const JointPMF& pmf) {
  const int nx = pmf.nx(), ny = pmf.ny();
  UnionFind uf(nx + ny);
  for (const auto& [x, y] : pmf.support()) uf.unite(x, nx + y);

  // Renumber components by first appearance over x then y.
  std::vector<int> id_of_root(nx + ny, -1);
  int next_id = 0;
  auto id_for = [&](int node) {
    const int r = uf.find(node);
    if (id_of_root[r] < 0) id_of_root[r] = next_id++;
    return id_of_root[r];
  };

  GKDecomposition out;
  out.x_component.resize(nx);
  out.y_component.resize(ny);
  for (int x = 0; x < nx; ++x) out.x_component[x] = id_for(x);
  for (int y = 0; y < ny; ++y) out.y_component[y] = id_for(nx + y);

  out.component_probs.assign(next_id, 0.0);
  for (const auto& [x, y] : pmf.support()) {
    out.component_probs[out.x_component[x]] += pmf.p(x, y);
  }
  out.common_entropy = entropy_bits(out.component_probs);

  // residual = sum_c p_c * I(X;Y | component c)
  double residual = 0.0;
  for (int c = 0; c < next_id; ++c) {
    const double pc = out.component_probs[c];
    if (pc <= 0.0) continue;
    double h_xy = 0.0;
    std::vector<double> mx(nx, 0.0), my(ny, 0.0);
    for (const auto& [x, y] : pmf.support()) {
      if (out.x_component[x] != c) continue;
      const double v = pmf.p(x, y) / pc;
      h_xy += phi(v);
      mx[x] += v;
      my[y] += v;
    }
    residual += pc * clamp_nonneg(entropy_bits(mx) + entropy_bits(my) - h_xy);
  }
  out.residual_mi = residual;
  return out;
}

Partition dependent_part(const JointPMF& pmf, Side side, double tol) {
  const int n = side == Side::Y ? pmf.ny() : pmf.nx();
  const int m = side == Side::Y ? pmf.nx() : pmf.ny();

  // Conditional columns p(other | symbol), symbols in index order.
  std::vector<std::vector<double>> cols(n, std::vector<double>(m, 0.0));
  for (int k = 0; k < n; ++k) {
    double mass = 0.0;
    for (int o = 0; o < m; ++o) {
      const double v = side == Side::Y ? pmf.p(o, k) : pmf.p(k, o);
      cols[k][o] = v;
      mass += v;
    }
    for (int o = 0; o < m; ++o) cols[k][o] /= mass;
  }

  Partition part;
  part.class_of.assign(n, -1);
  std::vector<int> reps;
  for (int k = 0; k < n; ++k) {
    for (size_t c = 0; c < reps.size(); ++c) {
      double diff = 0.0;
      for (int o = 0; o < m; ++o) diff = std::max(diff, std::abs(cols[k][o] - cols[reps[c]][o]));
      if (diff <= tol) {
        part.class_of[k] = static_cast<int>(c);
        break;
      }
    }
    if (part.class_of[k] < 0) {
      part.class_of[k] = static_cast<int>(reps.size());
      reps.push_back(k);
    }
  }
  part.count = static_cast<int>(reps.size());
  return part;
}

static double conditional_entropy_of_partition(const JointPMF& pmf, const Partition& part,
                                               Side part_side) {
  // H(P | other side): joint of (other symbol, class).
  const int n_other = part_side == Side::Y ? pmf.nx() : pmf.ny();
  std::vector<double> joint(static_cast<size_t>(n_other) * part.count, 0.0);
  std::vector<double> other(n_other, 0.0);
  for (const auto& [x, y] : pmf.support()) {
    const int o = part_side == Side::Y ? x : y;
    const int c = part_side == Side::Y ? part.class_of[y] : part.class_of[x];
    joint[static_cast<size_t>(o) * part.count + c] += pmf.p(x, y);
    other[o] += pmf.p(x, y);
  }
  return clamp_nonneg(entropy_bits(joint) - entropy_bits(other));
}

double conditional_mi_given_partition(const JointPMF& pmf, const Partition& part, Side side) {
  double total = 0.0;
  for (int c = 0; c < part.count; ++c) {
    double pc = 0.0;
    std::vector<double> mx(pmf.nx(), 0.0), my(pmf.ny(), 0.0);
    double h_xy = 0.0;
    for (const auto& [x, y] : pmf.support()) {
      const int cc = side == Side::Y ? part.class_of[y] : part.class_of[x];
      if (cc != c) continue;
      pc += pmf.p(x, y);
    }
    if (pc <= 0.0) continue;
    for (const auto& [x, y] : pmf.support()) {
      const int cc = side == Side::Y ? part.class_of[y] : part.class_of[x];
      if (cc != c) continue;
      const double v = pmf.p(x, y) / pc;
      h_xy += phi(v);
      mx[x] += v;
      my[y] += v;
    }
    total += pc * clamp_nonneg(entropy_bits(mx) + entropy_bits(my) - h_xy);
  }
  return total;
}

WWMonotones ww_monotones(const JointPMF& pmf) {
  WWMonotones out;
  out.h_y_down_x = conditional_entropy_of_partition(pmf, dependent_part(pmf, Side::Y), Side::Y);
  out.h_x_down_y = conditional_entropy_of_partition(pmf, dependent_part(pmf, Side::X), Side::X);
  out.i_given_meet = gk_decompose(pmf).residual_mi;
  return out;
}

AuxChannel partition_channel(const JointPMF& pmf, const Partition& part, Side side) {
  std::vector<int> class_of_cell;
  class_of_cell.reserve(pmf.support().size());
  for (const auto& [x, y] : pmf.support()) {
    class_of_cell.push_back(side == Side::Y ? part.class_of[y] : part.class_of[x]);
  }
  return AuxChannel::from_cell_classes(pmf.support(), class_of_cell, part.count);
}

AuxChannel component_channel(const JointPMF& pmf, const GKDecomposition& gk) {
  std::vector<int> class_of_cell;
  class_of_cell.reserve(pmf.support().size());
  for (const auto& [x, y] : pmf.support()) class_of_cell.push_back(gk.x_component[x]);
  const int count = static_cast<int>(gk.component_probs.size());
  return AuxChannel::from_cell_classes(pmf.support(), class_of_cell, count);
}

}  // namespace aci

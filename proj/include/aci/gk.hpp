#pragma once

#include <vector>

#include "aci/aux_channel.hpp"
#include "aci/joint_pmf.hpp"

namespace aci {

// Gacs-Korner decomposition of a pair: the common part is the connected
// component of the bipartite support graph.
struct GKDecomposition {
  std::vector<int> x_component;        // component id per x index
  std::vector<int> y_component;       // component id per y index
  std::vector<double> component_probs;
  double common_entropy = 0.0;        // H of the common part, bits
  double residual_mi = 0.0;           // I(X;Y | common part), bits
};

struct WWMonotones {
  double h_y_down_x = 0.0;  // H(Y \searrow X | X)
  double h_x_down_y = 0.0;  // H(X \searrow Y | Y)
  double i_given_meet = 0.0;  // I(X;Y | X ^ Y)
};

enum class Side { X, Y };

// Partition of one alphabet; class_of[i] in [0, count).
struct Partition {
  std::vector<int> class_of;
  int count = 0;
};

GKDecomposition gk_decompose(const JointPMF& pmf);

// Coarsest deterministic Q on the chosen side with H(Q|side)=0 and
// I(X;Y|Q)=0: groups symbols whose conditional columns agree within tol.
Partition dependent_part(const JointPMF& pmf, Side side, double tol = 1e-9);

WWMonotones ww_monotones(const JointPMF& pmf);

// One-hot channels q = class(symbol) / q = component(cell); these witness the
// axis points of the region.
AuxChannel partition_channel(const JointPMF& pmf, const Partition& part, Side side);
AuxChannel component_channel(const JointPMF& pmf, const GKDecomposition& gk);

// I(X;Y|P) for a deterministic partition P of one alphabet.
double conditional_mi_given_partition(const JointPMF& pmf, const Partition& part, Side side);

}  // namespace aci

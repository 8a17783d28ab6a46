#pragma once

#include <vector>

#include "aci/scalarize.hpp"

namespace aci {

struct DeterministicTriple {
  KTriple triple;
  AuxChannel witness;
};

// All triples reachable by deterministic Q = f(x,y): one per set partition of
// the support cells into at most max_classes blocks. Exact; support must have
// at most 12 cells.
std::vector<DeterministicTriple> enumerate_deterministic(const JointPMF& pmf, int max_classes);

struct GridOracleResult {
  double grid_min = 0.0;   // minimum over the channel grid (achievable)
  double slack = 0.0;      // continuity bound; true min >= grid_min - slack
  double lower = 0.0;      // grid_min - slack
  AuxChannel witness;      // grid channel attaining grid_min
  int q_size = 0;
  int g = 0;
};

// Exhaustive minimum over channels whose rows have entries in {0, 1/g, .., 1}.
// Support must have at most 4 cells. The bracket (lower, grid_min) contains
// the true minimum over all channels with this q_size: any channel rounds to
// a grid channel moving each row entry by at most 1/g, each marginal
// coordinate by at most its input mass / g, and |phi(u)-phi(v)| <= phi(|u-v|)
// for |u-v| <= 1/2 bounds the entropy changes coordinate-wise.
GridOracleResult grid_oracle(const JointPMF& pmf, const ScalarWeights& w, int q_size, int g,
                             int threads = 0);

struct SupportCertificate {
  double certified_lower = 0.0;  // sound lower bound on min_Q w.(r1,r2,z)
  double estimate = 0.0;         // discrete envelope value (near-exact, not certified)
  double margin = 0.0;           // continuity + rounding margin subtracted
  int resolution = 0;
};

// Lower-bounds the support value min over all Q (any alphabet) of
// w.(r1,r2,z) via the lower convex envelope over posterior distributions:
// every Q induces a barycentric decomposition of the pmf over the support
// simplex, and w.K(Q) = sum_q p_q g_w(posterior_q) with
//   g_w(pi) = const(pmf, w) - H(pi) + (w1+w3) H(pi_X) + (w2+w3) H(pi_Y).
// The envelope at the pmf is bounded below by an affine minorant fitted on a
// resolution-grid of the simplex and extended off-grid by an explicit modulus
// of continuity. Support must have at most 4 cells.
SupportCertificate certify_support(const JointPMF& pmf, const ScalarWeights& w, int resolution,
                                   int threads = 0);

// Value of g_w at one posterior (exposed for tests).
double posterior_objective(const JointPMF& pmf, const ScalarWeights& w,
                           const std::vector<double>& posterior);

}  // namespace aci

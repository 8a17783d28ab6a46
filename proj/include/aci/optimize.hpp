#pragma once

#include <cstdint>
#include <vector>

#include "aci/scalarize.hpp"

namespace aci {

struct OptOptions {
  int q_size = 0;        // 0 -> |X||Y| + 2
  int restarts = 32;     // random restarts (structured starts are added on top)
  int max_iters = 5000;
  double tol = 1e-9;     // first-order tolerance on the softmax gradient
  uint64_t seed = 0;
  int threads = 0;       // 0 -> hardware concurrency (sweep only)
};

struct OptResult {
  ScalarWeights weights;
  double value = 0.0;
  KTriple triple;
  double i_xyq = 0.0;
  AuxChannel witness;
  int iterations = 0;     // iterations of the winning start
  int restarts_used = 0;  // starts evaluated in total
  bool converged = false; // some start met the first-order tolerance
};

// Best local minimum of w . (r1, r2, z) over channels p(q|x,y) with the given
// alphabet size. Deterministic given opts.seed.
OptResult minimize_scalarized(const JointPMF& pmf, const ScalarWeights& w,
                              const OptOptions& opts = {});

// One minimization per weight vector (i/g, j/g, k/g), i+j+k = g, in
// lexicographic (i, j) order. Parallel over directions; results are
// bit-identical regardless of schedule.
std::vector<OptResult> sweep(const JointPMF& pmf, int weight_grid_resolution,
                             const OptOptions& opts = {});

std::vector<ScalarWeights> weight_grid(int resolution);

// Near-axis directions that expose the axis corners of these regions (the
// simplex grid caps the off-axis weight ratio at about resolution/2, which
// can be too small to reach the corner's normal cone). Appended to sweeps
// that feed containment-ratio bounds or intercept extraction.
std::vector<ScalarWeights> axis_exposing_directions();

// sweep() plus minimizations along extra directions, one result per entry.
std::vector<OptResult> sweep_with_extras(const JointPMF& pmf, int weight_grid_resolution,
                                         const std::vector<ScalarWeights>& extras,
                                         const OptOptions& opts = {});

}  // namespace aci

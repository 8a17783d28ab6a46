#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aci/optimize.hpp"
#include "aci/oracles.hpp"

namespace aci {

enum class Certainty { Heuristic, Certified };

struct SupportEntry {
  ScalarWeights w;
  double value = 0.0;  // lower bound on min over the region of w.(r1,r2,z)
  Certainty certainty = Certainty::Heuristic;
};

struct InnerPoint {
  KTriple triple;
  std::optional<AuxChannel> witness;
};

// Two-sided approximation of the monotone region K(X,Y): achievable inner
// points plus per-direction support lower bounds. The region itself is the
// upward closure of the convex hull of the true achievable set.
struct KRegionApprox {
  std::vector<InnerPoint> inner;
  std::vector<SupportEntry> support;
  std::string source;
};

enum class Membership { Inside, Outside, Unknown };

KRegionApprox build_region(const std::vector<OptResult>& results,
                           const std::string& source = "sweep");

// Inside: p + tol dominates a convex combination of inner points.
// Outside: some certified support pair is violated by more than tol.
Membership contains(const KRegionApprox& region, const KTriple& p, double tol);

KRegionApprox minkowski_sum(const KRegionApprox& a, const KRegionApprox& b);
KRegionApprox scale(const KRegionApprox& a, int n);

struct AxisIntercepts {
  double r1 = 0.0;
  double r2 = 0.0;
  double z = 0.0;
};

// Least t with (t,0,0) (and permutations) inside at the given tolerance,
// found by bisection.
AxisIntercepts axis_intercepts(const KRegionApprox& region, double tol = 5e-3);

enum class SliceKind { RD, CI };

struct Slice2D {
  double axis_value = 0.0;
  std::vector<std::array<double, 2>> frontier;  // sorted by R1, R2 decreasing
};

// RD: frontier of {(r1,r2) : (r1,r2,z) in region, z <= level}.
// CI: frontier of {(r1,r2) : achievable with base_I + r1 + r2 - z >= level}.
Slice2D slice(const KRegionApprox& region, SliceKind kind, double level, double base_I,
              int n_directions = 41);

struct WynerResult {
  double gap = 0.0;       // min r1 + r2 over the z ~ 0 slice
  double wyner_ci = 0.0;  // gap + I(X;Y)
};

WynerResult wyner_gap(const KRegionApprox& region, double base_I);

// Independent route to the same quantity: minimize I(X,Y;U) over product
// models p(u) p(x|u) p(y|u) matched to the pmf by an annealed penalty; the
// fitted posterior is re-evaluated exactly through the channel path.
struct WynerDirect {
  double value = 0.0;       // I(X,Y;U) at the repaired channel
  double z_residual = 0.0;  // I(X;Y|U) at the repaired channel
};

WynerDirect wyner_direct(const JointPMF& pmf, int u_size = 0, uint64_t seed = 0);

// Rebuilds RD slices from CI frontiers through the level identity and
// returns the largest frontier discrepancy over the given levels.
double rd_from_ci_check(const KRegionApprox& region, double base_I,
                        const std::vector<double>& levels);

// Upgrades (or appends) support entries with certified-envelope lower bounds.
// Returns the number of certified entries.
int certify_region(KRegionApprox* region, const JointPMF& pmf,
                   const std::vector<ScalarWeights>& directions, int resolution,
                   int threads = 0);

std::string region_to_json(const KRegionApprox& region);
KRegionApprox region_from_json(const std::string& text);
std::string slice_to_csv(const Slice2D& s);

}  // namespace aci

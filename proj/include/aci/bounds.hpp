#pragma once

#include <optional>
#include <string>

#include "aci/gk.hpp"
#include "aci/region.hpp"

namespace aci {

enum class BoundMethod { WW, KRegion };

// Lower bound on n2/n1: n2 copies of the setup consumed per n1 copies of the
// target produced by any secure protocol. May be +infinity.
struct RateBoundResult {
  double bound = 0.0;
  BoundMethod method = BoundMethod::WW;
  std::optional<KTriple> witness_point;        // setup inner point (kregion)
  std::optional<SupportEntry> witness_direction;  // target support pair (kregion)
  std::string notes;
};

// Componentwise monotone ratio: max over the three monotones of
// target/setup, with 0/0 := 0 and positive/0 := +infinity.
RateBoundResult ww_bound(const JointPMF& setup, const JointPMF& target);

// max over setup inner points a and target support pairs (w, c) of c/(w.a),
// over pairs with w.a > 0 and c > 0. The scaled setup region must fit inside
// the scaled target region, so each target halfspace prices every setup
// point. certified_only restricts to oracle-backed target directions.
RateBoundResult k_bound(const KRegionApprox& setup_region, const KRegionApprox& target_region,
                        bool certified_only = false);

enum class TriState { Yes, No, Unknown };

// Whether the region reaches the origin (the pair is cryptographically
// trivial), as decided by contains() at tolerance 5e-3.
TriState is_trivial(const KRegionApprox& region);

std::string bound_to_json(const RateBoundResult& r);

// Caveat attached to bounds involving the connected() builtin: quoted bounds
// of 0.5182 / 1.8161 for a 4x4 two-block source assume a specific mass
// layout that the caption-level description does not determine.
std::string connected_reconstruction_note();

}  // namespace aci

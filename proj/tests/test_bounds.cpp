#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "aci/bounds.hpp"
#include "doctest.h"

using namespace aci;

namespace {

OptOptions fast_opts() {
  OptOptions o;
  o.restarts = 8;
  o.threads = 2;
  return o;
}

KRegionApprox region_of(const JointPMF& pmf, int g = 8) {
  return build_region(sweep_with_extras(pmf, g, axis_exposing_directions(), fast_opts()),
                      "test");
}

JointPMF transpose(const JointPMF& p) {
  std::vector<std::vector<double>> probs(p.ny(), std::vector<double>(p.nx()));
  for (int i = 0; i < p.nx(); ++i)
    for (int j = 0; j < p.ny(); ++j) probs[j][i] = p.p(i, j);
  return JointPMF::make(p.y_labels(), p.x_labels(), probs);
}

}  // namespace

TEST_CASE("ww bound is zero for a trivial target") {
  const RateBoundResult r =
      ww_bound(builtin("zsource", {1.0 / 3.0}), builtin("independent_uniform", {2, 2}));
  CHECK(r.bound == 0.0);
}

TEST_CASE("ww bound is infinite from a monotone-free setup") {
  const RateBoundResult r =
      ww_bound(builtin("identical_uniform", {2}), builtin("zsource", {1.0 / 3.0}));
  CHECK(std::isinf(r.bound));
}

TEST_CASE("ww bound for the two-block setup against zsource") {
  const RateBoundResult r =
      ww_bound(builtin("connected", {0.05}), builtin("zsource", {1.0 / 3.0}));
  CHECK(r.bound == doctest::Approx(2.327771).epsilon(1e-5));
}

TEST_CASE("k bound of a region against itself is at least one") {
  const KRegionApprox r = region_of(builtin("zsource", {1.0 / 3.0}));
  const RateBoundResult b = k_bound(r, r);
  CHECK(b.bound >= 1.0 - 1e-6);
  CHECK(b.witness_point.has_value());
  CHECK(b.witness_direction.has_value());
}

TEST_CASE("k bound vanishes when the target region touches the origin") {
  const KRegionApprox setup = region_of(builtin("zsource", {1.0 / 3.0}));
  const KRegionApprox target = region_of(builtin("independent_uniform", {2, 2}), 6);
  const RateBoundResult b = k_bound(setup, target);
  CHECK(b.bound == 0.0);
  CHECK(b.notes.find("origin") != std::string::npos);
}

TEST_CASE("k bound is invariant under swapping both pairs") {
  const JointPMF setup = builtin("zsource", {0.25});
  const JointPMF target = builtin("zsource", {1.0 / 3.0});
  const double direct = k_bound(region_of(setup), region_of(target)).bound;
  const double swapped = k_bound(region_of(transpose(setup)), region_of(transpose(target))).bound;
  CHECK(std::abs(direct - swapped) <= 1e-4);
}

TEST_CASE("doubling the setup halves the bound") {
  const JointPMF s = builtin("zsource", {1.0 / 3.0});
  const JointPMF target = builtin("zsource", {0.25});
  const double single = k_bound(region_of(s, 10), region_of(target, 10)).bound;
  const double doubled = k_bound(region_of(tensor(s, s), 10), region_of(target, 10)).bound;
  CHECK(std::abs(doubled - 0.5 * single) <= 5e-3);
}

TEST_CASE("k bound dominates the monotone bound when axis data is present") {
  const JointPMF setup = builtin("connected", {0.05});
  const JointPMF target = builtin("zsource", {1.0 / 3.0});
  const double ww = ww_bound(setup, target).bound;
  const double kb = k_bound(region_of(setup, 12), region_of(target, 12)).bound;
  CHECK(kb >= ww - 1e-6);
}

TEST_CASE("triviality classification") {
  const KRegionApprox octant = region_of(builtin("independent_uniform", {2, 2}), 6);
  CHECK(is_trivial(octant) == TriState::Yes);

  const KRegionApprox id2 = region_of(builtin("identical_uniform", {2}), 6);
  CHECK(is_trivial(id2) == TriState::Yes);

  KRegionApprox zs = region_of(builtin("zsource", {1.0 / 3.0}));
  CHECK(is_trivial(zs) == TriState::Unknown);  // no certificates yet
  certify_region(&zs, builtin("zsource", {1.0 / 3.0}), {ScalarWeights::make(1, 1, 1)}, 2500, 2);
  CHECK(is_trivial(zs) == TriState::No);
}

TEST_CASE("bound JSON carries the witnesses") {
  const KRegionApprox r = region_of(builtin("zsource", {1.0 / 3.0}));
  const RateBoundResult b = k_bound(r, r);
  const std::string doc = bound_to_json(b);
  CHECK(doc.find("witness_direction") != std::string::npos);
  CHECK(doc.find("kregion") != std::string::npos);

  RateBoundResult inf_bound;
  inf_bound.bound = std::numeric_limits<double>::infinity();
  CHECK(bound_to_json(inf_bound).find("infinity") != std::string::npos);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "aci/gk.hpp"
#include "aci/infomath.hpp"
#include "doctest.h"

using namespace aci;

TEST_CASE("connected(0) splits into two components of mass 1/2") {
  const GKDecomposition gk = gk_decompose(builtin("connected", {0.0}));
  CHECK(gk.component_probs.size() == 2);
  CHECK(gk.common_entropy == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gk.residual_mi == doctest::Approx(0.0).epsilon(1e-12));
  // x0,x1 with y0,y1 and x2,x3 with y2,y3
  CHECK(gk.x_component[0] == gk.y_component[1]);
  CHECK(gk.x_component[2] == gk.y_component[3]);
  CHECK(gk.x_component[0] != gk.x_component[2]);
}

TEST_CASE("connected(delta > 0) collapses to one component") {
  for (const double d : {0.01, 0.05, 0.3}) {
    const GKDecomposition gk = gk_decompose(builtin("connected", {d}));
    CHECK(gk.component_probs.size() == 1);
    CHECK(gk.common_entropy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(gk.residual_mi ==
          doctest::Approx(info_summary(builtin("connected", {d})).I_XY).epsilon(1e-9));
  }
}

TEST_CASE("identical pair decomposes into point components") {
  const GKDecomposition gk = gk_decompose(builtin("identical_uniform", {2}));
  CHECK(gk.component_probs.size() == 2);
  CHECK(gk.common_entropy == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gk.residual_mi == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("common entropy is additive under tensor") {
  const JointPMF a = builtin("connected", {0.0});
  const JointPMF b = builtin("identical_uniform", {2});
  const double ca = gk_decompose(a).common_entropy;
  const double cb = gk_decompose(b).common_entropy;
  CHECK(gk_decompose(tensor(a, b)).common_entropy == doctest::Approx(ca + cb).epsilon(1e-9));
}

TEST_CASE("dependent part of zsource is the identity partition") {
  const Partition p = dependent_part(builtin("zsource", {1.0 / 3.0}), Side::Y);
  CHECK(p.count == 2);
  CHECK(p.class_of[0] != p.class_of[1]);
}

TEST_CASE("dependent part of connected(0.05) groups the blocks") {
  const Partition p = dependent_part(builtin("connected", {0.05}), Side::Y);
  CHECK(p.count == 2);
  CHECK(p.class_of[0] == p.class_of[1]);
  CHECK(p.class_of[2] == p.class_of[3]);
  CHECK(p.class_of[0] != p.class_of[2]);
}

TEST_CASE("dependent part of an independent pair is a single class") {
  const Partition p = dependent_part(builtin("independent_uniform", {2, 2}), Side::Y);
  CHECK(p.count == 1);
}

TEST_CASE("monotones of zsource") {
  const WWMonotones m = ww_monotones(builtin("zsource", {1.0 / 3.0}));
  CHECK(m.h_y_down_x == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(m.h_x_down_y == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(m.i_given_meet == doctest::Approx(0.2516291673878230).epsilon(1e-9));
}

TEST_CASE("monotones of the identical pair vanish") {
  const WWMonotones m = ww_monotones(builtin("identical_uniform", {2}));
  CHECK(m.h_y_down_x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m.h_x_down_y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m.i_given_meet == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("monotones of connected(0.05)") {
  const WWMonotones m = ww_monotones(builtin("connected", {0.05}));
  CHECK(m.h_y_down_x == doctest::Approx(h2(0.05)).epsilon(1e-9));
  CHECK(m.h_x_down_y == doctest::Approx(h2(0.05)).epsilon(1e-9));
  CHECK(m.i_given_meet == doctest::Approx(0.7136030428840439).epsilon(1e-9));
}

TEST_CASE("partition channels witness the axis points") {
  for (const auto& pmf :
       {builtin("zsource", {1.0 / 3.0}), builtin("connected", {0.05}),
        builtin("identical_uniform", {3})}) {
    const WWMonotones m = ww_monotones(pmf);

    const Partition py = dependent_part(pmf, Side::Y);
    const KTripleInfo iy = k_triple(extend(pmf, partition_channel(pmf, py, Side::Y)));
    CHECK(iy.triple.r1 == doctest::Approx(m.h_y_down_x).epsilon(1e-9));
    CHECK(iy.triple.r2 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(iy.triple.z == doctest::Approx(0.0).epsilon(1e-9));

    const Partition px = dependent_part(pmf, Side::X);
    const KTripleInfo ix = k_triple(extend(pmf, partition_channel(pmf, px, Side::X)));
    CHECK(ix.triple.r1 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(ix.triple.r2 == doctest::Approx(m.h_x_down_y).epsilon(1e-9));
    CHECK(ix.triple.z == doctest::Approx(0.0).epsilon(1e-9));

    const GKDecomposition gk = gk_decompose(pmf);
    const KTripleInfo im = k_triple(extend(pmf, component_channel(pmf, gk)));
    CHECK(im.triple.r1 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(im.triple.r2 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(im.triple.z == doctest::Approx(m.i_given_meet).epsilon(1e-9));
  }
}

TEST_CASE("merging distinct dependent-part classes breaks conditional independence") {
  std::mt19937_64 rng(23);
  std::exponential_distribution<double> expo(1.0);
  int tested = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<double>> probs(3, std::vector<double>(3));
    double s = 0.0;
    for (auto& row : probs)
      for (double& v : row) s += (v = expo(rng) + 1e-6);
    for (auto& row : probs)
      for (double& v : row) v /= s;
    const JointPMF pmf = JointPMF::make(probs);
    const Partition p = dependent_part(pmf, Side::Y);
    CHECK(conditional_mi_given_partition(pmf, p, Side::Y) <= 1e-9);
    if (p.count < 2) continue;
    for (int c1 = 0; c1 < p.count; ++c1) {
      for (int c2 = c1 + 1; c2 < p.count; ++c2) {
        Partition merged = p;
        for (int& c : merged.class_of)
          if (c == c2) c = c1;
        merged.count = p.count;  // ids need not be compact for the evaluation
        CHECK(conditional_mi_given_partition(pmf, merged, Side::Y) > 1e-12);
        ++tested;
      }
    }
  }
  CHECK(tested > 10);
}

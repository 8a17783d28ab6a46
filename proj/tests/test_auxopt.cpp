#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "aci/optimize.hpp"
#include "aci/oracles.hpp"
#include "doctest.h"

using namespace aci;

namespace {

AuxChannel constant_channel(const JointPMF& pmf) {
  std::vector<int> cls(pmf.support().size(), 0);
  return AuxChannel::from_cell_classes(pmf.support(), cls, 1);
}

AuxChannel copy_channel(const JointPMF& pmf) {
  std::vector<int> cls(pmf.support().size());
  for (size_t i = 0; i < cls.size(); ++i) cls[i] = static_cast<int>(i);
  return AuxChannel::from_cell_classes(pmf.support(), cls, static_cast<int>(cls.size()));
}

JointPMF random_pmf_2x2(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<std::vector<double>> probs(2, std::vector<double>(2));
  double s = 0.0;
  for (auto& row : probs)
    for (double& v : row) s += (v = expo(rng) + 1e-3);
  for (auto& row : probs)
    for (double& v : row) v /= s;
  return JointPMF::make(probs);
}

}  // namespace

TEST_CASE("scalarized_value on degenerate channels") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  CHECK(scalarized_value(z, constant_channel(z), ScalarWeights::make(0.5, 0.5, 0.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(scalarized_value(z, copy_channel(z), ScalarWeights::make(0, 0, 1)) ==
        doctest::Approx(0.0).epsilon(1e-9));

  // Q = copy of X in the (0,1,0) direction costs H(X|Y) = 2/3.
  std::vector<int> cls;
  for (const auto& [x, y] : z.support()) cls.push_back(x);
  const AuxChannel qx = AuxChannel::from_cell_classes(z.support(), cls, 2);
  CHECK(scalarized_value(z, qx, ScalarWeights::make(0, 1, 0)) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("minimize_scalarized finds the flat directions") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  OptOptions o;
  o.restarts = 6;
  CHECK(minimize_scalarized(z, ScalarWeights::make(1, 0, 0), o).value ==
        doctest::Approx(0.0).epsilon(1e-7));
  CHECK(minimize_scalarized(z, ScalarWeights::make(0, 0, 1), o).value ==
        doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("OptResult value is reproducible from its witness") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  OptOptions o;
  o.restarts = 8;
  for (const auto& w : {ScalarWeights::make(1, 1, 1), ScalarWeights::make(1, 2, 4),
                        ScalarWeights::make(5, 1, 2)}) {
    const OptResult r = minimize_scalarized(z, w, o);
    CHECK(std::abs(r.value - scalarized_value(z, r.witness, w)) <= 1e-7);
    CHECK(std::abs(r.value - w.dot(r.triple)) <= 1e-7);
    CHECK(r.converged);
  }
}

TEST_CASE("sweep is deterministic and sized by the weight grid") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  OptOptions o;
  o.restarts = 4;
  o.threads = 2;
  const auto a = sweep(z, 4, o);
  CHECK(a.size() == 15);
  o.threads = 1;
  const auto b = sweep(z, 4, o);
  REQUIRE(b.size() == a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].value == b[i].value);  // bit identical across schedules
    CHECK(a[i].triple.r1 == b[i].triple.r1);
  }
}

TEST_CASE("sweep of an independent pair is identically zero") {
  const JointPMF iu = builtin("independent_uniform", {2, 2});
  OptOptions o;
  o.restarts = 4;
  for (const auto& r : sweep(iu, 4, o)) {
    CHECK(r.value <= 1e-7);
    CHECK(r.triple.r1 + r.triple.r2 + r.triple.z <= 1e-5);
  }
}

TEST_CASE("q_size monotonicity on zsource") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  const ScalarWeights w = ScalarWeights::make(1, 1, 1);
  OptOptions o;
  o.restarts = 10;
  double prev = 1e9;
  for (int q = 2; q <= 7; ++q) {
    o.q_size = q;
    const double v = minimize_scalarized(z, w, o).value;
    CHECK(v <= prev + 1e-7);
    prev = v;
  }
}

TEST_CASE("alphabet saturation on small supports") {
  OptOptions o;
  o.restarts = 10;
  for (const auto& pmf : {builtin("zsource", {1.0 / 3.0}), random_pmf_2x2(5)}) {
    for (const auto& w : {ScalarWeights::make(1, 1, 1), ScalarWeights::make(1, 3, 6)}) {
      o.q_size = pmf.nx() * pmf.ny() + 2;
      const double at_cap = minimize_scalarized(pmf, w, o).value;
      o.q_size = pmf.nx() * pmf.ny() + 4;
      const double beyond = minimize_scalarized(pmf, w, o).value;
      CHECK(std::abs(at_cap - beyond) <= 2e-3);
    }
  }
}

TEST_CASE("enumerate_deterministic counts set partitions") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  CHECK(enumerate_deterministic(z, 3).size() == 5);  // Bell(3)
  CHECK(enumerate_deterministic(z, 1).size() == 1);

  // The single-block partition is the constant Q.
  const auto one = enumerate_deterministic(z, 1);
  CHECK(one[0].triple.r1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(one[0].triple.z == doctest::Approx(info_summary(z).I_XY).epsilon(1e-9));
}

TEST_CASE("the diagonal partition of the identical pair reaches the origin") {
  const JointPMF id2 = builtin("identical_uniform", {2});
  bool found_origin = false;
  for (const auto& det : enumerate_deterministic(id2, 2)) {
    if (det.triple.r1 < 1e-9 && det.triple.r2 < 1e-9 && det.triple.z < 1e-9) found_origin = true;
  }
  CHECK(found_origin);
}

TEST_CASE("enumerate_deterministic refuses large supports") {
  std::vector<std::vector<double>> probs(4, std::vector<double>(4, 1.0 / 16));
  CHECK_THROWS_WITH_AS(enumerate_deterministic(JointPMF::make(probs), 4),
                       doctest::Contains("TooManyCells"), Error);
}

TEST_CASE("deterministic triples never beat the sweep envelope") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  OptOptions o;
  o.restarts = 8;
  const auto results = sweep(z, 4, o);
  const auto dets = enumerate_deterministic(z, 5);
  for (const auto& r : results) {
    for (const auto& det : dets) {
      CHECK(r.value <= r.weights.dot(det.triple) + 2e-3);
    }
  }
}

TEST_CASE("grid oracle on flat directions") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  const GridOracleResult a = grid_oracle(z, ScalarWeights::make(0, 0, 1), 2, 8);
  CHECK(a.grid_min == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(a.lower <= 0.0);

  const JointPMF iu = builtin("independent_uniform", {2, 2});
  const GridOracleResult b = grid_oracle(iu, ScalarWeights::make(1, 2, 3), 2, 6);
  CHECK(b.grid_min == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("grid oracle brackets the optimizer") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  const ScalarWeights w = ScalarWeights::make(1, 1, 1);
  const GridOracleResult oracle = grid_oracle(z, w, 4, 12);
  OptOptions o;
  o.restarts = 10;
  const OptResult opt = minimize_scalarized(z, w, o);
  CHECK(opt.value >= oracle.lower - 1e-9);
  CHECK(opt.value <= oracle.grid_min + 1e-7);
  // The oracle's witness is a feasible grid channel reproducing grid_min.
  CHECK(scalarized_value(z, oracle.witness, w) == doctest::Approx(oracle.grid_min).epsilon(1e-9));
}

TEST_CASE("grid oracle rejects oversized inputs") {
  const JointPMF big = builtin("connected", {0.05});
  CHECK_THROWS_WITH_AS(grid_oracle(big, ScalarWeights::make(1, 1, 1), 2, 4),
                       doctest::Contains("TooLarge"), Error);
}

TEST_CASE("posterior envelope matches the optimizer on zsource") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  OptOptions o;
  o.restarts = 10;
  for (const auto& w : {ScalarWeights::make(1, 1, 1), ScalarWeights::make(1, 2, 3),
                        ScalarWeights::make(2, 2, 1)}) {
    const SupportCertificate cert = certify_support(z, w, 2000, 2);
    const OptResult opt = minimize_scalarized(z, w, o);
    // The discrete envelope is near exact; the certified bound is sound.
    CHECK(std::abs(opt.value - cert.estimate) <= 2.5e-2);
    CHECK(opt.value >= cert.certified_lower - 1e-9);
  }
}

TEST_CASE("posterior objective averages back to the achievable values") {
  const JointPMF z = builtin("zsource", {1.0 / 3.0});
  const ScalarWeights w = ScalarWeights::make(1, 1, 1);
  // A point posterior at the source itself is the constant Q.
  std::vector<double> at_source;
  for (const auto& [x, y] : z.support()) at_source.push_back(z.p(x, y));
  CHECK(posterior_objective(z, w, at_source) ==
        doctest::Approx(w.l3 * info_summary(z).I_XY).epsilon(1e-9));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "aci/gaussian.hpp"
#include "aci/infomath.hpp"
#include "doctest.h"

using namespace aci;

namespace {

// Quantized cross-check: bin the Gaussian pair and the auxiliary, then push
// the result through the exact finite-alphabet path.
KTripleInfo discretized_triple(const GaussianPair& pair, const GaussianAux& aux, int bins,
                               int qbins) {
  const double lim = 4.5;
  const double width = 2.0 * lim / bins;
  auto center = [&](int i) { return -lim + (i + 0.5) * width; };

  // Joint cell masses by midpoint quadrature of the bivariate density.
  const double rho = pair.rho;
  const double det = 1.0 - rho * rho;
  std::vector<std::vector<double>> probs(bins, std::vector<double>(bins));
  double total = 0.0;
  for (int i = 0; i < bins; ++i) {
    for (int j = 0; j < bins; ++j) {
      const double x = center(i), y = center(j);
      const double e = (x * x - 2.0 * rho * x * y + y * y) / (2.0 * det);
      probs[i][j] = std::exp(-e);
      total += probs[i][j];
    }
  }
  for (auto& row : probs)
    for (double& v : row) v /= total;
  const JointPMF pmf = JointPMF::make(probs);

  // Q binned over its own +-4.5 sigma range; edge bins absorb the tails.
  const double qsd = std::sqrt(aux.a * aux.a + aux.b * aux.b + 2 * aux.a * aux.b * rho +
                               aux.sigma2);
  const double qlim = 4.5 * qsd;
  const double qwidth = 2.0 * qlim / qbins;
  const double noise_sd = std::sqrt(aux.sigma2);
  std::vector<double> rows;
  rows.reserve(pmf.support().size() * qbins);
  for (const auto& [i, j] : pmf.support()) {
    const double mean = aux.a * center(i) + aux.b * center(j);
    double prev_cdf = 0.0;
    std::vector<double> row(qbins);
    for (int k = 0; k < qbins; ++k) {
      const double hi = -qlim + (k + 1) * qwidth;
      const double cdf =
          k == qbins - 1 ? 1.0 : 0.5 * (1.0 + std::erf((hi - mean) / (noise_sd * std::sqrt(2.0))));
      row[k] = std::max(cdf - prev_cdf, 0.0);
      prev_cdf = cdf;
    }
    double s = 0.0;
    for (double v : row) s += v;
    for (double v : row) rows.push_back(v / s);
  }
  const AuxChannel ch =
      AuxChannel::make(pmf.support(), qbins, std::move(rows), bins * bins + 2, true);
  return k_triple(extend(pmf, ch));
}

}  // namespace

TEST_CASE("base mutual information at rho = 0.95") {
  CHECK(GaussianPair::make(0.95).base_mi() == doctest::Approx(1.6792272).epsilon(1e-7));
}

TEST_CASE("the noise-balanced auxiliary removes all residual dependency") {
  const GaussianPair pair = GaussianPair::make(0.95);
  const double s2 = (1.0 - 0.95 * 0.95) / 0.95;
  const KTripleInfo info = gaussian_triple(pair, {1.0, 1.0, s2});
  CHECK(info.triple.z <= 1e-9);
  CHECK(info.triple.r1 == doctest::Approx(info.triple.r2).epsilon(1e-12));
}

TEST_CASE("an auxiliary seeing only X is conditionally useless for Y when independent") {
  const GaussianPair pair = GaussianPair::make(0.0);
  const KTripleInfo info = gaussian_triple(pair, {1.0, 0.0, 0.5});
  CHECK(info.triple.r1 <= 1e-12);
  CHECK(info.triple.z <= 1e-12);
  CHECK(info.triple.r2 > 0.1);  // Q carries X, which is unknown given Y
}

TEST_CASE("a nearly silent auxiliary leaves the full dependency") {
  const GaussianPair pair = GaussianPair::make(0.95);
  const KTripleInfo info = gaussian_triple(pair, {1e-6, 0.0, 1.0});
  CHECK(info.triple.z == doctest::Approx(pair.base_mi()).epsilon(1e-9));
  CHECK(info.triple.r1 <= 1e-9);
  CHECK(info.triple.r2 <= 1e-9);
}

TEST_CASE("chain identity for Gaussian auxiliaries") {
  const GaussianPair pair = GaussianPair::make(0.8);
  for (const auto& aux :
       {GaussianAux{1.0, 1.0, 0.3}, GaussianAux{0.5, -0.2, 1.0}, GaussianAux{2.0, 0.0, 0.05}}) {
    const KTripleInfo info = gaussian_triple(pair, aux);
    const double lhs = info.i_xyq;
    const double rhs = pair.base_mi() + info.triple.r1 + info.triple.r2 - info.triple.z;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("degenerate auxiliaries are rejected") {
  const GaussianPair pair = GaussianPair::make(0.95);
  CHECK_THROWS_WITH_AS(gaussian_triple(pair, {1.0, 1.0, 0.0}),
                       doctest::Contains("DegenerateCovariance"), Error);
  CHECK_THROWS_AS(gaussian_triple(pair, {0.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(GaussianPair::make(1.0), Error);
}

TEST_CASE("curve starts at the exact zero-rate row and stays ordered") {
  const GaussianPair pair = GaussianPair::make(0.95);
  std::vector<double> rs;
  for (double r = 0.0; r <= 2.0 + 1e-12; r += 0.05) rs.push_back(r);
  const auto rows = gaussian_curve(pair, rs);
  REQUIRE(rows.size() == rs.size());
  CHECK(rows[0].R_CI == 0.0);
  CHECK(rows[0].R_RD == doctest::Approx(pair.base_mi()).epsilon(1e-12));
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].R_CI >= rows[i - 1].R_CI - 1e-9);
    CHECK(rows[i].R_RD <= rows[i - 1].R_RD + 1e-9);
    CHECK(rows[i].R_CI > 0.0);
    CHECK(rows[i].R_CI <= pair.base_mi() + 2.0 * rows[i].R + 1e-9);
  }
}

TEST_CASE("curve hits zero residual at the balanced-noise rate") {
  const GaussianPair pair = GaussianPair::make(0.95);
  const double s2 = (1.0 - 0.95 * 0.95) / 0.95;
  const double r_star = gaussian_triple(pair, {1.0, 1.0, s2}).triple.r1;
  const auto rows = gaussian_curve(pair, {r_star});
  CHECK(rows[0].R_RD <= 1e-9);
}

TEST_CASE("analytic triples match a discretized evaluation") {
  const GaussianPair pair = GaussianPair::make(0.95);
  for (const auto& aux : {GaussianAux{1.0, 1.0, 0.4}, GaussianAux{1.0, 0.3, 0.8}}) {
    const KTripleInfo exact = gaussian_triple(pair, aux);
    const KTripleInfo grid = discretized_triple(pair, aux, 64, 72);
    CHECK(std::abs(exact.triple.r1 - grid.triple.r1) <= 2e-2);
    CHECK(std::abs(exact.triple.r2 - grid.triple.r2) <= 2e-2);
    CHECK(std::abs(exact.triple.z - grid.triple.z) <= 2e-2);
  }
}

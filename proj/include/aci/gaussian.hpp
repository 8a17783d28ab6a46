#pragma once

#include <vector>

#include "aci/aux_channel.hpp"

namespace aci {

// Jointly Gaussian pair with unit variances and correlation rho.
struct GaussianPair {
  double rho = 0.0;

  static GaussianPair make(double rho);
  double base_mi() const;  // I(X;Y) = -(1/2) log2(1 - rho^2), bits
};

// Auxiliary Q = a X + b Y + N with N ~ Normal(0, sigma2) independent.
struct GaussianAux {
  double a = 0.0;
  double b = 0.0;
  double sigma2 = 0.0;
};

// Triple (I(Q;Y|X), I(Q;X|Y), I(X;Y|Q)) and I(X,Y;Q) from conditional
// covariances, in bits.
KTripleInfo gaussian_triple(const GaussianPair& pair, const GaussianAux& aux);

struct GaussianCurveRow {
  double R = 0.0;
  double R_CI = 0.0;
  double R_RD = 0.0;
};

// Symmetric-rate trade-off: for each R solve I(Q;Y|X) = R within the a = b
// family by bisection on sigma2, and report (R_CI, R_RD) = (I(X,Y;Q),
// I(X;Y|Q)). R = 0 reports (0, base_mi) exactly.
std::vector<GaussianCurveRow> gaussian_curve(const GaussianPair& pair,
                                             const std::vector<double>& R_values);

std::string gaussian_curve_to_csv(const std::vector<GaussianCurveRow>& rows);

}  // namespace aci

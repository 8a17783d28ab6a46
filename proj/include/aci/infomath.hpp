#pragma once

#include <cmath>
#include <span>

namespace aci {

// All information quantities in this project are in bits (log base 2),
// with the continuous extension 0*log(0) = 0.

inline double phi(double t) {
  return t > 0.0 ? -t * std::log2(t) : 0.0;
}

inline double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h += phi(v);
  return h;
}

// Binary entropy h(p).
inline double h2(double p) { return phi(p) + phi(1.0 - p); }

// log2 clamped away from -inf; callers multiply by masses that vanish
// exactly when the argument does.
inline double safe_log2(double t) {
  return std::log2(t > 1e-320 ? t : 1e-320);
}

inline double clamp_nonneg(double v) { return v < 0.0 ? 0.0 : v; }

}  // namespace aci

#pragma once

#include <cmath>

namespace slicecount::internal {

// x^(l/2) for x >= 0 and integer l >= 0, with 0^0 = 1.
inline double half_power(double x, int l) {
  if (l == 0) return 1.0;
  double p = 1.0;
  for (int i = 0; i < l / 2; ++i) p *= x;
  if (l % 2 != 0) p *= std::sqrt(x);
  return p;
}

}  // namespace slicecount::internal

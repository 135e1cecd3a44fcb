#pragma once

// Inner loops shared by the estimators and the Rademacher statistic.
//
// All sums have the form sum_k c_k T(u - k) over |k - round(u)| <= R. When
// the table step is 1/npu with integer npu, every shift by an integer k moves
// the stencil by exactly npu nodes, so the four Lagrange weights are computed
// once per u and reused for all 2R+1 translates.

#include "wdecon/grid.hpp"

#include <algorithm>
#include <cmath>

namespace wdecon::detail {

struct KRange
{
  long lo = 0;
  long hi = -1;
  std::size_t size() const { return hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0; }
};

// c[k - range.lo] += weight * T(u - k) for the translates of u inside range.
// Returns false when no translate falls inside the range.
inline bool scatter(const CubicTable& T, int npu, long R, double u, double weight,
                    const KRange& range, double* c)
{
  const long kc = std::lround(u);
  const long r_lo = std::max(-R, range.lo - kc);
  const long r_hi = std::min(R, range.hi - kc);
  if (r_lo > r_hi)
    return false;
  double* out = c + (kc - range.lo);
  if (npu > 0) {
    const double p0 = (u - static_cast<double>(kc) - T.origin()) * npu;
    const auto i0 = static_cast<std::ptrdiff_t>(std::floor(p0));
    double w[4];
    CubicTable::weights(p0 - static_cast<double>(i0), w);
    const double* v = T.values().data() + i0 - 1;
    for (long r = r_lo; r <= r_hi; ++r) {
      const double* q = v - r * npu;
      out[r] += weight * (w[0] * q[0] + w[1] * q[1] + w[2] * q[2] + w[3] * q[3]);
    }
  } else {
    for (long r = r_lo; r <= r_hi; ++r)
      out[r] += weight * T(u - static_cast<double>(kc + r));
  }
  return true;
}

// sum_k c[k - range.lo] T(u - k) over the translates of u inside range.
inline double gather(const CubicTable& T, int npu, long R, double u, const KRange& range,
                     const double* c)
{
  const long kc = std::lround(u);
  const long r_lo = std::max(-R, range.lo - kc);
  const long r_hi = std::min(R, range.hi - kc);
  if (r_lo > r_hi)
    return 0.0;
  const double* in = c + (kc - range.lo);
  double s = 0.0;
  if (npu > 0) {
    const double p0 = (u - static_cast<double>(kc) - T.origin()) * npu;
    const auto i0 = static_cast<std::ptrdiff_t>(std::floor(p0));
    double w[4];
    CubicTable::weights(p0 - static_cast<double>(i0), w);
    const double* v = T.values().data() + i0 - 1;
    for (long r = r_lo; r <= r_hi; ++r) {
      const double* q = v - r * npu;
      s += in[r] * (w[0] * q[0] + w[1] * q[1] + w[2] * q[2] + w[3] * q[3]);
    }
  } else {
    for (long r = r_lo; r <= r_hi; ++r)
      s += in[r] * T(u - static_cast<double>(kc + r));
  }
  return s;
}

// Translates that can reach a grid: |k - round(scale x)| <= R for x in grid.
inline KRange grid_krange(const UniformGrid& g, double scale, long R)
{
  return { std::lround(scale * g.origin) - R, std::lround(scale * g.back()) + R };
}

} // namespace wdecon::detail

#pragma once

#include "wdecon/grid.hpp"

#include <cstdint>

namespace wdecon {

class ErrorModel;

// Convention throughout: F[h](t) = \int h(x) e^{-itx} dx.

//! Trapezoid approximation of F[h] on h.grid.dual(), via FFT with the phase
//! correction for the grid origin. Sets edge_warning if h has mass at the
//! edges (> 1e-10 of its peak).
GridFunction forward_ft(const GridFunction& h);

//! (1/2pi) \int H(t) e^{itx} dt on `space`, which must be the FFT partner of
//! H.grid; throws ConfigurationError otherwise.
GridFunction inverse_ft(const GridFunction& H, const UniformGrid& space);

//! Same, on the centered space grid paired with H.grid.
GridFunction inverse_ft(const GridFunction& H);

//! g = f * phi by spectral product. f must integrate to one within 1e-6.
GridFunction convolve_density(const GridFunction& f, const ErrorModel& error);

//! Number of inverse transforms executed so far in this process.
std::uint64_t inverse_ft_count();

namespace detail {
// In-place unnormalized DFT, sign -1 (forward) or +1 (backward).
void fft(std::vector<cplx>& data, int sign);
} // namespace detail

} // namespace wdecon

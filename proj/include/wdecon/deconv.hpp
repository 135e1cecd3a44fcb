#pragma once

#include "wdecon/error_model.hpp"
#include "wdecon/grid.hpp"
#include "wdecon/meyer.hpp"

namespace wdecon {

//! eta_j = F^{-1}[1_{[-2^j a, 2^j a]} / conj(F[phi])] on a y-grid of `count`
//! nodes whose dual places the band edges exactly on nodes (edge samples
//! take the midpoint value of the jump).
GridFunction build_eta(const ErrorModel& model, const MeyerBasis& basis, double j,
                       std::size_t count = std::size_t(1) << 17);

//! Deconvolved atoms of one level. Both base functions are tabulated in the
//! dilated coordinate u = 2^j y on the basis grid:
//!   base_phi(u) = (1/2pi) \int F[phi](s) / conj(F[eps](2^j s)) e^{isu} ds
//! so that phi~_jk(y) = base_phi(2^j y - k), and base_psi likewise with F[psi]
//! (giving psi~_lk(y) = base_psi(2^l y - k)). Sharing the basis grid keeps the
//! spectral resolution identical at every level and makes the Dirac case
//! reproduce phi and psi node for node.
struct DeconvAtoms
{
  double j = 0.0;
  GridFunction base_phi;
  GridFunction base_psi;
  double delta_j = 1.0;
  double envelope = 0.0; // sup |base_phi|
  bool edge_decay_ok = true;
  CubicTable phi_table, psi_table;
  int nodes_per_unit = 0;
  int translate_radius = 64;
  std::string model_id;

  double scale() const { return std::exp2(j); }
  double phi_tilde(long k, double y) const { return phi_table(scale() * y - static_cast<double>(k)); }
  double psi_tilde(long k, double y) const { return psi_table(scale() * y - static_cast<double>(k)); }
};

//! One spectral product and one inverse transform per level.
DeconvAtoms build_atoms(const ErrorModel& model, const MeyerBasis& basis, double j);

//! K_j^*(x, y) = 2^j sum_k phi(2^j x - k) phi~_jk(y), k within
//! translate_radius of both round(2^j x) and round(2^j y).
double kernel_kstar(const DeconvAtoms& atoms, const MeyerBasis& basis, double x, double y);

//! Projection kernel K_j(x, y) (Dirac atoms), for reference.
double kernel_projection(const MeyerBasis& basis, double j, double x, double y);

} // namespace wdecon

#include "wdecon/deconv.hpp"
#include "wdecon/error.hpp"
#include "wdecon/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace wdecon {

GridFunction build_eta(const ErrorModel& model, const MeyerBasis& basis, double j, std::size_t count)
{
  delta_j(model, basis, j);
  if (count < 64 || !is_power_of_two(count))
    throw ConfigurationError("build_eta: count must be a power of two >= 64");
  // step 3*2^-j/32 puts the band edge 2^j a on dual node count/8 from the
  // center; Nyquist is then 4x the band edge.
  const double h = 3.0 * std::exp2(-j) / 32.0;
  const UniformGrid ygrid(-h * static_cast<double>(count / 2), h, count);
  const UniformGrid tgrid = ygrid.dual();
  const std::size_t mid = count / 2, edge = count / 8;
  GridFunction S(tgrid);
  for (std::size_t m = mid - edge; m <= mid + edge; ++m) {
    S.values[m] = 1.0 / std::conj(model.char_fn(tgrid.at(m)));
    if (m == mid - edge || m == mid + edge)
      S.values[m] *= 0.5;
  }
  return inverse_ft(S, ygrid);
}

DeconvAtoms build_atoms(const ErrorModel& model, const MeyerBasis& basis, double j)
{
  DeconvAtoms at;
  at.j = j;
  at.delta_j = delta_j(model, basis, j);
  at.nodes_per_unit = basis.nodes_per_unit;
  at.translate_radius = basis.translate_radius;
  at.model_id = model.id();

  // Both spectra are Hermitian, so their inverses are real: pack phi into the
  // real part and psi into the imaginary part of a single inversion.
  const UniformGrid& dual = basis.phi_ft.grid;
  const double scale = std::exp2(j);
  GridFunction S(dual);
  for (std::size_t m = 0; m < dual.count; ++m) {
    const double s = dual.at(m);
    const double fphi = basis.phi_ft.values[m].real();
    const cplx fpsi = basis.psi_ft.values[m];
    if (fphi == 0.0 && fpsi == 0.0)
      continue;
    const cplx inv = 1.0 / std::conj(model.char_fn(scale * s));
    S.values[m] = fphi * inv + cplx(0.0, 1.0) * (fpsi * inv);
  }
  const GridFunction packed = inverse_ft(S, basis.grid());

  std::vector<cplx> pv(packed.size()), sv(packed.size());
  for (std::size_t i = 0; i < packed.size(); ++i) {
    pv[i] = packed.values[i].real();
    sv[i] = packed.values[i].imag();
  }
  at.base_phi = GridFunction(basis.grid(), std::move(pv));
  at.base_psi = GridFunction(basis.grid(), std::move(sv));
  at.phi_table = CubicTable(at.base_phi);
  at.psi_table = CubicTable(at.base_psi);
  at.envelope = at.base_phi.max_abs();

  const std::size_t margin = std::max<std::size_t>(4, packed.size() / 100);
  auto edge_max = [&](const GridFunction& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < margin; ++i)
      m = std::max({ m, std::abs(f.values[i]), std::abs(f.values[f.size() - 1 - i]) });
    return m;
  };
  at.edge_decay_ok = edge_max(at.base_phi) <= 1e-8 * at.envelope &&
                     edge_max(at.base_psi) <= 1e-8 * at.base_psi.max_abs();
  return at;
}

double kernel_kstar(const DeconvAtoms& atoms, const MeyerBasis& basis, double x, double y)
{
  const double sc = atoms.scale();
  const long R = basis.translate_radius;
  const long kx = std::lround(sc * x), ky = std::lround(sc * y);
  const long lo = std::max(kx, ky) - R, hi = std::min(kx, ky) + R;
  double s = 0.0;
  for (long k = lo; k <= hi; ++k)
    s += basis.phi_table(sc * x - k) * atoms.phi_table(sc * y - k);
  return sc * s;
}

double kernel_projection(const MeyerBasis& basis, double j, double x, double y)
{
  const double sc = std::exp2(j);
  const long R = basis.translate_radius;
  const long kx = std::lround(sc * x), ky = std::lround(sc * y);
  const long lo = std::max(kx, ky) - R, hi = std::min(kx, ky) + R;
  double s = 0.0;
  for (long k = lo; k <= hi; ++k)
    s += basis.phi_table(sc * x - k) * basis.phi_table(sc * y - k);
  return sc * s;
}

} // namespace wdecon

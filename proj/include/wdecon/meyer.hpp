#pragma once

#include "wdecon/grid.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace wdecon {

//! Degree-7 window: nu(x) = x^4 (35 - 84x + 70x^2 - 20x^3), clamped to [0,1].
double meyer_nu(double x);
//! F[phi]: 1 on |t| <= 2pi/3, cosine taper to zero at 4pi/3.
double meyer_phi_ft(double t);
//! F[psi](t) = e^{it/2} S(|t|), supported on 2pi/3 <= |t| <= 8pi/3.
cplx meyer_psi_ft(double t);

//! Spectral description of a band-limited MRA: F[phi], F[psi] and the
//! support radii. Meyer is the only instance shipped.
struct BandLimitedSpectrum
{
  std::string name;
  std::function<double(double)> phi_ft;
  std::function<cplx(double)> psi_ft;
  double a = 0.0;       // F[phi], F[psi] vanish beyond |t| = a
  double a_prime = 0.0; // F[psi] vanishes below |t| = a_prime
};

BandLimitedSpectrum meyer_spectrum();

struct MeyerBasis
{
  double a = 0.0;
  double a_prime = 0.0;
  GridFunction phi_ft, psi_ft; // on grid.dual()
  GridFunction phi, psi;       // on the space grid
  double c_phi = 0.0, c_psi = 0.0;
  int translate_radius = 64;

  double phi_l1 = 0.0, psi_l1 = 0.0;
  double phi_sup = 0.0, psi_sup = 0.0;
  CubicTable phi_table, psi_table;
  //! 1/step when that is an integer (enables shared-stencil translate sums),
  //! otherwise 0.
  int nodes_per_unit = 0;
  BandLimitedSpectrum spectrum;

  const UniformGrid& grid() const { return phi.grid; }
  double phi_at(double x) const { return phi_table(x); }
  double psi_at(double x) const { return psi_table(x); }
};

//! origin -128, step 1/256, 2^16 nodes.
UniformGrid default_basis_grid();

//! Needs a grid spanning at least [-30, 30] with >= 2^12 nodes, fine enough
//! that the dual grid reaches past a, and wide enough for translate_radius.
MeyerBasis build_meyer(const UniformGrid& grid, int translate_radius = 64);
MeyerBasis build_basis(const UniformGrid& grid, const BandLimitedSpectrum& spec,
                       int translate_radius = 64);

//! Process-wide basis on default_basis_grid(), built on first use.
std::shared_ptr<const MeyerBasis> default_basis();

struct Lookup
{
  double value = 0.0;
  bool truncated = false;
};

Lookup eval_phi(const MeyerBasis& basis, double x);
Lookup eval_psi(const MeyerBasis& basis, double x);

//! sup over x in [0,1) (samples points) of sum_{|k|<=radius} |fn(x-k)|.
double summability_constant(const std::function<double(double)>& fn, int radius,
                            int samples = 1024);
//! (c_phi, c_psi); radius < 0 means basis.translate_radius.
std::pair<double, double> summability_constants(const MeyerBasis& basis, int radius = -1);

struct BesovSpec
{
  double s = 1.0;
  double p = 1.0e300; // >= 1e300 is read as infinity
  double q = 1.0e300;
  double L = 1.0;

  static constexpr double inf = 1.0e300;
  void validate() const;
};

using Spectrum = std::function<cplx(double)>;

//! a_k = \int phi(2^j y - k) f(y) dy for k_lo <= k <= k_hi, from F[f].
//! (The orthonormal coefficient is 2^{j/2} a_k.)
std::vector<double> scaling_coefficients(const Spectrum& Ff, const MeyerBasis& basis,
                                         double j, long k_lo, long k_hi);
//! beta_lk = <f, psi_lk> for k_lo <= k <= k_hi, from F[f].
std::vector<double> wavelet_coefficients(const Spectrum& Ff, const MeyerBasis& basis,
                                         int l, long k_lo, long k_hi);

struct WaveletCoefficients
{
  long alpha_lo = 0;
  std::vector<double> alpha; // alpha_{0k}
  std::vector<long> beta_lo;
  std::vector<std::vector<double>> beta; // beta[l][k - beta_lo[l]]
};

//! Coefficients of a tabulated f through its grid spectrum.
WaveletCoefficients analyze(const GridFunction& f, const MeyerBasis& basis, int max_level);
//! Coefficients from a closed-form spectrum; k ranges cover |x| <= half_width.
WaveletCoefficients analyze(const Spectrum& Ff, const MeyerBasis& basis, int max_level,
                            double half_width);

double besov_norm(const WaveletCoefficients& c, const BesovSpec& spec);
double besov_norm(const GridFunction& f, const MeyerBasis& basis, const BesovSpec& spec,
                  int max_level);
double besov_norm(const Spectrum& Ff, const MeyerBasis& basis, const BesovSpec& spec,
                  int max_level, double half_width);

//! Binary cache with a versioned header; load validates the header.
void save_basis(const MeyerBasis& basis, const std::string& path);
MeyerBasis load_basis(const std::string& path);

} // namespace wdecon

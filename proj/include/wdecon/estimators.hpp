#pragma once

#include "wdecon/deconv.hpp"
#include "wdecon/error_model.hpp"
#include "wdecon/grid.hpp"
#include "wdecon/meyer.hpp"

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wdecon {

//! Default hard-threshold constant kappa'. The empirical coefficients of the
//! Laplace(1) model have a noise sd of about 4 in units of 2^{wl} sqrt(log n/n),
//! so 12 sits near three noise sds. See README.
inline constexpr double kDefaultKappaPrime = 12.0;

struct LinearEstimate
{
  std::string kind = "linear"; // "linear" or "threshold"
  double j = 0.0;              // level of the linear part
  int j1 = -1;                 // top level (threshold only)
  UniformGrid grid;
  std::vector<double> values;
  std::size_t n = 0;       // samples supplied
  std::size_t dropped = 0; // samples outside the tabulation window
  std::string model_id;
  double kappa_prime = 0.0;
  double G = 1.0;
  double delta_j = 1.0;
  std::vector<std::pair<int, long>> retained; // (l, k) kept by thresholding

  std::size_t n_used() const { return n - dropped; }
};

struct EstimateOptions
{
  //! Clip at zero and renormalize on the grid (off by default).
  bool clip = false;
};

struct CoefficientSet
{
  int level = 0;
  long k_lo = 0, k_hi = -1;
  std::vector<double> beta_hat;
  std::size_t n = 0, dropped = 0;

  double at(long k) const
  {
    return (k < k_lo || k > k_hi) ? 0.0 : beta_hat[static_cast<std::size_t>(k - k_lo)];
  }
};

struct ThresholdConfig
{
  double kappa_prime = kDefaultKappaPrime;
  double w = 0.0;
  double G = 1.0;
  int j1 = 1;
};

enum class Rounding { floor, nearest, none };

struct ResolutionRule
{
  enum class Kind { severe, moderate, threshold_top, supersmooth };
  Kind kind = Kind::moderate;
  double alpha = 0.0, nu = 0.0; // severe
  double s = 0.0, w = 0.0;      // moderate / threshold_top / supersmooth
  double c0_tilde = 0.0;        // supersmooth
  //! none keeps the real-valued level (the kernel is defined for real j).
  Rounding rounding = Rounding::floor;

  //! "moderate:s=2,w=2", "severe:alpha=2,nu=0.1", "threshold_top:w=2",
  //! "supersmooth:s=2,c0=0.4"; optional ",round=floor|nearest|none".
  static ResolutionRule parse(const std::string& text);
  std::string describe() const;
};

//! f_n(x, j) = (1/n) sum_m K_j^*(x, Y_m) on `grid`. Samples whose translates
//! cannot reach the grid are dropped and counted; the average runs over the
//! retained samples.
LinearEstimate linear_estimate(std::span<const double> samples, const DeconvAtoms& atoms,
                               const MeyerBasis& basis, const UniformGrid& grid,
                               const EstimateOptions& opt = {});

//! beta^_lk = (2^{l/2}/n) sum_m psi~_lk(Y_m); atoms must be built at level l.
CoefficientSet empirical_beta(std::span<const double> samples, const DeconvAtoms& atoms,
                              const MeyerBasis& basis, int l);

//! G kappa' 2^{wl} sqrt(log n / n).
double threshold_value(double n, int l, const ThresholdConfig& cfg);

//! f_n(., 0) + sum_{l < j1} sum_k beta^_lk 1{|beta^_lk| > tau_l} psi_lk.
//! `levels[l]` must hold the atoms of level l for l = 0..j1-1.
LinearEstimate threshold_estimate(std::span<const double> samples,
                                  const std::vector<DeconvAtoms>& levels,
                                  const MeyerBasis& basis, const ThresholdConfig& cfg,
                                  const UniformGrid& grid, const EstimateOptions& opt = {});
//! Convenience overload that builds the atoms for levels 0..j1-1.
LinearEstimate threshold_estimate(std::span<const double> samples, const MeyerBasis& basis,
                                  const ErrorModel& model, const ThresholdConfig& cfg,
                                  const UniformGrid& grid, const EstimateOptions& opt = {});

//! Level from one of the rules; integer unless rounding == none. Clamped to
//! >= 0. Throws ConfigurationError on rule/model mismatches and DomainError
//! when the severe-rule constraint c0 a^alpha nu < 1/2 fails.
double select_resolution(const ResolutionRule& rule, double n, const ErrorModel& model,
                         const MeyerBasis& basis);

//! sup_x |g^_n(x)| for the Dirac-atom (no deconvolution) estimator of the
//! observed density at j_pilot = floor(log2(n)/3).
double pilot_g_sup(std::span<const double> samples, const MeyerBasis& basis,
                   const UniformGrid& grid);
//! max(sqrt(pilot_g_sup), 1).
double estimate_G(std::span<const double> samples, const MeyerBasis& basis,
                  const UniformGrid& grid);

//! 2^14 nodes over [lo - 6 sd, hi + 6 sd] of the sample.
UniformGrid default_estimation_grid(std::span<const double> samples,
                                    std::size_t count = std::size_t(1) << 14);

//! 2^j sum_k coeff_k phi(2^j x - k) on the grid (synthesis from scaling
//! coefficients a_k = \int phi(2^j y - k) f(y) dy).
std::vector<double> synthesize(const std::vector<double>& coeff, long k_lo, double j,
                               const MeyerBasis& basis, const UniformGrid& grid);

} // namespace wdecon

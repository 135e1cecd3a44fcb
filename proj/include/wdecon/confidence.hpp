#pragma once

#include "wdecon/deconv.hpp"
#include "wdecon/estimators.hpp"
#include "wdecon/grid.hpp"
#include "wdecon/meyer.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wdecon {

enum class BandVariant { paper, practical };

BandVariant parse_variant(const std::string& s);
std::string to_string(BandVariant v);

struct RademacherStat
{
  double j = 0.0;
  double value = 0.0;       // R_n, or its average over sign draws
  int n_sign_draws = 1;
  std::uint64_t seed = 0;
  std::vector<double> draws; // per-draw suprema
};

//! (1/n) sum_m eps_m K_j^*(x, Y_m) on the grid for a given sign vector
//! (one entry per sample, +1 or -1). Samples outside the tabulation window
//! are skipped as in linear_estimate.
std::vector<double> rademacher_process(std::span<const double> samples, std::span<const int> signs,
                                       const DeconvAtoms& atoms, const MeyerBasis& basis,
                                       const UniformGrid& grid);

//! Signs for draw `index` of `seed`: independent fair coin flips.
std::vector<int> rademacher_signs(std::size_t n, std::uint64_t seed, std::uint64_t index);

//! R_n(j) = sup_x |(1/n) sum eps_m K_j^*(x, Y_m)| over the grid, averaged over
//! n_sign_draws independent sign vectors. Draws are keyed by (seed, index) and
//! may be spread over `threads` workers without changing the result.
RademacherStat rademacher_sup(std::span<const double> samples, const DeconvAtoms& atoms,
                              const MeyerBasis& basis, const UniformGrid& grid,
                              std::uint64_t seed, int n_sign_draws = 1, int threads = 1);

struct BandConstants
{
  double D1 = 0.0; // 10 c(phi) |phi|_1 sqrt(a/pi)
  double D2 = 0.0; // 44 c(phi) sqrt(a/(2 pi^2))
};
BandConstants band_constants(double c_phi, double phi_l1, double a);
BandConstants band_constants(const MeyerBasis& basis);

//! paper:     6 R + (D1/delta_j) sqrt(2^j g (z + log 2)/n) + (D2/delta_j) 2^j (z + log 2)/n
//! practical: 4 R + (D1/delta_j) sqrt(2^j g (z + log 2)/n)
double sigma_r(double R, double n, double j, double z, double g_sup, double delta_j,
               const BandConstants& k, BandVariant variant);
double sigma_r(const RademacherStat& stat, double n, double j, double z, double g_sup,
               double delta_j, const MeyerBasis& basis, BandVariant variant);

struct BandResult
{
  UniformGrid grid;
  std::vector<double> center;
  double half_width = 0.0; // sigma^R
  double z = 1.0;
  double delta = 0.0;
  BandVariant variant = BandVariant::paper;
  double R_n = 0.0;
  double g_sup = 0.0;
  std::string g_sup_source; // "pilot", "estimate" or "user"

  double radius() const { return (1.0 + delta) * half_width; }
  double lower(std::size_t i) const { return center[i] - radius(); }
  double upper(std::size_t i) const { return center[i] + radius(); }
  double nominal() const;
};

//! center +- (1 + delta) sigma; delta = 0 gives the band for E f_n.
BandResult build_band(const LinearEstimate& estimate, double sigma, double delta, double z,
                      BandVariant variant);

enum class GSupSource { pilot, estimate, user };

struct BandOptions
{
  double z = 1.0;
  double delta = 0.0;
  BandVariant variant = BandVariant::paper;
  int n_sign_draws = 1;
  std::uint64_t seed = 0;
  GSupSource g_source = GSupSource::pilot;
  double g_sup = 0.0; // used when g_source == user
  int threads = 1;
};

//! Estimate, Rademacher statistic, sigma^R and band in one call.
BandResult confidence_band(std::span<const double> samples, const DeconvAtoms& atoms,
                           const MeyerBasis& basis, const UniformGrid& grid,
                           const BandOptions& opt);

} // namespace wdecon

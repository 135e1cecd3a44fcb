#include "wdecon/confidence.hpp"
#include "wdecon/error.hpp"
#include "wdecon/random.hpp"
#include "parallel.hpp"
#include "translate_sums.hpp"

#include <cmath>
#include <numbers>

namespace wdecon {

namespace {

constexpr std::uint64_t kSignStream = 0x5167;

} // namespace

BandVariant parse_variant(const std::string& s)
{
  if (s == "paper")
    return BandVariant::paper;
  if (s == "practical")
    return BandVariant::practical;
  throw ConfigurationError("band variant must be 'paper' or 'practical', got '" + s + "'");
}

std::string to_string(BandVariant v)
{
  return v == BandVariant::paper ? "paper" : "practical";
}

std::vector<int> rademacher_signs(std::size_t n, std::uint64_t seed, std::uint64_t index)
{
  Rng rng = make_rng(seed, kSignStream, index);
  std::vector<int> s(n);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0)
      bits = rng();
    s[i] = (bits >> (i % 64)) & 1u ? 1 : -1;
  }
  return s;
}

std::vector<double> rademacher_process(std::span<const double> samples, std::span<const int> signs,
                                       const DeconvAtoms& atoms, const MeyerBasis& basis,
                                       const UniformGrid& grid)
{
  if (signs.size() != samples.size())
    throw ConfigurationError("rademacher_process: one sign per sample is required");
  const double sc = atoms.scale();
  const long R = basis.translate_radius;
  const detail::KRange range = detail::grid_krange(grid, sc, R);
  std::vector<double> c(range.size(), 0.0);
  std::size_t used = 0;
  for (std::size_t m = 0; m < samples.size(); ++m) {
    const double y = samples[m];
    if (!std::isfinite(y))
      continue;
    if (detail::scatter(atoms.phi_table, atoms.nodes_per_unit, R, sc * y, static_cast<double>(signs[m]),
                        range, c.data()))
      ++used;
  }
  if (used == 0)
    throw DomainError("rademacher_process: every sample lies outside the tabulation window");
  for (auto& v : c)
    v /= static_cast<double>(used);
  return synthesize(c, range.lo, atoms.j, basis, grid);
}

RademacherStat rademacher_sup(std::span<const double> samples, const DeconvAtoms& atoms,
                              const MeyerBasis& basis, const UniformGrid& grid,
                              std::uint64_t seed, int n_sign_draws, int threads)
{
  if (samples.empty())
    throw DomainError("rademacher_sup needs at least one sample");
  if (n_sign_draws < 1)
    throw DomainError("n_sign_draws must be >= 1");
  RademacherStat st;
  st.j = atoms.j;
  st.n_sign_draws = n_sign_draws;
  st.seed = seed;
  st.draws.assign(static_cast<std::size_t>(n_sign_draws), 0.0);
  detail::parallel_for(st.draws.size(), threads, [&](std::size_t d) {
    const std::vector<int> eps = rademacher_signs(samples.size(), seed, d);
    const std::vector<double> v = rademacher_process(samples, eps, atoms, basis, grid);
    double m = 0.0;
    for (double x : v)
      m = std::max(m, std::abs(x));
    st.draws[d] = m;
  });
  st.value = detail::pairwise_sum(st.draws) / static_cast<double>(n_sign_draws);
  return st;
}

BandConstants band_constants(double c_phi, double phi_l1, double a)
{
  using std::numbers::pi;
  return { 10.0 * c_phi * phi_l1 * std::sqrt(a / pi), 44.0 * c_phi * std::sqrt(a / (2.0 * pi * pi)) };
}

BandConstants band_constants(const MeyerBasis& basis)
{
  return band_constants(basis.c_phi, basis.phi_l1, basis.a);
}

double sigma_r(double R, double n, double j, double z, double g_sup, double delta_j,
               const BandConstants& k, BandVariant variant)
{
  if (!(z > 0.0))
    throw DomainError("sigma_r: z must be positive");
  if (!(g_sup > 0.0))
    throw DomainError("sigma_r: g_sup must be positive");
  if (!(n >= 1.0) || !(delta_j > 0.0) || !(R >= 0.0))
    throw DomainError("sigma_r: need n >= 1, delta_j > 0 and R >= 0");
  const double zl = z + std::numbers::ln2;
  const double sc = std::exp2(j);
  const double poisson = k.D1 / delta_j * std::sqrt(sc * g_sup * zl / n);
  if (variant == BandVariant::practical)
    return 4.0 * R + poisson;
  return 6.0 * R + poisson + k.D2 / delta_j * sc * zl / n;
}

double sigma_r(const RademacherStat& stat, double n, double j, double z, double g_sup,
               double delta_j, const MeyerBasis& basis, BandVariant variant)
{
  return sigma_r(stat.value, n, j, z, g_sup, delta_j, band_constants(basis), variant);
}

double BandResult::nominal() const
{
  return 1.0 - std::exp(-z);
}

BandResult build_band(const LinearEstimate& estimate, double sigma, double delta, double z,
                      BandVariant variant)
{
  if (!(sigma >= 0.0))
    throw DomainError("build_band: sigma must be >= 0");
  if (!(delta >= 0.0))
    throw DomainError("build_band: delta must be >= 0");
  BandResult b;
  b.grid = estimate.grid;
  b.center = estimate.values;
  b.half_width = sigma;
  b.z = z;
  b.delta = delta;
  b.variant = variant;
  return b;
}

BandResult confidence_band(std::span<const double> samples, const DeconvAtoms& atoms,
                           const MeyerBasis& basis, const UniformGrid& grid,
                           const BandOptions& opt)
{
  const LinearEstimate est = linear_estimate(samples, atoms, basis, grid);
  const RademacherStat st = rademacher_sup(samples, atoms, basis, grid, opt.seed, opt.n_sign_draws,
                                           opt.threads);
  double g = 0.0;
  std::string source;
  switch (opt.g_source) {
    case GSupSource::pilot:
      g = pilot_g_sup(samples, basis, grid);
      source = "pilot";
      break;
    case GSupSource::estimate:
      for (double v : est.values)
        g = std::max(g, std::abs(v));
      source = "estimate";
      break;
    case GSupSource::user:
      g = opt.g_sup;
      source = "user";
      break;
  }
  const double n = static_cast<double>(est.n_used());
  const double sigma = sigma_r(st, n, atoms.j, opt.z, g, atoms.delta_j, basis, opt.variant);
  BandResult b = build_band(est, sigma, opt.delta, opt.z, opt.variant);
  b.R_n = st.value;
  b.g_sup = g;
  b.g_sup_source = source;
  return b;
}

} // namespace wdecon

#include "wdecon/meyer.hpp"
#include "wdecon/error.hpp"
#include "wdecon/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numbers>

namespace wdecon {

namespace {

constexpr double pi = std::numbers::pi;
constexpr char kCacheMagic[8] = { 'W', 'D', 'C', 'M', 'E', 'Y', 'E', 'R' };
constexpr std::uint32_t kCacheVersion = 1;

double l1_norm(const GridFunction& f)
{
  double s = 0.0;
  for (const auto& v : f.values)
    s += std::abs(v.real());
  return s * f.grid.step;
}

double sup_norm(const GridFunction& f)
{
  double m = 0.0;
  for (const auto& v : f.values)
    m = std::max(m, std::abs(v.real()));
  return m;
}

int integer_inverse_step(double step)
{
  const double r = 1.0 / step;
  const double n = std::round(r);
  return (n >= 1.0 && std::abs(r - n) <= 1e-9 * n) ? static_cast<int>(n) : 0;
}

void fill_derived(MeyerBasis& b)
{
  b.phi_table = CubicTable(b.phi);
  b.psi_table = CubicTable(b.psi);
  b.phi_l1 = l1_norm(b.phi);
  b.psi_l1 = l1_norm(b.psi);
  b.phi_sup = sup_norm(b.phi);
  b.psi_sup = sup_norm(b.psi);
  b.nodes_per_unit = integer_inverse_step(b.grid().step);
}

void fill_spectra(MeyerBasis& b, const UniformGrid& grid)
{
  const UniformGrid dual = grid.dual();
  b.phi_ft = GridFunction::sample(dual, b.spectrum.phi_ft);
  b.psi_ft = GridFunction::sample(dual, b.spectrum.psi_ft);
  b.phi_ft.partner_origin = grid.origin;
  b.psi_ft.partner_origin = grid.origin;
}

// (1/2pi) \int G(s) e^{isk} ds at integers k_lo..k_hi, for G supported in
// |s| < 4pi. The u-grid has step 1/4 so integers are nodes. A kink at s = 0
// (Cauchy-type spectra) gets an endpoint correction and a fine frequency step.
std::vector<double> integer_samples(const std::function<cplx(double)>& G, long k_lo, long k_hi)
{
  const long kmax = std::max(std::abs(k_lo), std::abs(k_hi));
  std::size_t n = std::size_t(1) << 15;
  while (static_cast<long>(n) < 8 * (kmax + 64))
    n <<= 1;
  const UniformGrid ugrid(-0.25 * static_cast<double>(n / 2), 0.25, n);
  GridFunction S(ugrid.dual());
  for (std::size_t m = 0; m < n; ++m)
    S.values[m] = G(S.grid.at(m));
  const GridFunction c = inverse_ft(S, ugrid);
  // Euler-Maclaurin term for a derivative jump at s = 0; zero for smooth G
  const std::size_t z = n / 2;
  const double h = S.grid.step;
  const cplx right = (-3.0 * S.values[z] + 4.0 * S.values[z + 1] - S.values[z + 2]) / (2.0 * h);
  const cplx left = (3.0 * S.values[z] - 4.0 * S.values[z - 1] + S.values[z - 2]) / (2.0 * h);
  const double kink = (h * h / 12.0 * (right - left)).real() / (2.0 * pi);
  std::vector<double> out(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (long k = k_lo; k <= k_hi; ++k)
    out[static_cast<std::size_t>(k - k_lo)] =
      c.values[static_cast<std::size_t>(static_cast<long>(n / 2) + 4 * k)].real() + kink;
  return out;
}

double lp(const std::vector<double>& v, double p)
{
  if (p >= BesovSpec::inf) {
    double m = 0.0;
    for (double x : v)
      m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v)
    s += std::pow(std::abs(x), p);
  return std::pow(s, 1.0 / p);
}

} // namespace

double meyer_nu(double x)
{
  if (x <= 0.0)
    return 0.0;
  if (x >= 1.0)
    return 1.0;
  const double x4 = x * x * x * x;
  return x4 * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

double meyer_phi_ft(double t)
{
  const double at = std::abs(t);
  if (at <= 2.0 * pi / 3.0)
    return 1.0;
  if (at >= 4.0 * pi / 3.0)
    return 0.0;
  return std::cos(0.5 * pi * meyer_nu(3.0 * at / (2.0 * pi) - 1.0));
}

cplx meyer_psi_ft(double t)
{
  const double at = std::abs(t);
  double s;
  if (at <= 2.0 * pi / 3.0 || at >= 8.0 * pi / 3.0)
    return 0.0;
  if (at <= 4.0 * pi / 3.0)
    s = std::sin(0.5 * pi * meyer_nu(3.0 * at / (2.0 * pi) - 1.0));
  else
    s = std::cos(0.5 * pi * meyer_nu(3.0 * at / (4.0 * pi) - 1.0));
  return std::polar(s, 0.5 * t);
}

BandLimitedSpectrum meyer_spectrum()
{
  return BandLimitedSpectrum{ "meyer", meyer_phi_ft, meyer_psi_ft, 8.0 * pi / 3.0, 2.0 * pi / 3.0 };
}

UniformGrid default_basis_grid()
{
  return UniformGrid(-128.0, 1.0 / 256.0, std::size_t(1) << 16);
}

MeyerBasis build_basis(const UniformGrid& grid, const BandLimitedSpectrum& spec, int translate_radius)
{
  if (grid.origin > -30.0 || grid.back() < 30.0 || grid.count < 4096)
    throw ConfigurationError("basis grid must span [-30, 30] with at least 2^12 nodes");
  if (!(std::numbers::pi / grid.step > spec.a * 1.05))
    throw ConfigurationError("basis grid too coarse: Nyquist frequency must exceed a = " +
                             std::to_string(spec.a));
  // at least 16 dual nodes across the narrowest transition band
  if (2.0 * pi / grid.span() > spec.a_prime / 16.0)
    throw ConfigurationError("basis grid too short to resolve the transition bands");
  if (translate_radius < 1 || translate_radius + 2.0 > std::min(-grid.origin, grid.back()))
    throw ConfigurationError("translate_radius must fit inside the basis grid");

  MeyerBasis b;
  b.spectrum = spec;
  b.a = spec.a;
  b.a_prime = spec.a_prime;
  b.translate_radius = translate_radius;
  fill_spectra(b, grid);
  GridFunction phi = inverse_ft(b.phi_ft, grid);
  GridFunction psi = inverse_ft(b.psi_ft, grid);
  for (auto& v : phi.values)
    v = cplx(v.real(), 0.0);
  for (auto& v : psi.values)
    v = cplx(v.real(), 0.0);
  b.phi = std::move(phi);
  b.psi = std::move(psi);
  fill_derived(b);
  std::tie(b.c_phi, b.c_psi) = summability_constants(b);
  return b;
}

MeyerBasis build_meyer(const UniformGrid& grid, int translate_radius)
{
  return build_basis(grid, meyer_spectrum(), translate_radius);
}

std::shared_ptr<const MeyerBasis> default_basis()
{
  static std::once_flag once;
  static std::shared_ptr<const MeyerBasis> basis;
  std::call_once(once, [] {
    basis = std::make_shared<const MeyerBasis>(build_meyer(default_basis_grid()));
  });
  return basis;
}

Lookup eval_phi(const MeyerBasis& basis, double x)
{
  Lookup r;
  r.value = basis.phi_table(x, &r.truncated);
  return r;
}

Lookup eval_psi(const MeyerBasis& basis, double x)
{
  Lookup r;
  r.value = basis.psi_table(x, &r.truncated);
  return r;
}

double summability_constant(const std::function<double(double)>& fn, int radius, int samples)
{
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / samples;
    double s = 0.0;
    for (int k = -radius; k <= radius; ++k)
      s += std::abs(fn(x - k));
    best = std::max(best, s);
  }
  return best;
}

std::pair<double, double> summability_constants(const MeyerBasis& basis, int radius)
{
  const int r = radius < 0 ? basis.translate_radius : radius;
  return { summability_constant([&](double x) { return basis.phi_table(x); }, r),
           summability_constant([&](double x) { return basis.psi_table(x); }, r) };
}

void BesovSpec::validate() const
{
  if (!(p >= 1.0) || !(q >= 1.0))
    throw DomainError("Besov exponents need p, q >= 1");
  if (!(L > 0.0))
    throw DomainError("Besov radius L must be positive");
  if (!(s > 0.0 || (s == 0.0 && q == 1.0)))
    throw DomainError("Besov smoothness needs s > 0, or s = 0 with q = 1");
}

std::vector<double> scaling_coefficients(const Spectrum& Ff, const MeyerBasis& basis, double j,
                                         long k_lo, long k_hi)
{
  const double scale = std::exp2(j);
  const auto& phi_ft = basis.spectrum.phi_ft;
  return integer_samples(
    [&](double s) -> cplx {
      const double w = phi_ft(s);
      return w == 0.0 ? cplx(0.0) : w * Ff(scale * s);
    },
    k_lo, k_hi);
}

std::vector<double> wavelet_coefficients(const Spectrum& Ff, const MeyerBasis& basis, int l,
                                         long k_lo, long k_hi)
{
  const double scale = std::ldexp(1.0, l);
  const double amp = std::sqrt(scale);
  const auto& psi_ft = basis.spectrum.psi_ft;
  return integer_samples(
    [&](double s) -> cplx {
      const cplx w = psi_ft(s);
      return w == 0.0 ? cplx(0.0) : amp * std::conj(w) * Ff(scale * s);
    },
    k_lo, k_hi);
}

WaveletCoefficients analyze(const GridFunction& f, const MeyerBasis& basis, int max_level)
{
  const UniformGrid& g = f.grid;
  if (std::ldexp(basis.a, max_level) > pi / g.step)
    throw ConfigurationError("besov_norm: grid too coarse for level " + std::to_string(max_level) +
                             " (need 2^l a below the Nyquist frequency)");
  const GridFunction F = forward_ft(f);
  const auto& phi_ft = basis.spectrum.phi_ft;
  const auto& psi_ft = basis.spectrum.psi_ft;

  // c(y) = (1/2pi) \int F(t) conj(W(t)) e^{ity} dt, read at the atom centers
  auto correlate = [&](auto&& window, double spacing, long& k_lo) {
    GridFunction S(F.grid);
    for (std::size_t m = 0; m < F.size(); ++m)
      S.values[m] = F.values[m] * std::conj(window(F.grid.at(m)));
    const CubicTable c(inverse_ft(S, g));
    k_lo = static_cast<long>(std::ceil((g.origin + 2 * g.step) / spacing));
    const long k_hi = static_cast<long>(std::floor((g.back() - 2 * g.step) / spacing));
    std::vector<double> out;
    for (long k = k_lo; k <= k_hi; ++k)
      out.push_back(c(k * spacing));
    return out;
  };

  WaveletCoefficients out;
  out.alpha = correlate([&](double t) { return cplx(phi_ft(t)); }, 1.0, out.alpha_lo);
  for (int l = 0; l <= max_level; ++l) {
    const double sc = std::ldexp(1.0, -l);
    long lo = 0;
    out.beta.push_back(
      correlate([&](double t) { return std::sqrt(sc) * psi_ft(sc * t); }, sc, lo));
    out.beta_lo.push_back(lo);
  }
  return out;
}

WaveletCoefficients analyze(const Spectrum& Ff, const MeyerBasis& basis, int max_level,
                            double half_width)
{
  WaveletCoefficients out;
  const long R = basis.translate_radius;
  const long k0 = static_cast<long>(std::ceil(half_width)) + R;
  out.alpha_lo = -k0;
  out.alpha = scaling_coefficients(Ff, basis, 0.0, -k0, k0);
  for (int l = 0; l <= max_level; ++l) {
    const long kl = static_cast<long>(std::ceil(std::ldexp(half_width, l))) + R;
    out.beta_lo.push_back(-kl);
    out.beta.push_back(wavelet_coefficients(Ff, basis, l, -kl, kl));
  }
  return out;
}

double besov_norm(const WaveletCoefficients& c, const BesovSpec& spec)
{
  spec.validate();
  const double inv_p = spec.p >= BesovSpec::inf ? 0.0 : 1.0 / spec.p;
  double detail = 0.0;
  for (std::size_t l = 0; l < c.beta.size(); ++l) {
    const double term = std::exp2(static_cast<double>(l) * (spec.s + 0.5 - inv_p)) * lp(c.beta[l], spec.p);
    if (spec.q >= BesovSpec::inf)
      detail = std::max(detail, term);
    else
      detail += std::pow(term, spec.q);
  }
  if (spec.q < BesovSpec::inf)
    detail = std::pow(detail, 1.0 / spec.q);
  return lp(c.alpha, spec.p) + detail;
}

double besov_norm(const GridFunction& f, const MeyerBasis& basis, const BesovSpec& spec,
                  int max_level)
{
  return besov_norm(analyze(f, basis, max_level), spec);
}

double besov_norm(const Spectrum& Ff, const MeyerBasis& basis, const BesovSpec& spec,
                  int max_level, double half_width)
{
  return besov_norm(analyze(Ff, basis, max_level, half_width), spec);
}

void save_basis(const MeyerBasis& b, const std::string& path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot write basis cache " + path);
  const UniformGrid& g = b.grid();
  const std::uint64_t count = g.count;
  const std::int32_t radius = b.translate_radius;
  os.write(kCacheMagic, sizeof kCacheMagic);
  os.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
  os.write(reinterpret_cast<const char*>(&g.origin), sizeof g.origin);
  os.write(reinterpret_cast<const char*>(&g.step), sizeof g.step);
  os.write(reinterpret_cast<const char*>(&count), sizeof count);
  os.write(reinterpret_cast<const char*>(&radius), sizeof radius);
  os.write(reinterpret_cast<const char*>(&b.c_phi), sizeof b.c_phi);
  os.write(reinterpret_cast<const char*>(&b.c_psi), sizeof b.c_psi);
  for (const GridFunction* f : { &b.phi, &b.psi }) {
    const std::vector<double> v = f->real();
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  if (!os)
    throw IoError("failed writing basis cache " + path);
}

MeyerBasis load_basis(const std::string& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open basis cache " + path);
  char magic[8];
  std::uint32_t version = 0;
  double origin = 0, step = 0;
  std::uint64_t count = 0;
  std::int32_t radius = 0;
  MeyerBasis b;
  is.read(magic, sizeof magic);
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  if (!is || std::memcmp(magic, kCacheMagic, sizeof magic) != 0)
    throw IoError(path + " is not a basis cache file");
  if (version != kCacheVersion)
    throw IoError(path + ": unsupported basis cache version " + std::to_string(version));
  is.read(reinterpret_cast<char*>(&origin), sizeof origin);
  is.read(reinterpret_cast<char*>(&step), sizeof step);
  is.read(reinterpret_cast<char*>(&count), sizeof count);
  is.read(reinterpret_cast<char*>(&radius), sizeof radius);
  is.read(reinterpret_cast<char*>(&b.c_phi), sizeof b.c_phi);
  is.read(reinterpret_cast<char*>(&b.c_psi), sizeof b.c_psi);
  if (!is || count > (std::uint64_t(1) << 28))
    throw IoError(path + ": truncated basis cache header");
  const UniformGrid grid(origin, step, static_cast<std::size_t>(count));
  b.spectrum = meyer_spectrum();
  b.a = b.spectrum.a;
  b.a_prime = b.spectrum.a_prime;
  b.translate_radius = radius;
  fill_spectra(b, grid);
  for (GridFunction* f : { &b.phi, &b.psi }) {
    std::vector<double> v(grid.count);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!is)
      throw IoError(path + ": truncated basis cache body");
    *f = GridFunction(grid, std::vector<cplx>(v.begin(), v.end()));
  }
  fill_derived(b);
  return b;
}

} // namespace wdecon

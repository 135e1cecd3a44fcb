#include "wdecon/fourier.hpp"
#include "wdecon/error.hpp"
#include "wdecon/error_model.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace wdecon {

namespace {

std::atomic<std::uint64_t> g_inverse_count{ 0 };

// FFTW planning is not thread-safe; execution with new arrays is. Plans are
// created once per (size, sign) with FFTW_UNALIGNED so any buffer works.
fftw_plan plan_for(std::size_t n, int sign)
{
  static std::mutex mtx;
  static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(n, sign);
  auto it = plans.find(key);
  if (it != plans.end())
    return it->second;
  std::vector<cplx> scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), p, p,
                                    sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(key, plan);
  return plan;
}

double edge_ratio(const GridFunction& h)
{
  const double peak = h.max_abs();
  if (peak == 0.0)
    return 0.0;
  return std::max(std::abs(h.values.front()), std::abs(h.values.back())) / peak;
}

} // namespace

void detail::fft(std::vector<cplx>& data, int sign)
{
  if (!is_power_of_two(data.size()))
    throw ConfigurationError("FFT length must be a power of two");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(data.size(), sign), p, p);
}

GridFunction forward_ft(const GridFunction& h)
{
  const UniformGrid& g = h.grid;
  if (!is_power_of_two(g.count))
    throw ConfigurationError("forward_ft needs a power-of-two grid");
  const std::size_t n = g.count;
  std::vector<cplx> buf(h.values);
  buf.front() *= 0.5;
  buf.back() *= 0.5;
  for (std::size_t i = 1; i < n; i += 2)
    buf[i] = -buf[i];
  detail::fft(buf, -1);

  GridFunction out(g.dual(), std::move(buf));
  const double x0 = g.origin;
  for (std::size_t m = 0; m < n; ++m) {
    const double t = out.grid.at(m);
    out.values[m] *= g.step * std::polar(1.0, -t * x0);
  }
  out.edge_warning = edge_ratio(h) > 1e-10;
  out.partner_origin = g.origin;
  return out;
}

GridFunction inverse_ft(const GridFunction& H, const UniformGrid& space)
{
  const UniformGrid& f = H.grid;
  if (!is_power_of_two(f.count))
    throw ConfigurationError("inverse_ft needs a power-of-two grid");
  if (space.count != f.count || !space.pairs_with(f) ||
      std::abs(f.origin + std::numbers::pi / space.step) >
        1e-9 * std::numbers::pi / space.step)
    throw ConfigurationError("inverse_ft: spectrum grid is not the dual of the requested space grid");

  const std::size_t n = f.count;
  std::vector<cplx> buf(n);
  const double x0 = space.origin;
  for (std::size_t m = 0; m < n; ++m)
    buf[m] = H.values[m] * std::polar(1.0, f.at(m) * x0);
  buf.front() *= 0.5;
  buf.back() *= 0.5;
  detail::fft(buf, +1);
  const double scale = f.step / (2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i)
    buf[i] *= (i & 1) ? -scale : scale;
  ++g_inverse_count;
  return GridFunction(space, std::move(buf));
}

GridFunction inverse_ft(const GridFunction& H)
{
  const double h = 2.0 * std::numbers::pi / H.grid.span();
  const double x0 = std::isfinite(H.partner_origin)
                      ? H.partner_origin
                      : -h * static_cast<double>(H.grid.count / 2);
  return inverse_ft(H, UniformGrid(x0, h, H.grid.count));
}

GridFunction convolve_density(const GridFunction& f, const ErrorModel& error)
{
  const double mass = f.integral();
  if (std::abs(mass - 1.0) > 1e-6)
    throw NormalizationError("convolve_density: input integrates to " +
                             std::to_string(mass) + ", expected 1");
  GridFunction F = forward_ft(f);
  for (std::size_t m = 0; m < F.size(); ++m)
    F.values[m] *= error.char_fn(F.grid.at(m));
  GridFunction g = inverse_ft(F, f.grid);
  for (auto& v : g.values)
    v = cplx(v.real(), 0.0);
  return g;
}

std::uint64_t inverse_ft_count()
{
  return g_inverse_count.load();
}

} // namespace wdecon

#include "wdecon/grid.hpp"
#include "wdecon/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

namespace wdecon {

bool is_power_of_two(std::size_t n)
{
  return n >= 1 && (n & (n - 1)) == 0;
}

UniformGrid::UniformGrid(double origin, double step, std::size_t count)
  : origin(origin)
  , step(step)
  , count(count)
{
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(origin))
    throw ConfigurationError("grid step must be positive and finite");
  if (count < 2 || !is_power_of_two(count))
    throw ConfigurationError("grid count must be a power of two >= 2, got " +
                             std::to_string(count));
}

UniformGrid UniformGrid::centered(double half_width, std::size_t count)
{
  return UniformGrid(-half_width, 2.0 * half_width / static_cast<double>(count), count);
}

UniformGrid UniformGrid::from_range(double lo, double hi, std::size_t count)
{
  if (!(hi > lo))
    throw ConfigurationError("grid range must satisfy lo < hi");
  return UniformGrid(lo, (hi - lo) / static_cast<double>(count), count);
}

UniformGrid UniformGrid::dual() const
{
  const double dt = 2.0 * std::numbers::pi / span();
  return UniformGrid(-dt * static_cast<double>(count / 2), dt, count);
}

bool UniformGrid::pairs_with(const UniformGrid& other) const
{
  if (other.count != count)
    return false;
  const double prod = step * other.step * static_cast<double>(count);
  if (std::abs(prod - 2.0 * std::numbers::pi) > 1e-9 * 2.0 * std::numbers::pi)
    return false;
  // one of the two must be the centered frequency grid
  const auto centered_ok = [](const UniformGrid& g) {
    const double want = -g.step * static_cast<double>(g.count / 2);
    return std::abs(g.origin - want) <= 1e-9 * std::abs(want);
  };
  return centered_ok(*this) || centered_ok(other);
}

bool operator==(const UniformGrid& a, const UniformGrid& b)
{
  return a.origin == b.origin && a.step == b.step && a.count == b.count;
}

GridFunction::GridFunction(const UniformGrid& g)
  : grid(g)
  , values(g.count)
{}

GridFunction::GridFunction(const UniformGrid& g, std::vector<cplx> v)
  : grid(g)
  , values(std::move(v))
{
  if (values.size() != grid.count)
    throw ConfigurationError("grid function length does not match grid count");
}

std::vector<double> GridFunction::real() const
{
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [](const cplx& z) { return z.real(); });
  return out;
}

double GridFunction::max_abs() const
{
  double m = 0.0;
  for (const auto& z : values)
    m = std::max(m, std::abs(z));
  return m;
}

double GridFunction::max_abs_imag() const
{
  double m = 0.0;
  for (const auto& z : values)
    m = std::max(m, std::abs(z.imag()));
  return m;
}

bool GridFunction::is_real(double tol) const
{
  const double scale = std::max(max_abs(), 1e-300);
  return max_abs_imag() <= tol * scale;
}

double GridFunction::integral() const
{
  double s = 0.0;
  for (const auto& z : values)
    s += z.real();
  s -= 0.5 * (values.front().real() + values.back().real());
  return s * grid.step;
}

void write_csv(const GridFunction& f, std::ostream& os)
{
  const bool real = f.is_real();
  os << std::setprecision(17);
  os << (real ? "x,value\n" : "x,re,im\n");
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << f.grid.at(i) << ',' << f.values[i].real();
    if (!real)
      os << ',' << f.values[i].imag();
    os << '\n';
  }
}

void write_csv(const GridFunction& f, const std::string& path)
{
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot open " + path + " for writing");
  write_csv(f, os);
}

CubicTable::CubicTable(double origin, double step, std::vector<double> values)
  : origin_(origin)
  , step_(step)
  , inv_step_(1.0 / step)
  , v_(std::move(values))
{
  if (v_.size() < 4)
    throw ConfigurationError("cubic table needs at least four nodes");
}

CubicTable::CubicTable(const GridFunction& f)
  : CubicTable(f.grid.origin, f.grid.step, f.real())
{}

void CubicTable::locate(double x, std::ptrdiff_t& i, double w[4]) const
{
  const double p = (x - origin_) * inv_step_;
  const auto n = static_cast<std::ptrdiff_t>(v_.size());
  i = static_cast<std::ptrdiff_t>(std::floor(p));
  i = std::clamp<std::ptrdiff_t>(i, 1, n - 3);
  weights(p - static_cast<double>(i), w);
}

double CubicTable::operator()(double x, bool* truncated) const
{
  if (!(x >= lo() && x <= hi())) {
    if (truncated)
      *truncated = true;
    return 0.0;
  }
  std::ptrdiff_t i;
  double w[4];
  locate(x, i, w);
  const double* v = v_.data() + i - 1;
  return w[0] * v[0] + w[1] * v[1] + w[2] * v[2] + w[3] * v[3];
}

} // namespace wdecon

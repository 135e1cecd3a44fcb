#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace wdecon {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n);

//! Uniform abscissae origin + i*step, i = 0..count-1. count must be a power
//! of two so the grid can be handed to the FFT directly.
struct UniformGrid
{
  double origin = 0.0;
  double step = 1.0;
  std::size_t count = 2;

  UniformGrid() = default;
  UniformGrid(double origin, double step, std::size_t count);

  //! [-half_width, half_width) with zero on node count/2.
  static UniformGrid centered(double half_width, std::size_t count);
  //! count nodes starting at lo with the given step.
  static UniformGrid from_range(double lo, double hi, std::size_t count);

  double at(std::size_t i) const { return origin + step * static_cast<double>(i); }
  double back() const { return at(count - 1); }
  double span() const { return step * static_cast<double>(count); }
  bool contains(double x) const { return x >= origin && x <= back(); }

  //! Frequency grid paired with this one: spacing 2pi/(count*step), centered
  //! so that t = 0 sits on node count/2.
  UniformGrid dual() const;
  //! True if `other` is the FFT partner of this grid (either direction).
  bool pairs_with(const UniformGrid& other) const;
};

bool operator==(const UniformGrid& a, const UniformGrid& b);

struct GridFunction
{
  UniformGrid grid;
  std::vector<cplx> values;
  //! Set by forward_ft when the input carried mass at the grid edges.
  bool edge_warning = false;
  //! Origin of the space grid a spectrum came from (NaN if none), so that
  //! inverse_ft can return to the same abscissae.
  double partner_origin = std::numeric_limits<double>::quiet_NaN();

  GridFunction() = default;
  explicit GridFunction(const UniformGrid& g);
  GridFunction(const UniformGrid& g, std::vector<cplx> v);

  template<class F>
  static GridFunction sample(const UniformGrid& g, F&& fn)
  {
    GridFunction out(g);
    for (std::size_t i = 0; i < g.count; ++i)
      out.values[i] = cplx(fn(g.at(i)));
    return out;
  }

  std::size_t size() const { return values.size(); }
  std::vector<double> real() const;
  double max_abs() const;
  double max_abs_imag() const;
  bool is_real(double tol = 1e-12) const;
  //! Trapezoid rule on the real part.
  double integral() const;
};

//! Two columns (x, value) when real, three (x, re, im) otherwise.
void write_csv(const GridFunction& f, std::ostream& os);
void write_csv(const GridFunction& f, const std::string& path);

//! Four-point Lagrange interpolation on a uniform table of reals.
class CubicTable
{
public:
  CubicTable() = default;
  CubicTable(double origin, double step, std::vector<double> values);
  explicit CubicTable(const GridFunction& f);

  double origin() const { return origin_; }
  double step() const { return step_; }
  std::size_t size() const { return v_.size(); }
  double lo() const { return origin_; }
  double hi() const { return origin_ + step_ * static_cast<double>(v_.size() - 1); }
  const std::vector<double>& values() const { return v_; }

  //! Returns 0 and sets *truncated outside [lo, hi].
  double operator()(double x, bool* truncated = nullptr) const;

  //! Stencil lookup: p = (x - origin)/step, i = floor(p) clamped so that
  //! nodes i-1..i+2 exist; w receives the Lagrange weights.
  static void weights(double t, double w[4])
  {
    const double tm1 = t - 1.0, tm2 = t - 2.0, tp1 = t + 1.0;
    w[0] = -t * tm1 * tm2 / 6.0;
    w[1] = tp1 * tm1 * tm2 / 2.0;
    w[2] = -tp1 * t * tm2 / 2.0;
    w[3] = tp1 * t * tm1 / 6.0;
  }
  void locate(double x, std::ptrdiff_t& i, double w[4]) const;

private:
  double origin_ = 0.0;
  double step_ = 1.0;
  double inv_step_ = 1.0;
  std::vector<double> v_;
};

} // namespace wdecon

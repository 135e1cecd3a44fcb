#pragma once

#include "wdecon/grid.hpp"
#include "wdecon/random.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wdecon {

struct MeyerBasis;

enum class ErrorKind { dirac, gaussian, laplace, cauchy, custom };
enum class Regime { none, moderately_ill_posed, severely_ill_posed };

//! Lower envelope |F[phi](t)| >= C (1+t^2)^{-w/2} exp(-c0 |t|^alpha).
struct DecayClass
{
  double C = 1.0;
  double w = 0.0;
  double c0 = 0.0;
  double alpha = 1.0;
  Regime regime = Regime::none;

  double envelope(double t) const;
};

using NoiseSampler = std::function<double(Rng&)>;

class ErrorModel
{
public:
  static ErrorModel dirac();
  static ErrorModel gaussian(double sigma);
  static ErrorModel laplace(double b);
  static ErrorModel cauchy(double gamma);

  //! Tabulated characteristic function on a symmetric, strictly increasing
  //! t-range that must reach 2^{j_max} * a. Without a decay class a
  //! conservative one (C = min |F|, w = 0) is derived from the table.
  static ErrorModel custom(std::vector<double> t,
                           std::vector<cplx> ft,
                           int j_max,
                           std::optional<DecayClass> decay = std::nullopt,
                           NoiseSampler sampler = {});
  //! CSV rows (t, re, im); j_max is the largest level the table covers.
  static ErrorModel from_csv(const std::string& path);
  //! "dirac", "gaussian:0.25", "laplace:1", "cauchy:0.5", "custom:file.csv".
  static ErrorModel parse(const std::string& spec);

  ErrorKind kind() const { return kind_; }
  double parameter() const { return param_; }
  const DecayClass& decay() const { return decay_; }
  int j_max() const { return j_max_; }
  std::string id() const;

  cplx char_fn(double t) const;
  bool has_sampler() const;
  double draw(Rng& rng) const;

  //! Tabulation used by custom models (empty for built-ins).
  const std::vector<double>& table_t() const;

private:
  struct Table;
  ErrorKind kind_ = ErrorKind::dirac;
  double param_ = 0.0;
  DecayClass decay_;
  int j_max_ = 64;
  std::shared_ptr<const Table> table_;
  NoiseSampler sampler_;

  void check_envelope(double t_max) const;
};

cplx char_fn(const ErrorModel& model, double t);

//! min_{|t| <= 2^j a} |F[phi](t)|; IllPosednessError below 1e-300.
double delta_j(const ErrorModel& model, const MeyerBasis& basis, double j);
double delta_j(const ErrorModel& model, double a, double j);

std::vector<double> sample_noise(const ErrorModel& model, std::size_t n, std::uint64_t seed);

} // namespace wdecon

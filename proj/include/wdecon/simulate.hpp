#pragma once

#include "wdecon/confidence.hpp"
#include "wdecon/error_model.hpp"
#include "wdecon/estimators.hpp"
#include "wdecon/grid.hpp"
#include "wdecon/meyer.hpp"
#include "wdecon/random.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wdecon {

struct GaussianComponent
{
  double weight = 1.0;
  double mu = 0.0;
  double sigma = 1.0;
};

//! Membership certificate for the supersmooth class:
//! (1/2pi) \int |F[f](t)|^2 exp(2 c0 |t|^s) dt <= L.
struct SupersmoothCert
{
  double c0_tilde = 0.0;
  double s = 0.0;
  double L = 0.0;
};

class TestDensity
{
public:
  enum class Kind { scaled_cauchy, cauchy_plus_bump, gaussian, gaussian_mixture };

  static TestDensity scaled_cauchy(double eta);
  static TestDensity gaussian(double mu, double sigma);
  static TestDensity mixture(std::vector<GaussianComponent> components);
  //! N(0, sigma^2) certified in the supersmooth class with s = 2; needs
  //! c0_tilde < sigma^2 / 2 (L is computed in closed form).
  static TestDensity supersmooth(double sigma, double c0_tilde);
  //! f0 + c' 2^{-j(s+1/2)} psi_{j,shift} with f0 the Cauchy(eta) density.
  static TestDensity cauchy_plus_bump(double eta, int j, long shift, double c_prime, double s,
                                      std::shared_ptr<const MeyerBasis> basis);

  Kind kind() const { return kind_; }
  std::string describe() const;

  double pdf(double x) const;
  cplx char_fn(double t) const;
  double draw(Rng& rng) const;
  //! 1 - \int_lo^hi f; the bump part (zero mean, tiny tails) is ignored.
  double mass_outside(double lo, double hi) const;

  const std::vector<GaussianComponent>& components() const { return comps_; }
  double eta() const { return eta_; }
  const std::optional<SupersmoothCert>& supersmooth_cert() const { return cert_; }
  const std::optional<BesovSpec>& besov() const { return besov_; }
  void set_besov(const BesovSpec& b) { besov_ = b; }

private:
  Kind kind_ = Kind::gaussian;
  std::vector<GaussianComponent> comps_;
  double eta_ = 1.0;
  // bump
  int j_ = 0;
  long shift_ = 0;
  double c_prime_ = 0.0, s_ = 0.0, amp_ = 0.0, accept_bound_ = 1.0;
  std::shared_ptr<const MeyerBasis> basis_;
  std::optional<SupersmoothCert> cert_;
  std::optional<BesovSpec> besov_;
};

//! n draws of Y = X + eps; X from stream 0 and eps from stream 1 of `seed`.
std::vector<double> sample_xy(const TestDensity& density, const ErrorModel& model, std::size_t n,
                              std::uint64_t seed);

//! K_j(f) on the grid from the closed-form spectrum of f.
std::vector<double> project_density(const TestDensity& density, const MeyerBasis& basis, double j,
                                    const UniformGrid& grid);

struct LowerBoundFamily
{
  double eta = 0.0;     // Cauchy scale with |f0|_{s,inf,inf} <= L/2
  double c_prime = 0.0; // bump amplitude, <= L/2
  long M = 0;           // translate spacing
  double x_max = 0.0;   // argmax |psi|
  double psi_sup = 0.0;
  int j = 0;
  double s = 0.0, L = 0.0;
  std::vector<TestDensity> densities; // f0 then f_1..f_count
  //! 2^{-js} c' |psi|_inf / 2
  double separation_bound() const;
};

//! Smallest spacing M with |psi(x_max + x)| <= |psi|_inf / 2 for |x| >= M.
long half_peak_spacing(const MeyerBasis& basis, double* x_max = nullptr);

//! M = 0 selects half_peak_spacing. Throws ConstructionError when no
//! admissible c' > 1e-6 exists.
LowerBoundFamily lower_bound_family(std::shared_ptr<const MeyerBasis> basis, int j, double s,
                                    double L, long M, int count);

struct EstimatorSpec
{
  enum class Kind { linear, threshold, oracle };
  Kind kind = Kind::linear;
  std::optional<ResolutionRule> rule; // linear: level rule
  double j = -1.0;                    // linear: fixed level when rule is empty
  double kappa_prime = kDefaultKappaPrime;
  int j1 = -1;    // threshold: top level; < 0 selects the threshold_top rule
  double G = 0.0; // threshold: <= 0 estimates G from the data
  bool clip = false;

  std::string describe() const;
};

struct RiskConfig
{
  TestDensity density = TestDensity::gaussian(0.0, 1.0);
  ErrorModel model = ErrorModel::dirac();
  EstimatorSpec estimator;
  std::vector<std::size_t> ladder;
  int n_mc = 200;
  std::uint64_t seed = 1;
  UniformGrid grid = UniformGrid::from_range(-8.0, 8.0, 1024);
  int threads = 1;
  double target_slope = std::numeric_limits<double>::quiet_NaN();
};

struct RateFit
{
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double ci_lo = std::numeric_limits<double>::quiet_NaN();
  double ci_hi = std::numeric_limits<double>::quiet_NaN();
  bool defined = false; // false when some risk is zero
};

struct RiskReport
{
  std::string estimator, density, model;
  std::vector<std::size_t> ladder;
  std::vector<double> levels; // j (linear) or j1 (threshold) per ladder entry
  std::vector<double> risks;
  std::vector<double> mc_std_errors;
  int n_mc = 0;
  std::uint64_t seed = 0;
  RateFit fit;
  double target_slope = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> replications; // sup errors per ladder entry
};

//! Monte Carlo E sup_x |f^ - f| over the grid for each n in the ladder.
//! Replication r at size n draws from seed derive_seed(seed, n, r); the
//! report is identical for any thread count.
RiskReport sup_norm_risk(const RiskConfig& cfg, const MeyerBasis& basis);

//! OLS of log risk on log n with a 95% t interval. Throws InsufficiencyError
//! below four points; a zero risk makes the slope undefined.
RateFit rate_fit(const std::vector<std::size_t>& ladder, const std::vector<double>& risks);
RateFit rate_fit(const RiskReport& report);

enum class CoverageTarget { mean_band, density_band };

struct BandConfig
{
  double j = 3.0;
  double z = 1.0;
  double delta = 0.0;
  BandVariant variant = BandVariant::paper;
  int n_sign_draws = 1;
  CoverageTarget target = CoverageTarget::mean_band;
  GSupSource g_source = GSupSource::pilot;
};

struct CoverageReport
{
  BandConfig band;
  std::string density, model;
  std::size_t n = 0;
  int replications = 0;
  int hits = 0;
  double empirical_coverage = 0.0;
  double nominal = 0.0;
  double mean_half_width = 0.0;
  double mean_sup_deviation = 0.0;
  std::uint64_t seed = 0;
  // per replication, for re-evaluating other (z, variant) on the same draws
  std::vector<double> sup_deviation, R_n, g_sup, n_used;
  double delta_j = 1.0;
};

//! Replication r draws from derive_seed(seed, n, r) and signs from a seed
//! derived from the same pair.
CoverageReport coverage_experiment(const BandConfig& band, const TestDensity& density,
                                   const ErrorModel& model, std::size_t n, int n_mc,
                                   std::uint64_t seed, const MeyerBasis& basis,
                                   const UniformGrid& grid, int threads = 1);

//! The same replications scored with another z, delta or variant.
CoverageReport rescore(const CoverageReport& report, double z, double delta, BandVariant variant,
                       const MeyerBasis& basis);

struct BiasRow
{
  int j = 0;
  double gap = 0.0;   // sup |K_j f - f| on the grid
  double shape = 0.0; // sqrt(L) 2^{j(1-s)/2} exp(-c0 a'^s 2^{js})
  double bound = 0.0; // c''' * shape
};

struct BiasCheck
{
  std::vector<BiasRow> rows;
  double c3 = 0.0; // fitted c''' = max gap / shape
};

//! Needs a density with a supersmooth certificate.
BiasCheck bias_check(const TestDensity& density, const MeyerBasis& basis,
                     const std::vector<int>& j_ladder, const UniformGrid& grid);

//! sup |K_j f - f| on the grid for a tabulated f.
double projection_gap(const GridFunction& f, const MeyerBasis& basis, double j);

} // namespace wdecon

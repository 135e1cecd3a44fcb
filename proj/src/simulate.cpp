#include "wdecon/simulate.hpp"
#include "wdecon/deconv.hpp"
#include "wdecon/error.hpp"
#include "parallel.hpp"
#include "translate_sums.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace wdecon {

using std::numbers::pi;

namespace {

double cauchy_pdf(double eta, double x)
{
  return eta / (pi * (eta * eta + x * x));
}

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> tabulate(const TestDensity& f, const UniformGrid& g)
{
  std::vector<double> v(g.count);
  for (std::size_t i = 0; i < g.count; ++i)
    v[i] = f.pdf(g.at(i));
  return v;
}

std::string fmt(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

} // namespace

// ---------------------------------------------------------------- densities

TestDensity TestDensity::scaled_cauchy(double eta)
{
  if (!(eta > 0.0))
    throw DomainError("Cauchy scale must be positive");
  TestDensity d;
  d.kind_ = Kind::scaled_cauchy;
  d.eta_ = eta;
  return d;
}

TestDensity TestDensity::gaussian(double mu, double sigma)
{
  return mixture({ { 1.0, mu, sigma } });
}

TestDensity TestDensity::mixture(std::vector<GaussianComponent> components)
{
  if (components.empty())
    throw DomainError("mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0) || !(c.sigma > 0.0) || !std::isfinite(c.mu))
      throw DomainError("mixture components need weight > 0, sigma > 0 and finite mu");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw NormalizationError("mixture weights sum to " + fmt(total) + ", not 1");
  TestDensity d;
  d.kind_ = components.size() == 1 ? Kind::gaussian : Kind::gaussian_mixture;
  d.comps_ = std::move(components);
  return d;
}

TestDensity TestDensity::supersmooth(double sigma, double c0_tilde)
{
  if (!(c0_tilde > 0.0) || !(c0_tilde < 0.5 * sigma * sigma))
    throw DomainError("supersmooth certificate needs 0 < c0 < sigma^2/2");
  TestDensity d = gaussian(0.0, sigma);
  d.cert_ = SupersmoothCert{ c0_tilde, 2.0, std::sqrt(pi / (sigma * sigma - 2.0 * c0_tilde)) / (2.0 * pi) };
  return d;
}

TestDensity TestDensity::cauchy_plus_bump(double eta, int j, long shift, double c_prime, double s,
                                          std::shared_ptr<const MeyerBasis> basis)
{
  if (!basis)
    throw ConfigurationError("cauchy_plus_bump needs a basis");
  TestDensity d = scaled_cauchy(eta);
  d.kind_ = Kind::cauchy_plus_bump;
  d.j_ = j;
  d.shift_ = shift;
  d.c_prime_ = c_prime;
  d.s_ = s;
  d.amp_ = c_prime * std::exp2(-j * s);
  d.basis_ = std::move(basis);

  // rejection constant sup f / f0 over the bump support
  const GridFunction& psi = d.basis_->psi;
  double worst = 1.0;
  const double sc = std::ldexp(1.0, j);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double u = psi.grid.at(i);
    const double x = (u + static_cast<double>(shift)) / sc;
    const double f = cauchy_pdf(eta, x) + d.amp_ * psi.values[i].real();
    if (f < -1e-12 * cauchy_pdf(eta, x))
      throw ConstructionError("bump density is negative at x = " + fmt(x));
    worst = std::max(worst, f / cauchy_pdf(eta, x));
  }
  d.accept_bound_ = 1.05 * worst;
  return d;
}

std::string TestDensity::describe() const
{
  std::ostringstream os;
  switch (kind_) {
    case Kind::scaled_cauchy: os << "scaled_cauchy(eta=" << eta_ << ")"; break;
    case Kind::cauchy_plus_bump:
      os << "cauchy_plus_bump(eta=" << eta_ << ",j=" << j_ << ",shift=" << shift_ << ",c'=" << c_prime_
         << ",s=" << s_ << ")";
      break;
    case Kind::gaussian:
      if (cert_)
        os << "supersmooth(sigma=" << comps_[0].sigma << ",c0=" << cert_->c0_tilde << ",s=" << cert_->s
           << ",L=" << cert_->L << ")";
      else
        os << "gaussian(mu=" << comps_[0].mu << ",sigma=" << comps_[0].sigma << ")";
      break;
    case Kind::gaussian_mixture:
      os << "gaussian_mixture(";
      for (std::size_t i = 0; i < comps_.size(); ++i)
        os << (i ? ";" : "") << comps_[i].weight << "*N(" << comps_[i].mu << "," << comps_[i].sigma << ")";
      os << ")";
      break;
  }
  return os.str();
}

double TestDensity::pdf(double x) const
{
  switch (kind_) {
    case Kind::scaled_cauchy: return cauchy_pdf(eta_, x);
    case Kind::cauchy_plus_bump:
      return cauchy_pdf(eta_, x) + amp_ * basis_->psi_table(std::ldexp(x, j_) - static_cast<double>(shift_));
    case Kind::gaussian:
    case Kind::gaussian_mixture: {
      double v = 0.0;
      for (const auto& c : comps_) {
        const double u = (x - c.mu) / c.sigma;
        v += c.weight * std::exp(-0.5 * u * u) / (c.sigma * std::sqrt(2.0 * pi));
      }
      return v;
    }
  }
  return 0.0;
}

cplx TestDensity::char_fn(double t) const
{
  switch (kind_) {
    case Kind::scaled_cauchy: return std::exp(-eta_ * std::abs(t));
    case Kind::cauchy_plus_bump: {
      const double sc = std::ldexp(1.0, -j_);
      const cplx bump = amp_ * sc * std::polar(1.0, -t * static_cast<double>(shift_) * sc) *
                        basis_->spectrum.psi_ft(t * sc);
      return std::exp(-eta_ * std::abs(t)) + bump;
    }
    case Kind::gaussian:
    case Kind::gaussian_mixture: {
      cplx v = 0.0;
      for (const auto& c : comps_)
        v += c.weight * std::polar(std::exp(-0.5 * c.sigma * c.sigma * t * t), -c.mu * t);
      return v;
    }
  }
  return 0.0;
}

double TestDensity::draw(Rng& rng) const
{
  switch (kind_) {
    case Kind::scaled_cauchy: return eta_ * std::tan(pi * (uniform_open(rng) - 0.5));
    case Kind::cauchy_plus_bump:
      for (;;) {
        const double x = eta_ * std::tan(pi * (uniform_open(rng) - 0.5));
        if (uniform_open(rng) * accept_bound_ * cauchy_pdf(eta_, x) <= pdf(x))
          return x;
      }
    case Kind::gaussian:
    case Kind::gaussian_mixture: {
      std::size_t i = 0;
      if (comps_.size() > 1) {
        double u = uniform_open(rng);
        while (i + 1 < comps_.size() && u > comps_[i].weight) {
          u -= comps_[i].weight;
          ++i;
        }
      }
      std::normal_distribution<double> nd(comps_[i].mu, comps_[i].sigma);
      return nd(rng);
    }
  }
  return 0.0;
}

double TestDensity::mass_outside(double lo, double hi) const
{
  switch (kind_) {
    case Kind::scaled_cauchy:
    case Kind::cauchy_plus_bump: return 1.0 - (std::atan(hi / eta_) - std::atan(lo / eta_)) / pi;
    case Kind::gaussian:
    case Kind::gaussian_mixture: {
      double m = 0.0;
      for (const auto& c : comps_)
        m += c.weight * 0.5 *
             (std::erfc((hi - c.mu) / (c.sigma * std::sqrt(2.0))) + std::erfc((c.mu - lo) / (c.sigma * std::sqrt(2.0))));
      return m;
    }
  }
  return 0.0;
}

std::vector<double> sample_xy(const TestDensity& density, const ErrorModel& model, std::size_t n,
                              std::uint64_t seed)
{
  if (n < 1)
    throw DomainError("sample_xy needs n >= 1");
  Rng rx = make_rng(seed, 0), re = make_rng(seed, 1);
  const bool noisy = model.kind() != ErrorKind::dirac;
  std::vector<double> y(n);
  for (auto& v : y) {
    v = density.draw(rx);
    if (noisy)
      v += model.draw(re);
  }
  return y;
}

std::vector<double> project_density(const TestDensity& density, const MeyerBasis& basis, double j,
                                    const UniformGrid& grid)
{
  const detail::KRange range = detail::grid_krange(grid, std::exp2(j), basis.translate_radius);
  const std::vector<double> a = scaling_coefficients(
    [&](double t) { return density.char_fn(t); }, basis, j, range.lo, range.hi);
  return synthesize(a, range.lo, j, basis, grid);
}

double projection_gap(const GridFunction& f, const MeyerBasis& basis, double j)
{
  const UniformGrid& g = f.grid;
  const double sc = std::exp2(j);
  const long R = basis.translate_radius;
  const detail::KRange range = detail::grid_krange(g, sc, R);
  std::vector<double> a(range.size(), 0.0);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double w = (i == 0 || i + 1 == g.count) ? 0.5 * g.step : g.step;
    detail::scatter(basis.phi_table, basis.nodes_per_unit, R, sc * g.at(i), w * f.values[i].real(), range,
                    a.data());
  }
  const std::vector<double> K = synthesize(a, range.lo, j, basis, g);
  return sup_abs_diff(K, f.real());
}

// ---------------------------------------------------------- lower bounds

double LowerBoundFamily::separation_bound() const
{
  return std::exp2(-j * s) * c_prime * psi_sup / 2.0;
}

long half_peak_spacing(const MeyerBasis& basis, double* x_max)
{
  const GridFunction& psi = basis.psi;
  std::size_t imax = 0;
  double peak = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (std::abs(psi.values[i]) > peak) {
      peak = std::abs(psi.values[i]);
      imax = i;
    }
  const double xm = psi.grid.at(imax);
  double dmax = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (std::abs(psi.values[i]) > peak / 2.0)
      dmax = std::max(dmax, std::abs(psi.grid.at(i) - xm));
  if (x_max)
    *x_max = xm;
  return static_cast<long>(std::floor(dmax)) + 1;
}

LowerBoundFamily lower_bound_family(std::shared_ptr<const MeyerBasis> basis, int j, double s,
                                    double L, long M, int count)
{
  if (!basis)
    throw ConfigurationError("lower_bound_family needs a basis");
  if (j < 1 || count < 1 || count > (1 << j) - 1)
    throw DomainError("lower_bound_family needs j >= 1 and 1 <= count <= 2^j - 1");
  if (!(s > 0.0) || !(L > 0.0))
    throw DomainError("lower_bound_family needs s > 0 and L > 0");
  LowerBoundFamily fam;
  fam.j = j;
  fam.s = s;
  fam.L = L;
  fam.M = M > 0 ? M : half_peak_spacing(*basis, &fam.x_max);
  if (M > 0)
    half_peak_spacing(*basis, &fam.x_max);
  fam.psi_sup = basis->psi_sup;

  // smallest eta with |f0|_{s,inf,inf} <= L/2 (the norm falls as eta grows)
  const BesovSpec spec{ s, BesovSpec::inf, BesovSpec::inf, L };
  auto norm = [&](double eta) {
    return besov_norm([eta](double t) { return cplx(std::exp(-eta * std::abs(t))); }, *basis, spec,
                      std::max(j + 2, 8), 4.0);
  };
  double hi = 1.0;
  while (norm(hi) > L / 2.0) {
    hi *= 2.0;
    if (hi > 1e6)
      throw ConstructionError("no Cauchy scale reaches Besov norm L/2");
  }
  double lo = hi / 2.0;
  while (norm(lo) <= L / 2.0 && lo > 1e-6) {
    hi = lo;
    lo /= 2.0;
  }
  for (int it = 0; it < 50; ++it) {
    const double mid = std::sqrt(lo * hi);
    (norm(mid) <= L / 2.0 ? hi : lo) = mid;
  }
  fam.eta = hi;

  // largest c' <= L/2 keeping every f_k nonnegative on the bump support
  const GridFunction& psi = basis->psi;
  const double sc = std::ldexp(1.0, j);
  auto feasible = [&](double c) {
    const double amp = c * std::exp2(-j * s);
    for (int k = 1; k <= count; ++k)
      for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = (psi.grid.at(i) + static_cast<double>(fam.M * k)) / sc;
        if (cauchy_pdf(fam.eta, x) + amp * psi.values[i].real() < 0.0)
          return false;
      }
    return true;
  };
  double c_lo = 0.0, c_hi = L / 2.0;
  if (feasible(c_hi)) {
    c_lo = c_hi;
  } else {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (c_lo + c_hi);
      (feasible(mid) ? c_lo : c_hi) = mid;
    }
  }
  if (!(c_lo > 1e-6))
    throw ConstructionError("no admissible bump amplitude c' > 1e-6");
  fam.c_prime = c_lo;

  TestDensity f0 = TestDensity::scaled_cauchy(fam.eta);
  f0.set_besov(spec);
  fam.densities.push_back(f0);
  for (int k = 1; k <= count; ++k) {
    TestDensity fk = TestDensity::cauchy_plus_bump(fam.eta, j, fam.M * k, fam.c_prime, s, basis);
    fk.set_besov(spec);
    fam.densities.push_back(std::move(fk));
  }
  return fam;
}

// ------------------------------------------------------------ risk ladder

std::string EstimatorSpec::describe() const
{
  std::ostringstream os;
  switch (kind) {
    case Kind::oracle: os << "oracle"; break;
    case Kind::linear:
      os << "linear(";
      if (rule)
        os << rule->describe();
      else
        os << "j=" << j;
      os << ")";
      break;
    case Kind::threshold:
      os << "threshold(kappa'=" << kappa_prime << ",j1=" << (j1 >= 0 ? std::to_string(j1) : "rule")
         << ",G=" << (G > 0.0 ? fmt(G) : "estimated") << ")";
      break;
  }
  return os.str();
}

RateFit rate_fit(const std::vector<std::size_t>& ladder, const std::vector<double>& risks)
{
  if (ladder.size() != risks.size())
    throw ConfigurationError("rate_fit: ladder and risks differ in length");
  if (ladder.size() < 4)
    throw InsufficiencyError("rate_fit needs at least 4 ladder points, got " + std::to_string(ladder.size()));
  RateFit fit;
  for (double r : risks)
    if (!(r > 0.0))
      return fit;
  const std::size_t m = ladder.size();
  double sx = 0, sy = 0;
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = std::log(static_cast<double>(ladder[i]));
    y[i] = std::log(risks[i]);
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0))
    throw InsufficiencyError("rate_fit needs distinct ladder points");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  const double dof = static_cast<double>(m - 2);
  fit.std_error = std::sqrt(rss / dof / sxx);
  const double tq = boost::math::quantile(boost::math::students_t(dof), 0.975);
  fit.ci_lo = fit.slope - tq * fit.std_error;
  fit.ci_hi = fit.slope + tq * fit.std_error;
  fit.defined = true;
  return fit;
}

RateFit rate_fit(const RiskReport& report)
{
  return rate_fit(report.ladder, report.risks);
}

RiskReport sup_norm_risk(const RiskConfig& cfg, const MeyerBasis& basis)
{
  if (cfg.n_mc < 50)
    throw DomainError("sup_norm_risk needs n_mc >= 50");
  if (cfg.ladder.empty())
    throw DomainError("sup_norm_risk needs a nonempty ladder");
  for (std::size_t i = 0; i < cfg.ladder.size(); ++i)
    if (cfg.ladder[i] < 2 || (i > 0 && cfg.ladder[i] <= cfg.ladder[i - 1]))
      throw DomainError("ladder must be strictly increasing with n >= 2");
  const EstimatorSpec& es = cfg.estimator;
  if (es.kind == EstimatorSpec::Kind::linear && !es.rule && !(es.j >= 0.0))
    throw ConfigurationError("linear estimator needs a rule or a level j >= 0");

  RiskReport rep;
  rep.estimator = es.describe();
  rep.density = cfg.density.describe();
  rep.model = cfg.model.id();
  rep.ladder = cfg.ladder;
  rep.n_mc = cfg.n_mc;
  rep.seed = cfg.seed;
  rep.target_slope = cfg.target_slope;

  const std::vector<double> f = tabulate(cfg.density, cfg.grid);
  std::map<double, DeconvAtoms> atoms;
  auto atoms_at = [&](double j) -> const DeconvAtoms& {
    auto it = atoms.find(j);
    if (it == atoms.end())
      it = atoms.emplace(j, build_atoms(cfg.model, basis, j)).first;
    return it->second;
  };

  for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
    const std::size_t n = cfg.ladder[i];
    std::vector<double> errs(static_cast<std::size_t>(cfg.n_mc), 0.0);
    double level = std::numeric_limits<double>::quiet_NaN();

    if (es.kind == EstimatorSpec::Kind::linear) {
      level = es.rule ? select_resolution(*es.rule, static_cast<double>(n), cfg.model, basis) : es.j;
      const DeconvAtoms& at = atoms_at(level);
      detail::parallel_for(errs.size(), cfg.threads, [&](std::size_t r) {
        const auto y = sample_xy(cfg.density, cfg.model, n, derive_seed(cfg.seed, n, r));
        const LinearEstimate e = linear_estimate(y, at, basis, cfg.grid, { es.clip });
        errs[r] = sup_abs_diff(e.values, f);
      });
    } else if (es.kind == EstimatorSpec::Kind::threshold) {
      int j1 = es.j1;
      if (j1 < 0) {
        ResolutionRule top;
        top.kind = ResolutionRule::Kind::threshold_top;
        top.w = std::numeric_limits<double>::quiet_NaN();
        j1 = static_cast<int>(select_resolution(top, static_cast<double>(n), cfg.model, basis));
      }
      level = j1;
      std::vector<DeconvAtoms> levels;
      for (int l = 0; l < std::max(j1, 1); ++l)
        levels.push_back(atoms_at(l));
      detail::parallel_for(errs.size(), cfg.threads, [&](std::size_t r) {
        const auto y = sample_xy(cfg.density, cfg.model, n, derive_seed(cfg.seed, n, r));
        ThresholdConfig tc;
        tc.kappa_prime = es.kappa_prime;
        tc.w = cfg.model.decay().w;
        tc.j1 = j1;
        tc.G = es.G > 0.0 ? es.G : estimate_G(y, basis, cfg.grid);
        const LinearEstimate e = threshold_estimate(y, levels, basis, tc, cfg.grid, { es.clip });
        errs[r] = sup_abs_diff(e.values, f);
      });
    }
    // the oracle returns f itself: every error is zero

    const double mean = detail::pairwise_sum(errs) / cfg.n_mc;
    double ss = 0.0;
    for (double e : errs)
      ss += (e - mean) * (e - mean);
    rep.levels.push_back(level);
    rep.risks.push_back(mean);
    rep.mc_std_errors.push_back(std::sqrt(ss / (cfg.n_mc - 1) / cfg.n_mc));
    rep.replications.push_back(std::move(errs));
  }
  if (rep.ladder.size() >= 4)
    rep.fit = rate_fit(rep);
  return rep;
}

// ---------------------------------------------------------------- coverage

CoverageReport rescore(const CoverageReport& in, double z, double delta, BandVariant variant,
                       const MeyerBasis& basis)
{
  CoverageReport out = in;
  out.band.z = z;
  out.band.delta = delta;
  out.band.variant = variant;
  out.nominal = 1.0 - std::exp(-z);
  const BandConstants k = band_constants(basis);
  out.hits = 0;
  std::vector<double> widths(in.sup_deviation.size());
  for (std::size_t r = 0; r < in.sup_deviation.size(); ++r) {
    const double sigma = sigma_r(in.R_n[r], in.n_used[r], in.band.j, z, in.g_sup[r], in.delta_j, k, variant);
    widths[r] = sigma;
    if (in.sup_deviation[r] <= (1.0 + delta) * sigma)
      ++out.hits;
  }
  out.empirical_coverage = static_cast<double>(out.hits) / out.replications;
  out.mean_half_width = detail::pairwise_sum(widths) / out.replications;
  return out;
}

CoverageReport coverage_experiment(const BandConfig& band, const TestDensity& density,
                                   const ErrorModel& model, std::size_t n, int n_mc,
                                   std::uint64_t seed, const MeyerBasis& basis,
                                   const UniformGrid& grid, int threads)
{
  if (n_mc < 200)
    throw DomainError("coverage_experiment needs n_mc >= 200");
  if (n < 2)
    throw DomainError("coverage_experiment needs n >= 2");
  const DeconvAtoms atoms = build_atoms(model, basis, band.j);
  const std::vector<double> target = band.target == CoverageTarget::mean_band
                                       ? project_density(density, basis, band.j, grid)
                                       : tabulate(density, grid);
  CoverageReport rep;
  rep.band = band;
  rep.density = density.describe();
  rep.model = model.id();
  rep.n = n;
  rep.replications = n_mc;
  rep.seed = seed;
  rep.delta_j = atoms.delta_j;
  const std::size_t m = static_cast<std::size_t>(n_mc);
  rep.sup_deviation.assign(m, 0.0);
  rep.R_n.assign(m, 0.0);
  rep.g_sup.assign(m, 0.0);
  rep.n_used.assign(m, 0.0);
  detail::parallel_for(m, threads, [&](std::size_t r) {
    const std::uint64_t s = derive_seed(seed, n, r);
    const auto y = sample_xy(density, model, n, s);
    const LinearEstimate e = linear_estimate(y, atoms, basis, grid);
    rep.sup_deviation[r] = sup_abs_diff(e.values, target);
    rep.R_n[r] = rademacher_sup(y, atoms, basis, grid, derive_seed(s, 7), band.n_sign_draws).value;
    if (band.g_source == GSupSource::estimate) {
      double g = 0.0;
      for (double v : e.values)
        g = std::max(g, std::abs(v));
      rep.g_sup[r] = g;
    } else {
      rep.g_sup[r] = pilot_g_sup(y, basis, grid);
    }
    rep.n_used[r] = static_cast<double>(e.n_used());
  });
  rep.mean_sup_deviation = detail::pairwise_sum(rep.sup_deviation) / n_mc;
  return rescore(rep, band.z, band.delta, band.variant, basis);
}

// -------------------------------------------------------------------- bias

BiasCheck bias_check(const TestDensity& density, const MeyerBasis& basis,
                     const std::vector<int>& j_ladder, const UniformGrid& grid)
{
  const auto& cert = density.supersmooth_cert();
  if (!cert)
    throw ConfigurationError("bias_check needs a density with a supersmooth certificate");
  const std::vector<double> f = tabulate(density, grid);
  BiasCheck out;
  for (int j : j_ladder) {
    BiasRow row;
    row.j = j;
    row.gap = sup_abs_diff(project_density(density, basis, j, grid), f);
    row.shape = std::sqrt(cert->L) * std::exp2(j * (1.0 - cert->s) / 2.0) *
                std::exp(-cert->c0_tilde * std::pow(basis.a_prime, cert->s) * std::exp2(j * cert->s));
    out.c3 = std::max(out.c3, row.gap / row.shape);
    out.rows.push_back(row);
  }
  for (auto& r : out.rows)
    r.bound = out.c3 * r.shape;
  return out;
}

} // namespace wdecon

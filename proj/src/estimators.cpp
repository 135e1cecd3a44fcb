#include "wdecon/estimators.hpp"
#include "wdecon/error.hpp"
#include "translate_sums.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace wdecon {

using detail::KRange;

namespace {

void finish(LinearEstimate& est, const EstimateOptions& opt)
{
  if (!opt.clip)
    return;
  double mass = 0.0;
  for (auto& v : est.values) {
    v = std::max(v, 0.0);
    mass += v;
  }
  mass -= 0.5 * (est.values.front() + est.values.back());
  mass *= est.grid.step;
  if (mass > 0.0)
    for (auto& v : est.values)
      v /= mass;
}

// Samples whose translates reach the grid at the given scale; the rest are
// counted as dropped.
std::vector<double> admissible(std::span<const double> samples, const UniformGrid& grid,
                               double scale, long R, std::size_t& dropped)
{
  const double pad = (static_cast<double>(R) + 1.0) / scale;
  const double lo = grid.origin - pad, hi = grid.back() + pad;
  std::vector<double> kept;
  kept.reserve(samples.size());
  for (double y : samples)
    if (std::isfinite(y) && y >= lo && y <= hi)
      kept.push_back(y);
  dropped = samples.size() - kept.size();
  return kept;
}

std::string num(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

} // namespace

std::vector<double> synthesize(const std::vector<double>& coeff, long k_lo, double j,
                               const MeyerBasis& basis, const UniformGrid& grid)
{
  const double sc = std::exp2(j);
  const KRange range{ k_lo, k_lo + static_cast<long>(coeff.size()) - 1 };
  std::vector<double> out(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i)
    out[i] = sc * detail::gather(basis.phi_table, basis.nodes_per_unit, basis.translate_radius,
                                 sc * grid.at(i), range, coeff.data());
  return out;
}

LinearEstimate linear_estimate(std::span<const double> samples, const DeconvAtoms& atoms,
                               const MeyerBasis& basis, const UniformGrid& grid,
                               const EstimateOptions& opt)
{
  if (samples.empty())
    throw DomainError("linear_estimate needs at least one sample");
  const double sc = atoms.scale();
  const long R = basis.translate_radius;
  LinearEstimate est;
  est.j = atoms.j;
  est.grid = grid;
  est.n = samples.size();
  est.model_id = atoms.model_id;
  est.delta_j = atoms.delta_j;

  const std::vector<double> ys = admissible(samples, grid, sc, R, est.dropped);
  if (ys.empty())
    throw DomainError("linear_estimate: every sample lies outside the tabulation window");
  const KRange range = detail::grid_krange(grid, sc, R);
  std::vector<double> c(range.size(), 0.0);
  const double w = 1.0 / static_cast<double>(ys.size());
  for (double y : ys)
    detail::scatter(atoms.phi_table, atoms.nodes_per_unit, R, sc * y, w, range, c.data());
  est.values = synthesize(c, range.lo, atoms.j, basis, grid);
  finish(est, opt);
  return est;
}

CoefficientSet empirical_beta(std::span<const double> samples, const DeconvAtoms& atoms,
                              const MeyerBasis& basis, int l)
{
  if (samples.empty())
    throw DomainError("empirical_beta needs at least one sample");
  if (std::abs(atoms.j - l) > 1e-12)
    throw ConfigurationError("empirical_beta: atoms were built for level " + num(atoms.j) +
                             ", not " + std::to_string(l));
  const double sc = std::ldexp(1.0, l);
  const long R = basis.translate_radius;
  CoefficientSet out;
  out.level = l;
  out.n = samples.size();
  std::vector<double> ys;
  for (double y : samples)
    if (std::isfinite(y))
      ys.push_back(y);
  out.dropped = samples.size() - ys.size();
  if (ys.empty())
    throw DomainError("empirical_beta: no finite samples");
  const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
  out.k_lo = std::lround(sc * *mn) - R;
  out.k_hi = std::lround(sc * *mx) + R;
  const KRange range{ out.k_lo, out.k_hi };
  out.beta_hat.assign(range.size(), 0.0);
  const double w = std::sqrt(sc) / static_cast<double>(ys.size());
  for (double y : ys)
    detail::scatter(atoms.psi_table, atoms.nodes_per_unit, R, sc * y, w, range, out.beta_hat.data());
  return out;
}

double threshold_value(double n, int l, const ThresholdConfig& cfg)
{
  if (!(n >= 2.0))
    throw DomainError("threshold_value needs n >= 2");
  return cfg.G * cfg.kappa_prime * std::exp2(cfg.w * l) * std::sqrt(std::log(n) / n);
}

LinearEstimate threshold_estimate(std::span<const double> samples,
                                  const std::vector<DeconvAtoms>& levels,
                                  const MeyerBasis& basis, const ThresholdConfig& cfg,
                                  const UniformGrid& grid, const EstimateOptions& opt)
{
  if (samples.size() < 2)
    throw DomainError("threshold_estimate needs n >= 2");
  if (cfg.j1 < 0 || static_cast<int>(levels.size()) < std::max(cfg.j1, 1))
    throw ConfigurationError("threshold_estimate: atoms for levels 0..j1-1 are required");
  if (!(cfg.kappa_prime >= 0.0) || !(cfg.G >= 1.0))
    throw DomainError("threshold_estimate needs kappa' >= 0 and G >= 1");
  for (int l = 0; l < std::max(cfg.j1, 1); ++l)
    if (std::abs(levels[static_cast<std::size_t>(l)].j - l) > 1e-12)
      throw ConfigurationError("threshold_estimate: levels[l] must hold the level-l atoms");

  const long R = basis.translate_radius;
  LinearEstimate est;
  est.kind = "threshold";
  est.j = 0.0;
  est.j1 = cfg.j1;
  est.grid = grid;
  est.n = samples.size();
  est.model_id = levels[0].model_id;
  est.kappa_prime = cfg.kappa_prime;
  est.G = cfg.G;
  est.delta_j = levels[0].delta_j;

  const std::vector<double> ys = admissible(samples, grid, 1.0, R, est.dropped);
  if (ys.empty())
    throw DomainError("threshold_estimate: every sample lies outside the tabulation window");
  const double w = 1.0 / static_cast<double>(ys.size());
  const double n_eff = static_cast<double>(ys.size());

  // coarse part f_n(., 0)
  const KRange r0 = detail::grid_krange(grid, 1.0, R);
  std::vector<double> c(r0.size(), 0.0);
  for (double y : ys)
    detail::scatter(levels[0].phi_table, levels[0].nodes_per_unit, R, y, w, r0, c.data());
  est.values = synthesize(c, r0.lo, 0.0, basis, grid);

  for (int l = 0; l < cfg.j1; ++l) {
    const DeconvAtoms& at = levels[static_cast<std::size_t>(l)];
    const double sc = std::ldexp(1.0, l);
    const KRange rl = detail::grid_krange(grid, sc, R);
    std::vector<double> beta(rl.size(), 0.0);
    for (double y : ys)
      detail::scatter(at.psi_table, at.nodes_per_unit, R, sc * y, std::sqrt(sc) * w, rl, beta.data());
    const double tau = threshold_value(n_eff, l, cfg);
    bool any = false;
    for (std::size_t i = 0; i < beta.size(); ++i) {
      if (std::abs(beta[i]) > tau) {
        est.retained.emplace_back(l, rl.lo + static_cast<long>(i));
        beta[i] *= std::sqrt(sc); // psi_lk = 2^{l/2} psi(2^l x - k)
        any = true;
      } else {
        beta[i] = 0.0;
      }
    }
    if (!any)
      continue;
    for (std::size_t i = 0; i < grid.count; ++i)
      est.values[i] += detail::gather(basis.psi_table, basis.nodes_per_unit, R, sc * grid.at(i), rl,
                                      beta.data());
  }
  finish(est, opt);
  return est;
}

LinearEstimate threshold_estimate(std::span<const double> samples, const MeyerBasis& basis,
                                  const ErrorModel& model, const ThresholdConfig& cfg,
                                  const UniformGrid& grid, const EstimateOptions& opt)
{
  std::vector<DeconvAtoms> levels;
  for (int l = 0; l < std::max(cfg.j1, 1); ++l)
    levels.push_back(build_atoms(model, basis, l));
  return threshold_estimate(samples, levels, basis, cfg, grid, opt);
}

ResolutionRule ResolutionRule::parse(const std::string& text)
{
  ResolutionRule r;
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  if (name == "severe")
    r.kind = Kind::severe;
  else if (name == "moderate")
    r.kind = Kind::moderate;
  else if (name == "threshold_top" || name == "threshold-top")
    r.kind = Kind::threshold_top;
  else if (name == "supersmooth")
    r.kind = Kind::supersmooth;
  else
    throw ConfigurationError("unknown resolution rule '" + name + "'");
  r.w = std::numeric_limits<double>::quiet_NaN();
  r.alpha = std::numeric_limits<double>::quiet_NaN();
  if (colon == std::string::npos)
    return r;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigurationError("rule parameter '" + item + "' must look like key=value");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "round" || key == "rounding") {
      if (val == "floor")
        r.rounding = Rounding::floor;
      else if (val == "nearest")
        r.rounding = Rounding::nearest;
      else if (val == "none" || val == "real")
        r.rounding = Rounding::none;
      else
        throw ConfigurationError("rounding must be floor, nearest or none");
      continue;
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || p != val.data() + val.size())
      throw ConfigurationError("bad number '" + val + "' in rule '" + text + "'");
    if (key == "s")
      r.s = v;
    else if (key == "w")
      r.w = v;
    else if (key == "alpha")
      r.alpha = v;
    else if (key == "nu")
      r.nu = v;
    else if (key == "c0" || key == "c0_tilde")
      r.c0_tilde = v;
    else
      throw ConfigurationError("unknown rule parameter '" + key + "'");
  }
  return r;
}

std::string ResolutionRule::describe() const
{
  std::ostringstream os;
  switch (kind) {
    case Kind::severe: os << "severe:alpha=" << alpha << ",nu=" << nu; break;
    case Kind::moderate: os << "moderate:s=" << s << ",w=" << w; break;
    case Kind::threshold_top: os << "threshold_top:w=" << w; break;
    case Kind::supersmooth: os << "supersmooth:s=" << s << ",c0=" << c0_tilde; break;
  }
  os << ",round=" << (rounding == Rounding::floor ? "floor" : rounding == Rounding::nearest ? "nearest" : "none");
  return os.str();
}

double select_resolution(const ResolutionRule& rule, double n, const ErrorModel& model,
                         const MeyerBasis& basis)
{
  if (!(n >= 3.0))
    throw DomainError("select_resolution needs n >= 3");
  const DecayClass& d = model.decay();
  const double logn = std::log(n);
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  auto check_w = [&](double w) {
    if (d.regime == Regime::severely_ill_posed)
      throw ConfigurationError("rule " + rule.describe() + " needs a moderately ill-posed (or Dirac) error, got " +
                               model.id());
    if (std::isfinite(w) && !same(w, d.w))
      throw ConfigurationError("rule w = " + num(w) + " does not match the error model's w = " + num(d.w));
    return d.w;
  };
  auto rounded = [&](double x) {
    double j = x;
    if (rule.rounding == Rounding::floor)
      j = std::floor(x + 1e-12);
    else if (rule.rounding == Rounding::nearest)
      j = std::round(x);
    return std::max(j, 0.0);
  };

  switch (rule.kind) {
    case ResolutionRule::Kind::severe: {
      if (d.regime != Regime::severely_ill_posed)
        throw ConfigurationError("severe rule needs a severely ill-posed error, got " + model.id());
      const double alpha = std::isfinite(rule.alpha) ? rule.alpha : d.alpha;
      if (!same(alpha, d.alpha))
        throw ConfigurationError("rule alpha = " + num(alpha) + " does not match the error model's alpha = " +
                                 num(d.alpha));
      if (!(rule.nu > 0.0))
        throw ConfigurationError("severe rule needs nu > 0");
      const double c = d.c0 * std::pow(basis.a, alpha) * rule.nu;
      if (!(c < 0.5))
        throw DomainError("severe rule constraint violated: c0 a^alpha nu = " + num(c) + " >= 1/2");
      return rounded(std::log2(rule.nu * logn) / alpha);
    }
    case ResolutionRule::Kind::moderate: {
      const double w = check_w(rule.w);
      if (!(rule.s > 0.0))
        throw ConfigurationError("moderate rule needs s > 0");
      return rounded(std::log2(n / logn) / (2 * rule.s + 2 * w + 1));
    }
    case ResolutionRule::Kind::threshold_top: {
      const double w = check_w(rule.w);
      const double b = std::log2(n / logn) / (2 * w + 1);
      // the bracket [B, 2B] holds exactly one power of two
      const double j1 = std::max(std::ceil(b - 1e-12), 0.0);
      return j1;
    }
    case ResolutionRule::Kind::supersmooth: {
      check_w(std::numeric_limits<double>::quiet_NaN());
      if (!(rule.s > 0.0) || !(rule.c0_tilde > 0.0))
        throw ConfigurationError("supersmooth rule needs s > 0 and c0 > 0");
      return rounded(std::log2(logn / (2 * std::pow(basis.a_prime, rule.s) * rule.c0_tilde)) / rule.s);
    }
  }
  return 0.0;
}

double pilot_g_sup(std::span<const double> samples, const MeyerBasis& basis, const UniformGrid& grid)
{
  if (samples.size() < 2)
    throw DomainError("pilot estimate needs n >= 2");
  const double n = static_cast<double>(samples.size());
  const double jp = std::floor(std::log2(n) / 3.0);
  const double sc = std::exp2(jp);
  const long R = basis.translate_radius;
  std::size_t dropped = 0;
  const std::vector<double> ys = admissible(samples, grid, sc, R, dropped);
  if (ys.empty())
    return 0.0;
  const KRange range = detail::grid_krange(grid, sc, R);
  std::vector<double> c(range.size(), 0.0);
  const double w = 1.0 / static_cast<double>(ys.size());
  for (double y : ys)
    detail::scatter(basis.phi_table, basis.nodes_per_unit, R, sc * y, w, range, c.data());
  const std::vector<double> g = synthesize(c, range.lo, jp, basis, grid);
  double m = 0.0;
  for (double v : g)
    m = std::max(m, std::abs(v));
  return m;
}

double estimate_G(std::span<const double> samples, const MeyerBasis& basis, const UniformGrid& grid)
{
  return std::max(std::sqrt(pilot_g_sup(samples, basis, grid)), 1.0);
}

UniformGrid default_estimation_grid(std::span<const double> samples, std::size_t count)
{
  if (samples.size() < 2)
    throw DomainError("default grid needs at least two samples");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
  double var = 0.0;
  for (double y : samples)
    var += (y - mean) * (y - mean);
  const double sd = std::sqrt(var / (samples.size() - 1));
  const double pad = 6.0 * std::max(sd, 1e-3);
  return UniformGrid::from_range(*mn - pad, *mx + pad, count);
}

} // namespace wdecon

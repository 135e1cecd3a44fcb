// wdecon: wavelet deconvolution density estimation from the command line.

#include "wdecon/confidence.hpp"
#include "wdecon/deconv.hpp"
#include "wdecon/error.hpp"
#include "wdecon/estimators.hpp"
#include "wdecon/io.hpp"
#include "wdecon/meyer.hpp"
#include "wdecon/simulate.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>

namespace fs = std::filesystem;
using namespace wdecon;

namespace {

// Stable exit statuses, one per error class (documented in README).
int exit_code(ErrorClass c)
{
  switch (c) {
    case ErrorClass::configuration: return 2;
    case ErrorClass::parse: return 3;
    case ErrorClass::ill_posed: return 4;
    case ErrorClass::io: return 5;
    case ErrorClass::domain: return 6;
    case ErrorClass::range: return 7;
    case ErrorClass::capability: return 8;
    case ErrorClass::normalization: return 9;
    case ErrorClass::construction: return 10;
    case ErrorClass::insufficient: return 11;
  }
  return 1;
}

struct Options
{
  std::string input, out, config, cache;
  std::string error = "dirac";
  std::string rule;
  double j = -1.0;
  std::string estimator = "linear";
  double kappa = kDefaultKappaPrime;
  int j1 = -1;
  double G = 0.0;
  bool clip = false;
  double z = 1.0, delta = 0.0;
  std::string variant = "paper";
  int sign_draws = 1;
  std::string g_sup = "pilot";
  std::uint64_t seed = 1;
  int threads = 1;
  double grid_lo = std::numeric_limits<double>::quiet_NaN();
  double grid_hi = std::numeric_limits<double>::quiet_NaN();
  std::size_t grid_count = std::size_t(1) << 14;
};

fs::path out_dir(const Options& o)
{
  std::string d = o.out;
  if (d.empty()) {
    const char* env = std::getenv("WDECON_OUT_DIR");
    d = env && *env ? env : ".";
  }
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec || !fs::is_directory(d))
    throw IoError("output directory '" + d + "' is not writable");
  return d;
}

std::shared_ptr<const MeyerBasis> basis_for(const Options& o)
{
  if (o.cache.empty())
    return default_basis();
  if (fs::exists(o.cache))
    return std::make_shared<const MeyerBasis>(load_basis(o.cache));
  auto b = default_basis();
  save_basis(*b, o.cache);
  return b;
}

UniformGrid grid_for(const Options& o, const std::vector<double>& y)
{
  if (std::isnan(o.grid_lo) != std::isnan(o.grid_hi))
    throw ConfigurationError("--grid-lo and --grid-hi go together");
  if (!std::isnan(o.grid_lo))
    return UniformGrid::from_range(o.grid_lo, o.grid_hi, o.grid_count);
  return default_estimation_grid(y, o.grid_count);
}

double level_for(const Options& o, double n, const ErrorModel& m, const MeyerBasis& b)
{
  if (!o.rule.empty() && o.j >= 0.0)
    throw ConfigurationError("--rule and --j are mutually exclusive");
  if (!o.rule.empty())
    return select_resolution(ResolutionRule::parse(o.rule), n, m, b);
  if (o.j >= 0.0)
    return o.j;
  throw ConfigurationError("give either --rule or --j");
}

void warn_atoms(const DeconvAtoms& a)
{
  if (!a.edge_decay_ok)
    std::cerr << "warning: deconvolved atoms at level " << a.j
              << " have not decayed at the tabulation edge; translates are truncated\n";
}

int cmd_estimate(const Options& o)
{
  const auto y = read_samples(o.input);
  const ErrorModel model = ErrorModel::parse(o.error);
  const auto basis = basis_for(o);
  const UniformGrid grid = grid_for(o, y);
  const fs::path dir = out_dir(o);
  LinearEstimate est;
  json side;
  if (o.estimator == "linear") {
    const double j = level_for(o, static_cast<double>(y.size()), model, *basis);
    const DeconvAtoms atoms = build_atoms(model, *basis, j);
    warn_atoms(atoms);
    est = linear_estimate(y, atoms, *basis, grid, { o.clip });
    side = to_json(est);
    if (!o.rule.empty())
      side["rule"] = ResolutionRule::parse(o.rule).describe();
  } else if (o.estimator == "threshold") {
    ThresholdConfig tc;
    tc.kappa_prime = o.kappa;
    tc.w = model.decay().w;
    if (o.j1 >= 0) {
      tc.j1 = o.j1;
    } else {
      ResolutionRule top;
      top.kind = ResolutionRule::Kind::threshold_top;
      top.w = std::numeric_limits<double>::quiet_NaN();
      tc.j1 = static_cast<int>(select_resolution(top, static_cast<double>(y.size()), model, *basis));
    }
    tc.G = o.G > 0.0 ? o.G : estimate_G(y, *basis, grid);
    est = threshold_estimate(y, *basis, model, tc, grid, { o.clip });
    side = to_json(est);
  } else {
    throw ConfigurationError("--estimator must be linear or threshold");
  }
  side["input"] = o.input;
  write_estimate_csv(est, (dir / "estimate.csv").string());
  write_json(side, (dir / "estimate.json").string());
  std::cout << "j = " << est.j << ", wrote " << (dir / "estimate.csv").string() << '\n';
  return 0;
}

int cmd_band(const Options& o)
{
  const auto y = read_samples(o.input);
  const ErrorModel model = ErrorModel::parse(o.error);
  const auto basis = basis_for(o);
  const UniformGrid grid = grid_for(o, y);
  const fs::path dir = out_dir(o);
  const double j = level_for(o, static_cast<double>(y.size()), model, *basis);
  const DeconvAtoms atoms = build_atoms(model, *basis, j);
  warn_atoms(atoms);
  BandOptions bo;
  bo.z = o.z;
  bo.delta = o.delta;
  bo.variant = parse_variant(o.variant);
  bo.n_sign_draws = o.sign_draws;
  bo.seed = o.seed;
  bo.threads = o.threads;
  if (o.g_sup == "pilot") {
    bo.g_source = GSupSource::pilot;
  } else if (o.g_sup == "estimate") {
    bo.g_source = GSupSource::estimate;
  } else {
    bo.g_source = GSupSource::user;
    try {
      bo.g_sup = std::stod(o.g_sup);
    } catch (const std::exception&) {
      throw ConfigurationError("--g-sup must be pilot, estimate or a positive number");
    }
  }
  const BandResult band = confidence_band(y, atoms, *basis, grid, bo);
  json side = to_json(band);
  side["j"] = j;
  side["n"] = y.size();
  side["error_model"] = model.id();
  side["delta_j"] = atoms.delta_j;
  side["input"] = o.input;
  write_band_csv(band, (dir / "band.csv").string());
  write_json(side, (dir / "band.json").string());
  std::cout << "sigma_R = " << band.half_width << ", wrote " << (dir / "band.csv").string() << '\n';
  return 0;
}

int cmd_risk(const Options& o, bool rates)
{
  if (o.config.empty())
    throw ConfigurationError("--config is required");
  Experiment ex = experiment_from_json(read_json(o.config));
  if (ex.kind == "coverage")
    throw ConfigurationError("config describes a coverage experiment; use the coverage subcommand");
  if (o.threads > 1)
    ex.risk.threads = o.threads;
  const auto basis = basis_for(o);
  const fs::path dir = out_dir(o);
  if (rates && ex.risk.ladder.size() < 4)
    throw InsufficiencyError("rates needs at least 4 ladder points");
  const RiskReport rep = sup_norm_risk(ex.risk, *basis);
  write_json(to_json(rep), (dir / "risk.json").string());
  write_risk_csv(rep, (dir / "risk.csv").string());
  for (std::size_t i = 0; i < rep.ladder.size(); ++i)
    std::cout << "n = " << rep.ladder[i] << "  level = " << rep.levels[i] << "  risk = " << rep.risks[i]
              << " +- " << rep.mc_std_errors[i] << '\n';
  if (rep.fit.defined)
    std::cout << "fitted slope " << rep.fit.slope << " (95% CI " << rep.fit.ci_lo << ", " << rep.fit.ci_hi << ")";
  else if (rep.ladder.size() >= 4)
    std::cout << "fitted slope undefined (zero risk)";
  if (!std::isnan(rep.target_slope))
    std::cout << ", target " << rep.target_slope;
  std::cout << '\n';
  return 0;
}

int cmd_coverage(const Options& o)
{
  if (o.config.empty())
    throw ConfigurationError("--config is required");
  const Experiment ex = experiment_from_json(read_json(o.config));
  if (ex.kind != "coverage")
    throw ConfigurationError("config does not describe a coverage experiment");
  const auto basis = basis_for(o);
  const fs::path dir = out_dir(o);
  const int threads = std::max(o.threads, ex.risk.threads);
  const CoverageReport rep = coverage_experiment(ex.band, ex.risk.density, ex.risk.model, ex.n, ex.risk.n_mc,
                                                 ex.risk.seed, *basis, ex.risk.grid, threads);
  json doc = to_json(rep);
  json extra = json::array();
  for (double z : ex.z_values)
    for (BandVariant v : { BandVariant::paper, BandVariant::practical })
      extra.push_back(to_json(rescore(rep, z, ex.band.delta, v, *basis)));
  if (!extra.empty())
    doc["rescored"] = extra;
  write_json(doc, (dir / "coverage.json").string());
  std::cout << "coverage " << rep.empirical_coverage << " (" << rep.hits << "/" << rep.replications
            << "), nominal " << rep.nominal << '\n';
  return 0;
}

int cmd_basis_info(const Options& o)
{
  const auto basis = basis_for(o);
  const MeyerBasis& b = *basis;
  // spectral support: F[phi] beyond a, F[psi] inside a' or beyond a, and
  // the partition of unity on a dense frequency sweep
  double leak = 0.0, unity = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = 12.0 * i / 20000.0;
    if (t > b.a)
      leak = std::max({ leak, std::abs(b.spectrum.phi_ft(t)), std::abs(b.spectrum.psi_ft(t)) });
    if (t < b.a_prime)
      leak = std::max(leak, std::abs(b.spectrum.psi_ft(t)));
    double s = std::norm(b.spectrum.phi_ft(t));
    for (int l = 0; l < 8; ++l)
      s += std::norm(b.spectrum.psi_ft(std::ldexp(t, -l)));
    unity = std::max(unity, std::abs(s - 1.0));
  }
  json doc{ { "basis", b.spectrum.name },
            { "a", b.a },
            { "a_prime", b.a_prime },
            { "c_phi", b.c_phi },
            { "c_psi", b.c_psi },
            { "phi_l1", b.phi_l1 },
            { "psi_l1", b.psi_l1 },
            { "phi_sup", b.phi_sup },
            { "psi_sup", b.psi_sup },
            { "translate_radius", b.translate_radius },
            { "grid", { { "origin", b.grid().origin }, { "step", b.grid().step }, { "count", b.grid().count } } },
            { "support_leak", leak },
            { "partition_of_unity_error", unity } };
  const fs::path dir = out_dir(o);
  write_json(doc, (dir / "basis.json").string());
  std::cout << std::setprecision(17) << doc.dump(2) << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Wavelet deconvolution density estimation" };
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "output directory (default $WDECON_OUT_DIR or .)");
    c->add_option("--cache", o.cache, "basis cache file (created when missing)");
    c->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto data = [&](CLI::App* c) {
    c->add_option("--input", o.input, "CSV of observations, one per row")->required();
    c->add_option("--error", o.error, "error model: dirac | gaussian:s | laplace:b | cauchy:g | custom:file.csv");
    auto* r = c->add_option("--rule", o.rule, "resolution rule, e.g. moderate:s=2,w=2");
    auto* j = c->add_option("--j", o.j, "explicit resolution level")->check(CLI::NonNegativeNumber);
    r->excludes(j);
    c->add_option("--grid-lo", o.grid_lo, "evaluation grid left end");
    c->add_option("--grid-hi", o.grid_hi, "evaluation grid right end");
    c->add_option("--grid-count", o.grid_count, "evaluation grid size (power of two)");
  };

  auto* est = app.add_subcommand("estimate", "density estimate on a grid");
  common(est);
  data(est);
  est->add_option("--estimator", o.estimator, "linear | threshold");
  est->add_option("--kappa", o.kappa, "threshold constant kappa'");
  est->add_option("--j1", o.j1, "threshold top level (default: rule)");
  est->add_option("--G", o.G, "threshold scale G (default: estimated)");
  est->add_flag("--clip", o.clip, "clip at zero and renormalize");

  auto* band = app.add_subcommand("band", "Rademacher confidence band");
  common(band);
  data(band);
  band->add_option("--z", o.z, "confidence exponent (coverage 1 - e^-z)")->check(CLI::PositiveNumber);
  band->add_option("--delta", o.delta, "inflation (0 gives the band for E f_n)")->check(CLI::NonNegativeNumber);
  band->add_option("--variant", o.variant, "paper | practical");
  band->add_option("--sign-draws", o.sign_draws, "sign vectors averaged in R_n")->check(CLI::PositiveNumber);
  band->add_option("--g-sup", o.g_sup, "pilot | estimate | <value>");
  band->add_option("--seed", o.seed, "seed for the Rademacher signs");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo sup-norm risk from a JSON config");
  common(sim);
  sim->add_option("--config", o.config, "experiment JSON")->required();
  auto* rates = app.add_subcommand("rates", "risk ladder plus log-log rate fit");
  common(rates);
  rates->add_option("--config", o.config, "experiment JSON")->required();
  auto* cov = app.add_subcommand("coverage", "band coverage experiment from a JSON config");
  common(cov);
  cov->add_option("--config", o.config, "experiment JSON")->required();
  auto* info = app.add_subcommand("basis-info", "basis constants and support checks");
  common(info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::cout << std::setprecision(17);
  try {
    if (*est)
      return cmd_estimate(o);
    if (*band)
      return cmd_band(o);
    if (*sim)
      return cmd_risk(o, false);
    if (*rates)
      return cmd_risk(o, true);
    if (*cov)
      return cmd_coverage(o);
    if (*info)
      return cmd_basis_info(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error";
    if (e.line > 0)
      std::cerr << " at line " << e.line;
    std::cerr << ": " << e.what() << '\n';
    return exit_code(e.error_class());
  } catch (const IllPosednessError& e) {
    std::cerr << "error: " << e.what() << " (offending frequency t = " << e.frequency
              << ", |F[phi](t)| = " << e.modulus << ")\n";
    return exit_code(e.error_class());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

#include "wdecon/io.hpp"
#include "wdecon/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace wdecon {

namespace {

std::ofstream open_out(const std::string& path)
{
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot write " + path);
  os << std::setprecision(17);
  return os;
}

void close_out(std::ofstream& os, const std::string& path)
{
  os.close();
  if (!os)
    throw IoError("failed writing " + path);
}

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& v)
{
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+')
    ++first;
  auto [p, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && p == last;
}

// json numbers cannot hold NaN; emit null instead
json num(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

template <class T>
T get_or(const json& j, const char* key, T fallback)
{
  return j.contains(key) && !j.at(key).is_null() ? j.at(key).get<T>() : fallback;
}

} // namespace

std::vector<double> read_samples(std::istream& is)
{
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#')
      continue;
    const std::string field = trim(t.substr(0, t.find(',')));
    double v = 0.0;
    if (!parse_double(field, v)) {
      if (!seen_data && out.empty() && lineno == 1)
        continue; // header
      throw ParseError("cannot parse '" + field + "' as a number", lineno);
    }
    if (!std::isfinite(v))
      throw ParseError("non-finite sample '" + field + "'", lineno);
    seen_data = true;
    out.push_back(v);
  }
  if (out.empty())
    throw ParseError("no samples found", lineno);
  return out;
}

std::vector<double> read_samples(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot read " + path);
  return read_samples(is);
}

void write_estimate_csv(const LinearEstimate& est, const std::string& path)
{
  auto os = open_out(path);
  os << "x,fhat\n";
  for (std::size_t i = 0; i < est.values.size(); ++i)
    os << est.grid.at(i) << ',' << est.values[i] << '\n';
  close_out(os, path);
}

void write_band_csv(const BandResult& band, const std::string& path)
{
  auto os = open_out(path);
  os << "x,lower,center,upper\n";
  for (std::size_t i = 0; i < band.center.size(); ++i)
    os << band.grid.at(i) << ',' << band.lower(i) << ',' << band.center[i] << ',' << band.upper(i) << '\n';
  close_out(os, path);
}

void write_risk_csv(const RiskReport& r, const std::string& path)
{
  auto os = open_out(path);
  os << "n,level,risk,mc_std_error\n";
  for (std::size_t i = 0; i < r.ladder.size(); ++i)
    os << r.ladder[i] << ',' << r.levels[i] << ',' << r.risks[i] << ',' << r.mc_std_errors[i] << '\n';
  close_out(os, path);
}

void write_json(const json& doc, const std::string& path)
{
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot write " + path);
  os << doc.dump(2) << '\n';
  os.close();
  if (!os)
    throw IoError("failed writing " + path);
}

json read_json(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot read " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

json to_json(const LinearEstimate& e)
{
  json j{ { "kind", e.kind },         { "j", e.j },
          { "n", e.n },               { "n_used", e.n_used() },
          { "dropped", e.dropped },   { "error_model", e.model_id },
          { "delta_j", num(e.delta_j) },
          { "grid", { { "origin", e.grid.origin }, { "step", e.grid.step }, { "count", e.grid.count } } } };
  if (e.kind == "threshold") {
    j["j1"] = e.j1;
    j["kappa_prime"] = e.kappa_prime;
    j["G"] = e.G;
    j["retained"] = e.retained.size();
  }
  return j;
}

json to_json(const BandResult& b)
{
  return { { "z", b.z },
           { "delta", b.delta },
           { "variant", to_string(b.variant) },
           { "R_n", b.R_n },
           { "sigma_R", b.half_width },
           { "half_width", b.radius() },
           { "g_sup", b.g_sup },
           { "g_sup_source", b.g_sup_source },
           { "nominal_coverage", b.nominal() } };
}

json to_json(const RateFit& f)
{
  return { { "defined", f.defined },         { "slope", num(f.slope) },   { "std_error", num(f.std_error) },
           { "ci95", { num(f.ci_lo), num(f.ci_hi) } }, { "intercept", num(f.intercept) } };
}

json to_json(const RiskReport& r)
{
  json levels = json::array();
  for (double v : r.levels)
    levels.push_back(num(v));
  return { { "estimator", r.estimator }, { "density", r.density },       { "error_model", r.model },
           { "ladder", r.ladder },       { "levels", levels },           { "risks", r.risks },
           { "mc_std_errors", r.mc_std_errors }, { "n_mc", r.n_mc },    { "seed", r.seed },
           { "fit", to_json(r.fit) },    { "fitted_slope", num(r.fit.slope) },
           { "target_slope", num(r.target_slope) } };
}

json to_json(const CoverageReport& r)
{
  return { { "density", r.density },
           { "error_model", r.model },
           { "n", r.n },
           { "j", r.band.j },
           { "z", r.band.z },
           { "delta", r.band.delta },
           { "variant", to_string(r.band.variant) },
           { "n_sign_draws", r.band.n_sign_draws },
           { "target", r.band.target == CoverageTarget::mean_band ? "mean_band" : "density_band" },
           { "replications", r.replications },
           { "hits", r.hits },
           { "empirical_coverage", r.empirical_coverage },
           { "nominal", r.nominal },
           { "excess", r.empirical_coverage - r.nominal },
           { "mean_half_width", r.mean_half_width },
           { "mean_sup_deviation", r.mean_sup_deviation },
           { "delta_j", r.delta_j },
           { "seed", r.seed } };
}

TestDensity density_from_json(const json& j)
{
  const std::string type = j.at("type").get<std::string>();
  if (type == "gaussian")
    return TestDensity::gaussian(get_or(j, "mu", 0.0), get_or(j, "sigma", 1.0));
  if (type == "supersmooth")
    return TestDensity::supersmooth(j.at("sigma").get<double>(), j.at("c0").get<double>());
  if (type == "scaled_cauchy")
    return TestDensity::scaled_cauchy(j.at("eta").get<double>());
  if (type == "mixture") {
    std::vector<GaussianComponent> c;
    for (const auto& e : j.at("components"))
      c.push_back({ e.at("weight").get<double>(), get_or(e, "mu", 0.0), e.at("sigma").get<double>() });
    return TestDensity::mixture(std::move(c));
  }
  throw ConfigurationError("unknown density type '" + type + "'");
}

EstimatorSpec estimator_from_json(const json& j)
{
  EstimatorSpec e;
  const std::string kind = get_or<std::string>(j, "kind", "linear");
  if (kind == "linear") {
    e.kind = EstimatorSpec::Kind::linear;
    const bool has_rule = j.contains("rule"), has_j = j.contains("j");
    if (has_rule == has_j)
      throw ConfigurationError("linear estimator needs exactly one of 'rule' and 'j'");
    if (has_rule)
      e.rule = ResolutionRule::parse(j.at("rule").get<std::string>());
    else
      e.j = j.at("j").get<double>();
  } else if (kind == "threshold") {
    e.kind = EstimatorSpec::Kind::threshold;
    e.kappa_prime = get_or(j, "kappa_prime", kDefaultKappaPrime);
    e.j1 = get_or(j, "j1", -1);
    e.G = get_or(j, "G", 0.0);
  } else if (kind == "oracle") {
    e.kind = EstimatorSpec::Kind::oracle;
  } else {
    throw ConfigurationError("unknown estimator kind '" + kind + "'");
  }
  e.clip = get_or(j, "clip", false);
  return e;
}

BandConfig band_config_from_json(const json& j)
{
  BandConfig b;
  b.j = j.at("j").get<double>();
  b.z = get_or(j, "z", 1.0);
  b.delta = get_or(j, "delta", 0.0);
  b.variant = parse_variant(get_or<std::string>(j, "variant", "paper"));
  b.n_sign_draws = get_or(j, "n_sign_draws", 1);
  const std::string target = get_or<std::string>(j, "target", "mean_band");
  if (target == "mean_band")
    b.target = CoverageTarget::mean_band;
  else if (target == "density_band")
    b.target = CoverageTarget::density_band;
  else
    throw ConfigurationError("band target must be mean_band or density_band");
  const std::string g = get_or<std::string>(j, "g_sup", "pilot");
  if (g == "pilot")
    b.g_source = GSupSource::pilot;
  else if (g == "estimate")
    b.g_source = GSupSource::estimate;
  else
    throw ConfigurationError("g_sup must be 'pilot' or 'estimate'");
  return b;
}

UniformGrid grid_from_json(const json& j)
{
  return UniformGrid::from_range(j.at("lo").get<double>(), j.at("hi").get<double>(),
                                 j.at("count").get<std::size_t>());
}

Experiment experiment_from_json(const json& j)
{
  try {
    Experiment ex;
    ex.kind = get_or<std::string>(j, "experiment", "rates");
    RiskConfig& r = ex.risk;
    r.density = density_from_json(j.at("density"));
    r.model = ErrorModel::parse(get_or<std::string>(j, "error", "dirac"));
    r.seed = get_or<std::uint64_t>(j, "seed", 1);
    r.threads = get_or(j, "threads", 1);
    if (j.contains("grid"))
      r.grid = grid_from_json(j.at("grid"));
    if (ex.kind == "rates" || ex.kind == "simulate") {
      r.estimator = estimator_from_json(j.at("estimator"));
      r.ladder = j.at("ladder").get<std::vector<std::size_t>>();
      r.n_mc = get_or(j, "n_mc", 200);
      r.target_slope = j.contains("target_slope") && !j.at("target_slope").is_null()
                         ? j.at("target_slope").get<double>()
                         : std::numeric_limits<double>::quiet_NaN();
    } else if (ex.kind == "coverage") {
      ex.band = band_config_from_json(j.at("band"));
      ex.n = j.at("n").get<std::size_t>();
      r.n_mc = get_or(j, "n_mc", 500);
      ex.z_values = get_or(j, "z_values", std::vector<double>{});
    } else {
      throw ConfigurationError("experiment must be 'rates', 'simulate' or 'coverage'");
    }
    return ex;
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("experiment config: ") + e.what());
  }
}

} // namespace wdecon

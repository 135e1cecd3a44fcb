#include "wdecon/error_model.hpp"
#include "wdecon/error.hpp"
#include "wdecon/meyer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace wdecon {

namespace {

constexpr double kMeyerA = 8.0 * std::numbers::pi / 3.0;
constexpr double kIllPosedFloor = 1e-300;

std::string fmt(double v)
{
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

} // namespace

double DecayClass::envelope(double t) const
{
  return C * std::pow(1.0 + t * t, -0.5 * w) * std::exp(-c0 * std::pow(std::abs(t), alpha));
}

// Cubic Hermite interpolation of re and im on a strictly increasing,
// possibly nonuniform abscissa; slopes from three-point differences.
struct ErrorModel::Table
{
  std::vector<double> t;
  std::vector<cplx> f;
  std::vector<cplx> slope;

  Table(std::vector<double> tt, std::vector<cplx> ff)
    : t(std::move(tt))
    , f(std::move(ff))
    , slope(t.size())
  {
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 0)
        slope[i] = (f[1] - f[0]) / (t[1] - t[0]);
      else if (i == n - 1)
        slope[i] = (f[n - 1] - f[n - 2]) / (t[n - 1] - t[n - 2]);
      else {
        const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
        slope[i] = ((f[i + 1] - f[i]) / h1 * h0 + (f[i] - f[i - 1]) / h0 * h1) / (h0 + h1);
      }
    }
  }

  cplx operator()(double x) const
  {
    if (x < t.front() || x > t.back())
      throw RangeError("custom characteristic function evaluated at t = " + fmt(x) +
                       " outside its tabulation [" + fmt(t.front()) + ", " + fmt(t.back()) + "]");
    auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t i = static_cast<std::size_t>(it - t.begin());
    i = std::clamp<std::size_t>(i, 1, t.size() - 1) - 1;
    const double h = t[i + 1] - t[i];
    const double s = (x - t[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * f[i] + h10 * h * slope[i] + h01 * f[i + 1] + h11 * h * slope[i + 1];
  }
};

ErrorModel ErrorModel::dirac()
{
  ErrorModel m;
  m.kind_ = ErrorKind::dirac;
  m.decay_ = DecayClass{ 1.0, 0.0, 0.0, 1.0, Regime::none };
  return m;
}

ErrorModel ErrorModel::gaussian(double sigma)
{
  if (!(sigma > 0.0))
    throw DomainError("gaussian error needs sigma > 0");
  ErrorModel m;
  m.kind_ = ErrorKind::gaussian;
  m.param_ = sigma;
  m.decay_ = DecayClass{ 1.0, 0.0, 0.5 * sigma * sigma, 2.0, Regime::severely_ill_posed };
  m.check_envelope(std::ldexp(kMeyerA, 10));
  return m;
}

ErrorModel ErrorModel::laplace(double b)
{
  if (!(b > 0.0))
    throw DomainError("laplace error needs b > 0");
  ErrorModel m;
  m.kind_ = ErrorKind::laplace;
  m.param_ = b;
  m.decay_ = DecayClass{ std::min(1.0, 1.0 / (b * b)), 2.0, 0.0, 1.0,
                         Regime::moderately_ill_posed };
  m.check_envelope(std::ldexp(kMeyerA, 10));
  return m;
}

ErrorModel ErrorModel::cauchy(double gamma)
{
  if (!(gamma > 0.0))
    throw DomainError("cauchy error needs gamma > 0");
  ErrorModel m;
  m.kind_ = ErrorKind::cauchy;
  m.param_ = gamma;
  m.decay_ = DecayClass{ 1.0, 0.0, gamma, 1.0, Regime::severely_ill_posed };
  m.check_envelope(std::ldexp(kMeyerA, 10));
  return m;
}

ErrorModel ErrorModel::custom(std::vector<double> t,
                              std::vector<cplx> ft,
                              int j_max,
                              std::optional<DecayClass> decay,
                              NoiseSampler sampler)
{
  if (t.size() != ft.size() || t.size() < 4)
    throw ConfigurationError("custom error model needs >= 4 matching (t, F) rows");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw ConfigurationError("custom error model: t must be strictly increasing");
  if (std::abs(t.front() + t.back()) > 1e-9 * t.back())
    throw ConfigurationError("custom error model: t range must be symmetric");
  if (j_max < 0 || std::ldexp(kMeyerA, j_max) > t.back() * (1 + 1e-12))
    throw ConfigurationError("custom error model: table must reach 2^j_max * a = " +
                             fmt(std::ldexp(kMeyerA, std::max(j_max, 0))));

  ErrorModel m;
  m.kind_ = ErrorKind::custom;
  m.j_max_ = j_max;
  m.table_ = std::make_shared<Table>(std::move(t), std::move(ft));
  m.sampler_ = std::move(sampler);

  const cplx f0 = m.char_fn(0.0);
  if (std::abs(f0 - 1.0) > 1e-6)
    throw ConfigurationError("custom error model: F[phi](0) must be 1, got " + fmt(f0.real()));
  double fmin = 1.0;
  for (std::size_t i = 0; i < m.table_->t.size(); ++i) {
    const cplx a = m.table_->f[i];
    if (std::abs(a) > 1.0 + 1e-9)
      throw ConfigurationError("custom error model: |F[phi]| exceeds one");
    fmin = std::min(fmin, std::abs(a));
  }
  m.decay_ = decay.value_or(DecayClass{ std::max(fmin, 1e-300), 0.0, 0.0, 1.0,
                                        Regime::moderately_ill_posed });
  m.check_envelope(m.table_->t.back());
  return m;
}

ErrorModel ErrorModel::from_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open error table " + path);
  std::vector<double> t;
  std::vector<cplx> f;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#')
      continue;
    for (auto& c : line)
      if (c == ',' || c == ';' || c == '\t')
        c = ' ';
    std::istringstream ls(line);
    double a, b, c = 0.0;
    if (!(ls >> a >> b)) {
      if (t.empty() && line_no == 1)
        continue; // header
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected t, re, im", line_no);
    }
    ls >> c;
    t.push_back(a);
    f.emplace_back(b, c);
  }
  if (t.empty())
    throw ParseError(path + ": no rows", line_no);
  const double tmax = t.back();
  if (tmax < kMeyerA)
    throw ConfigurationError("error table " + path + " must reach at least t = a = " + fmt(kMeyerA));
  const int j_max = static_cast<int>(std::floor(std::log2(tmax / kMeyerA) + 1e-12));
  return custom(std::move(t), std::move(f), j_max);
}

ErrorModel ErrorModel::parse(const std::string& spec)
{
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto number = [&](double fallback) {
    if (arg.empty())
      return fallback;
    double v = 0.0;
    auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (ec != std::errc() || p != arg.data() + arg.size())
      throw ConfigurationError("bad error-model parameter '" + arg + "' in '" + spec + "'");
    return v;
  };
  if (name == "dirac" || name == "none")
    return dirac();
  if (name == "gaussian" || name == "normal")
    return gaussian(number(1.0));
  if (name == "laplace")
    return laplace(number(1.0));
  if (name == "cauchy")
    return cauchy(number(1.0));
  if (name == "custom") {
    if (arg.empty())
      throw ConfigurationError("custom error model needs a path: custom:file.csv");
    return from_csv(arg);
  }
  throw ConfigurationError("unknown error model '" + name + "'");
}

std::string ErrorModel::id() const
{
  switch (kind_) {
    case ErrorKind::dirac: return "dirac";
    case ErrorKind::gaussian: return "gaussian:" + fmt(param_);
    case ErrorKind::laplace: return "laplace:" + fmt(param_);
    case ErrorKind::cauchy: return "cauchy:" + fmt(param_);
    case ErrorKind::custom: return "custom";
  }
  return "?";
}

cplx ErrorModel::char_fn(double t) const
{
  switch (kind_) {
    case ErrorKind::dirac: return 1.0;
    case ErrorKind::gaussian: return std::exp(-0.5 * param_ * param_ * t * t);
    case ErrorKind::laplace: return 1.0 / (1.0 + param_ * param_ * t * t);
    case ErrorKind::cauchy: return std::exp(-param_ * std::abs(t));
    case ErrorKind::custom: return (*table_)(t);
  }
  return 1.0;
}

bool ErrorModel::has_sampler() const
{
  return kind_ != ErrorKind::custom || static_cast<bool>(sampler_);
}

double ErrorModel::draw(Rng& rng) const
{
  switch (kind_) {
    case ErrorKind::dirac: return 0.0;
    case ErrorKind::gaussian: {
      std::normal_distribution<double> nd(0.0, param_);
      return nd(rng);
    }
    case ErrorKind::laplace: {
      const double u = uniform_open(rng) - 0.5;
      return -param_ * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
    }
    case ErrorKind::cauchy:
      return param_ * std::tan(std::numbers::pi * (uniform_open(rng) - 0.5));
    case ErrorKind::custom:
      if (!sampler_)
        throw CapabilityError("custom error model has no sampler");
      return sampler_(rng);
  }
  return 0.0;
}

const std::vector<double>& ErrorModel::table_t() const
{
  static const std::vector<double> empty;
  return table_ ? table_->t : empty;
}

void ErrorModel::check_envelope(double t_max) const
{
  const int m = 4096;
  for (int i = 0; i <= m; ++i) {
    const double t = t_max * i / m;
    const double lhs = std::abs(char_fn(t));
    const double rhs = decay_.envelope(t);
    if (lhs < rhs * (1.0 - 1e-12) - 1e-300)
      throw ConfigurationError("declared lower envelope fails at t = " + fmt(t) + " for " + id());
  }
}

cplx char_fn(const ErrorModel& model, double t)
{
  return model.char_fn(t);
}

double delta_j(const ErrorModel& model, double a, double j)
{
  if (!(j >= 0.0))
    throw DomainError("delta_j needs j >= 0");
  const double edge = std::exp2(j) * a;
  double tmin = edge, vmin;
  if (model.kind() != ErrorKind::custom) {
    // built-ins have even, radially nonincreasing modulus
    vmin = std::abs(model.char_fn(edge));
  } else {
    if (j > model.j_max() + 1e-12)
      throw RangeError("delta_j: level " + fmt(j) + " exceeds the custom table's j_max = " +
                       std::to_string(model.j_max()));
    const auto& ts = model.table_t();
    auto mod = [&](double t) { return std::abs(model.char_fn(t)); };
    vmin = mod(edge);
    double v2 = mod(-edge);
    if (v2 < vmin) {
      vmin = v2;
      tmin = -edge;
    }
    std::size_t imin = ts.size();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (std::abs(ts[i]) > edge)
        continue;
      const double v = mod(ts[i]);
      if (v < vmin) {
        vmin = v;
        tmin = ts[i];
        imin = i;
      }
      if (v == 0.0)
        break;
    }
    if (imin < ts.size() && vmin > 0.0) {
      // golden-section refinement between the neighbouring nodes
      double lo = std::max(-edge, ts[imin == 0 ? 0 : imin - 1]);
      double hi = std::min(edge, ts[std::min(imin + 1, ts.size() - 1)]);
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
      double fc = mod(c), fd = mod(d);
      for (int it = 0; it < 100 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        if (fc < fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - gr * (hi - lo);
          fc = mod(c);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + gr * (hi - lo);
          fd = mod(d);
        }
      }
      const double tm = 0.5 * (lo + hi);
      if (mod(tm) < vmin) {
        vmin = mod(tm);
        tmin = tm;
      }
    }
  }
  if (!(vmin >= kIllPosedFloor))
    throw IllPosednessError("ill-posed: |F[phi](t)| = " + fmt(vmin) + " at t = " + fmt(tmin) +
                              " on the level-" + fmt(j) + " band (delta_j below 1e-300) for " +
                              model.id(),
                            tmin, vmin);
  return vmin;
}

double delta_j(const ErrorModel& model, const MeyerBasis& basis, double j)
{
  return delta_j(model, basis.a, j);
}

std::vector<double> sample_noise(const ErrorModel& model, std::size_t n, std::uint64_t seed)
{
  if (n < 1)
    throw DomainError("sample_noise needs n >= 1");
  if (!model.has_sampler())
    throw CapabilityError("error model " + model.id() + " has no sampler");
  Rng rng(derive_seed(seed, 0x6e6f697365ULL));
  std::vector<double> out(n);
  for (auto& v : out)
    v = model.draw(rng);
  return out;
}

} // namespace wdecon

#include "wdecon/error.hpp"
#include "wdecon/meyer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

using namespace wdecon;

namespace {

constexpr double kPi = std::numbers::pi;

const MeyerBasis& basis()
{
  return *default_basis();
}

} // namespace

TEST(MeyerSpectrum, SupportsAndValues)
{
  const auto& B = basis();
  EXPECT_DOUBLE_EQ(B.a, 8.0 * kPi / 3.0);
  EXPECT_DOUBLE_EQ(B.a_prime, 2.0 * kPi / 3.0);
  EXPECT_EQ(meyer_phi_ft(0.0), 1.0);
  EXPECT_EQ(meyer_phi_ft(2.0 * kPi / 3.0), 1.0);
  for (double t : { 4.0 * kPi / 3.0, 8.0 * kPi / 3.0, 10.0, -9.0 })
    EXPECT_EQ(meyer_phi_ft(t), 0.0);
  for (double t : { 0.0, 1.0, -2.0, 8.5, -8.5 })
    EXPECT_EQ(std::abs(meyer_psi_ft(t)), 0.0);

  // the tabulated spectra respect the same supports node for node
  const auto& d = B.phi_ft.grid;
  for (std::size_t m = 0; m < d.count; ++m) {
    const double t = std::abs(d.at(m));
    if (t >= B.a) {
      EXPECT_EQ(std::abs(B.phi_ft.values[m]), 0.0);
      EXPECT_EQ(std::abs(B.psi_ft.values[m]), 0.0);
    }
    if (t <= B.a_prime)
      EXPECT_EQ(std::abs(B.psi_ft.values[m]), 0.0);
  }
}

TEST(MeyerSpectrum, WindowPolynomial)
{
  EXPECT_EQ(meyer_nu(0.0), 0.0);
  EXPECT_EQ(meyer_nu(1.0), 1.0);
  EXPECT_DOUBLE_EQ(meyer_nu(0.5), 0.5);
  EXPECT_DOUBLE_EQ(meyer_nu(0.3) + meyer_nu(0.7), 1.0);
  EXPECT_EQ(meyer_nu(-1.0), 0.0);
  EXPECT_EQ(meyer_nu(2.0), 1.0);
}

TEST(MeyerSpectrum, PartitionOfUnity)
{
  // |F[phi](t)|^2 + sum_{j=0}^{J} |F[psi](2^{-j} t)|^2 = 1 for |t| <= 2^J a'
  const int J = 6;
  const double tmax = std::ldexp(2.0 * kPi / 3.0, J);
  double err = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double t = -tmax + 2.0 * tmax * i / 200000.0;
    double s = meyer_phi_ft(t) * meyer_phi_ft(t);
    for (int j = 0; j <= J; ++j)
      s += std::norm(meyer_psi_ft(std::ldexp(t, -j)));
    err = std::max(err, std::abs(s - 1.0));
  }
  EXPECT_LT(err, 1e-9);
}

TEST(MeyerBasis, IntegralsAndNorms)
{
  const auto& B = basis();
  EXPECT_NEAR(B.phi.integral(), 1.0, 1e-10);
  EXPECT_NEAR(B.psi.integral(), 0.0, 1e-10);
  double p2 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < B.phi.size(); ++i) {
    p2 += std::norm(B.phi.values[i]);
    s2 += std::norm(B.psi.values[i]);
  }
  EXPECT_NEAR(p2 * B.grid().step, 1.0, 1e-8);
  EXPECT_NEAR(s2 * B.grid().step, 1.0, 1e-8);
  EXPECT_TRUE(B.phi.is_real());
  EXPECT_TRUE(B.psi.is_real());
}

TEST(MeyerBasis, PsiSymmetricAboutMinusHalf)
{
  const auto& B = basis();
  for (double u : { 0.1, 0.75, 2.3, 7.9 })
    EXPECT_NEAR(B.psi_at(-0.5 + u), B.psi_at(-0.5 - u), 1e-12);
}

TEST(MeyerBasis, OrthonormalScalingTranslates)
{
  const auto& B = basis();
  const auto& g = B.grid();
  const auto npu = static_cast<std::ptrdiff_t>(B.nodes_per_unit);
  ASSERT_EQ(npu, 256);
  const auto n = static_cast<std::ptrdiff_t>(g.count);
  for (long d = 0; d <= 16; ++d) {
    double s = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const std::ptrdiff_t k = i + d * npu;
      if (k < n)
        s += B.phi.values[i].real() * B.phi.values[k].real();
    }
    EXPECT_NEAR(s * g.step, d == 0 ? 1.0 : 0.0, 1e-6) << "shift " << d;
  }
}

TEST(MeyerBasis, OrthonormalWaveletsAcrossLevels)
{
  const auto& B = basis();
  struct Atom { int l; long k; };
  std::vector<Atom> atoms;
  for (int l = 0; l <= 4; ++l)
    for (long k : { -1L, 0L, 3L })
      atoms.push_back({ l, k });
  const double h = 1.0 / 4096.0, lo = -40.0;
  const std::size_t m = 80 * 4096;
  std::vector<std::vector<double>> tab;
  for (const auto& a : atoms) {
    std::vector<double> v(m);
    const double sc = std::ldexp(1.0, a.l);
    for (std::size_t i = 0; i < m; ++i)
      v[i] = std::sqrt(sc) * B.psi_at(sc * (lo + h * i) - a.k);
    tab.push_back(std::move(v));
  }
  // scaling translates are orthogonal to every wavelet at level >= 0
  std::vector<double> phi0(m);
  for (std::size_t i = 0; i < m; ++i)
    phi0[i] = B.phi_at(lo + h * i);
  double worst = 0.0;
  for (std::size_t p = 0; p < atoms.size(); ++p) {
    for (std::size_t q = p; q < atoms.size(); ++q) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        s += tab[p][i] * tab[q][i];
      worst = std::max(worst, std::abs(s * h - (p == q ? 1.0 : 0.0)));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      s += phi0[i] * tab[p][i];
    worst = std::max(worst, std::abs(s * h));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(MeyerBasis, EvalAtNodesAndOutOfRange)
{
  const auto& B = basis();
  const auto& g = B.grid();
  for (std::size_t i : { std::size_t(0), std::size_t(12345), g.count / 2, g.count - 1 })
    EXPECT_EQ(eval_phi(B, g.at(i)).value, B.phi.values[i].real());
  const auto far = eval_psi(B, 1e4);
  EXPECT_EQ(far.value, 0.0);
  EXPECT_TRUE(far.truncated);
  EXPECT_FALSE(eval_phi(B, 3.3).truncated);
}

TEST(MeyerBasis, WaveletDecay)
{
  // |psi(x)| <= C_4 / (1 + x^2)^2 with C_4 fitted on |x| <= 5
  const auto& B = basis();
  double C = 0.0;
  for (double x = -5.0; x <= 5.0; x += 1.0 / 256.0)
    C = std::max(C, std::abs(B.psi_at(x)) * std::pow(1.0 + x * x, 2.0));
  for (double x : { 5.0, 10.0, 20.0, -10.0, -20.0 })
    EXPECT_LE(std::abs(B.psi_at(x)), C / std::pow(1.0 + x * x, 2.0)) << x;
}

TEST(Summability, BoxFunctionIsOne)
{
  auto box = [](double x) { return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0; };
  EXPECT_DOUBLE_EQ(summability_constant(box, 8), 1.0);
}

TEST(Summability, MeyerConstants)
{
  const auto& B = basis();
  const auto [c32, d32] = summability_constants(B, 32);
  EXPECT_NEAR(c32 / B.c_phi, 1.0, 0.01);
  EXPECT_NEAR(d32 / B.c_psi, 1.0, 0.01);
  EXPECT_GE(B.c_phi, B.phi_sup);
  EXPECT_GE(B.c_psi, B.psi_sup);
  EXPECT_GE(B.phi_l1, 1.0); // |phi|_1 >= \int phi = 1
}

TEST(Besov, ScalingFunctionHasNormOne)
{
  const auto& B = basis();
  for (double p : { 1.0, 2.0, BesovSpec::inf }) {
    const BesovSpec spec{ 1.5, p, BesovSpec::inf, 1.0 };
    EXPECT_NEAR(besov_norm([](double t) { return cplx(meyer_phi_ft(t)); }, B, spec, 5, 8.0), 1.0, 1e-8);
  }
}

TEST(Besov, SingleWavelet)
{
  const auto& B = basis();
  const int j = 2;
  const double s = 1.0;
  const BesovSpec spec{ s, BesovSpec::inf, BesovSpec::inf, 1.0 };
  auto F = [j](double t) { return std::ldexp(1.0, -j) * std::sqrt(std::ldexp(1.0, j)) * meyer_psi_ft(std::ldexp(t, -j)); };
  EXPECT_NEAR(besov_norm(F, B, spec, 5, 8.0), std::exp2(j * (s + 0.5)), 1e-7);
}

TEST(Besov, CauchyCoefficientEnvelope)
{
  const auto& B = basis();
  const double eta = 4.0;
  auto F = [eta](double t) { return cplx(std::exp(-eta * std::abs(t))); };
  for (int l = 0; l <= 3; ++l) {
    const auto beta = wavelet_coefficients(F, B, l, -40, 40);
    const double env = std::exp2(-0.5 * l) * B.psi_l1 * std::exp(-std::ldexp(B.a_prime, l) * eta);
    for (double b : beta)
      EXPECT_LE(std::abs(b), env + 1e-14) << "level " << l;
  }
  const BesovSpec spec{ 1.0, BesovSpec::inf, BesovSpec::inf, 1.0 };
  EXPECT_TRUE(std::isfinite(besov_norm(F, B, spec, 8, 40.0)));
}

TEST(Besov, Homogeneous)
{
  const auto& B = basis();
  const BesovSpec spec{ 2.0, 2.0, 1.0, 1.0 };
  auto F = [](double t) { return cplx(std::exp(-0.5 * t * t)); };
  const double base = besov_norm(F, B, spec, 5, 10.0);
  auto F3 = [](double t) { return 3.0 * cplx(std::exp(-0.5 * t * t)); };
  EXPECT_NEAR(besov_norm(F3, B, spec, 5, 10.0), 3.0 * base, 1e-12 * base);
}

TEST(Besov, SpecValidation)
{
  EXPECT_THROW((BesovSpec{ 0.0, 2.0, 2.0, 1.0 }.validate()), DomainError);
  EXPECT_NO_THROW((BesovSpec{ 0.0, 2.0, 1.0, 1.0 }.validate()));
  EXPECT_THROW((BesovSpec{ 1.0, 0.5, 1.0, 1.0 }.validate()), DomainError);
}

TEST(Besov, GridFunctionMatchesSpectrum)
{
  const auto& B = basis();
  const BesovSpec spec{ 1.0, BesovSpec::inf, BesovSpec::inf, 1.0 };
  const auto g = UniformGrid::centered(32.0, 1 << 14);
  const auto f = GridFunction::sample(g, [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); });
  const double from_grid = besov_norm(f, B, spec, 4);
  const double closed = besov_norm([](double t) { return cplx(std::exp(-0.5 * t * t)); }, B, spec, 4, 16.0);
  EXPECT_NEAR(from_grid, closed, 1e-6);
}

TEST(MeyerBasis, ConstructionGuards)
{
  EXPECT_THROW(build_meyer(UniformGrid::centered(10.0, 4096)), ConfigurationError);
  EXPECT_THROW(build_meyer(UniformGrid::centered(64.0, 1 << 12)), ConfigurationError);
}

TEST(MeyerBasis, CacheRoundTrip)
{
  const auto& B = basis();
  const std::string path = ::testing::TempDir() + "wdecon_basis.bin";
  save_basis(B, path);
  const MeyerBasis C = load_basis(path);
  EXPECT_EQ(C.c_phi, B.c_phi);
  EXPECT_EQ(C.c_psi, B.c_psi);
  EXPECT_EQ(C.grid(), B.grid());
  for (std::size_t i = 0; i < B.phi.size(); i += 997)
    EXPECT_EQ(C.phi.values[i], B.phi.values[i]);

  {
    std::ofstream os(path, std::ios::binary);
    os << "not a cache";
  }
  EXPECT_THROW(load_basis(path), IoError);
  std::remove(path.c_str());
}

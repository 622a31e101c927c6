#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "graftlab/error.hpp"
#include "graftlab/schwarzian_dev.hpp"
#include "support/airy_oracle.hpp"

using namespace graftlab;

namespace {

constexpr double kPi = std::numbers::pi;

IntegrationOptions tight() { return {1e-13, 1e-15, 1e-6}; }

// f along a horizontal grid row starting at z0.
std::vector<ExtComplex> developed_row(const QuadraticDifferential& q, Complex z0, Complex h, int n) {
  const Path p = Path::segment(z0, z0 + h * static_cast<double>(n - 1), n - 1);
  std::vector<ExtComplex> f;
  for (const auto& s : integrate_dev(q, p, Frame::affine(z0), tight()).samples) f.push_back(s.f);
  return f;
}

}  // namespace

TEST(QuadraticDifferential, ZerosOfPolynomial) {
  const QuadraticDifferential q{{-1.0, 0.0, 1.0}};
  const auto z = q.zeros();
  ASSERT_EQ(z.size(), 2u);
  EXPECT_NEAR(z[0].real(), -1.0, 1e-14);
  EXPECT_NEAR(z[1].real(), 1.0, 1e-14);
  EXPECT_TRUE(QuadraticDifferential{{2.0}}.zeros().empty());
  EXPECT_THROW(QuadraticDifferential{{0.0}}.zeros(), ValidationError);
}

TEST(Developing, ZeroDifferentialGivesIdentity) {
  const QuadraticDifferential q{{0.0}};
  const auto sol = integrate_dev(q, Path::segment(0.0, {1.0, 2.0}, 5), Frame::affine(0.0));
  for (const auto& s : sol.samples) EXPECT_LT(std::abs(s.f.value() - s.z), 1e-12);
}

TEST(Developing, ConstantDifferentialGivesTangent) {
  // w'' + w = 0: f = sin z / cos z.
  const QuadraticDifferential q{{2.0}};
  const Frame init{0.0, 1.0, 1.0, 0.0};
  const auto sol = integrate_dev(q, Path::segment(0.0, {1.2, 0.3}, 12), init, tight());
  for (const auto& s : sol.samples) EXPECT_LT(std::abs(s.f.value() - std::tan(s.z)), 1e-11) << s.z;
  EXPECT_LT(sol.max_wronskian_drift, 1e-11);
}

TEST(Developing, PassesThroughPole) {
  const QuadraticDifferential q{{2.0}};
  const Frame init{0.0, 1.0, 1.0, 0.0};
  const auto sol = integrate_dev(q, Path::segment(0.0, kPi / 2.0, 2), init, tight());
  EXPECT_GT(std::abs(sol.samples.back().f.is_infinite() ? 1e300 : sol.samples.back().f.value()), 1e10);
  EXPECT_EQ(sol.chart_switches, 1);
}

TEST(Developing, PathThroughZeroIsRejected) {
  const QuadraticDifferential q{{0.0, 1.0}};
  EXPECT_THROW(integrate_dev(q, Path::segment(-1.0, 1.0), Frame::identity()), GeometryError);
  EXPECT_THROW(integrate_dev(q, Path{}, Frame::identity()), ValidationError);
}

TEST(Schwarzian, KnownFunctions) {
  // S(tan) = 2 and S(exp) = -1/2.
  const Complex h(1e-2, 0.0);
  std::vector<ExtComplex> t, e;
  for (int k = 0; k < 20; ++k) {
    const Complex z = Complex(0.1, 0.2) + h * static_cast<double>(k);
    t.emplace_back(std::tan(z));
    e.emplace_back(std::exp(z));
  }
  for (Complex s : schwarzian(t, h)) EXPECT_LT(std::abs(s - 2.0), 1e-6);
  for (Complex s : schwarzian(e, h)) EXPECT_LT(std::abs(s + 0.5), 1e-6);
  EXPECT_EQ(schwarzian(t, h).size(), 14u);
}

TEST(Schwarzian, FourthOrderConvergence) {
  auto err = [](double step) {
    const Complex h(step, 0.0);
    std::vector<ExtComplex> f;
    for (int k = 0; k < 7; ++k) f.emplace_back(std::tan(Complex(0.3, 0.1) + h * static_cast<double>(k)));
    return std::abs(schwarzian(f, h)[0] - 2.0);
  };
  const double ratio = err(0.02) / err(0.01);
  EXPECT_GT(ratio, 13.0);
  EXPECT_LT(ratio, 19.0);
}

TEST(Schwarzian, MoebiusInvariance) {
  const Complex h(1e-2, 0.0);
  const MoebiusMap m{{1.0, 2.0}, 3.0, {0.5, -1.0}, 1.0};
  std::vector<ExtComplex> f, g;
  for (int k = 0; k < 12; ++k) {
    const Complex z = Complex(0.2, 0.1) + h * static_cast<double>(k);
    f.emplace_back(std::exp(z) + z * z);
    g.push_back(m.apply(f.back()));
  }
  const auto a = schwarzian(f, h);
  const auto b = schwarzian(g, h);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-5);
}

TEST(Schwarzian, ThrowsWhereDerivativeVanishes) {
  std::vector<ExtComplex> c(9, ExtComplex(0.5));
  EXPECT_THROW(schwarzian(c, 0.1), NumericalError);
  EXPECT_THROW(schwarzian(std::vector<ExtComplex>(3, ExtComplex(0.0)), 0.1), ValidationError);
}

TEST(Schwarzian, RoundTripRecoversDifferential) {
  const std::vector<QuadraticDifferential> qs{{{0.0}}, {{2.0}}, {{0.0, 1.0}}, {{-1.0, 0.0, 1.0}}};
  const Complex h(0.01, 0.0);
  for (const auto& q : qs) {
    for (Complex z0 : {Complex(0.3, 0.4), Complex(-0.6, 0.7), Complex(0.2, -0.5)}) {
      const auto f = developed_row(q, z0, h, 11);
      const auto s = schwarzian(f, h);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const Complex z = z0 + h * static_cast<double>(i + 3);
        EXPECT_LT(std::abs(s[i] - q(z)), 1e-5) << "q degree " << q.coeffs.size() - 1 << " at " << z;
      }
    }
  }
}

TEST(Schwarzian, TangentOnFineGrid) {
  GridSamples g;
  g.h = 1e-3;
  g.nx = 501;
  g.ny = 6;
  for (int y = 0; y < g.ny; ++y) {
    for (int x = 0; x < g.nx; ++x) g.values.emplace_back(std::tan(Complex(x * g.h, 0.1 * y)));
  }
  double worst = 0.0;
  for (const auto& v : schwarzian_grid(g).values) worst = std::max(worst, std::abs(v.value() - 2.0));
  EXPECT_LT(worst, 1e-5);
}

TEST(Schwarzian, GridShape) {
  GridSamples g;
  g.origin = {0.1, 0.1};
  g.h = 0.01;
  g.nx = 10;
  g.ny = 2;
  for (int y = 0; y < g.ny; ++y) {
    for (int x = 0; x < g.nx; ++x) g.values.emplace_back(std::exp(g.origin + g.h * static_cast<double>(x) + Complex(0.0, 0.1 * y)));
  }
  const GridSamples s = schwarzian_grid(g);
  EXPECT_EQ(s.nx, 4);
  EXPECT_EQ(s.values.size(), 8u);
  for (const auto& v : s.values) EXPECT_LT(std::abs(v.value() + 0.5), 1e-6);
  g.values.pop_back();
  EXPECT_THROW(schwarzian_grid(g), ValidationError);
}

TEST(Monodromy, ContractibleLoopIsTrivial) {
  const QuadraticDifferential q{{-1.0, 0.0, 1.0}};
  Path loop = Path::arc(0.0, 0.5, 0.0, 2.0 * kPi, 64);
  const MoebiusMap m = monodromy(q, loop, tight());
  EXPECT_TRUE(is_projective_identity(m, 1e-9));
}

TEST(Monodromy, LoopAroundZeroOfEntireDifferential) {
  const QuadraticDifferential q{{0.0, 1.0}};
  const Path loop = Path::arc(0.0, 2.0, 0.0, 2.0 * kPi, 64);
  EXPECT_TRUE(is_projective_identity(monodromy(q, loop, tight()), 1e-8));
}

TEST(Developing, InitFrameActsByMoebius) {
  const QuadraticDifferential q{{-0.5, 0.0, 0.1}};
  const Path p = Path::segment(0.0, {1.0, 0.2}, 8);
  const MoebiusMap m{{1.0, 0.5}, 2.0, {0.3, 0.0}, {1.0, -1.0}};
  // Mixing the identity frame's columns by m post-composes f with m.
  const Frame init{m.a(), m.c(), m.b(), m.d()};
  const auto a = integrate_dev(q, p, Frame::identity(), tight());
  const auto b = integrate_dev(q, p, init, tight());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_LT(chordal_distance(m.apply(a.samples[i].f), b.samples[i].f), 1e-10);
  }
  EXPECT_LT(a.max_wronskian_drift, 1e-8);
  EXPECT_LT(b.max_wronskian_drift, 1e-8);
}

TEST(Monodromy, AnnulusIsDiagonal) {
  // q = -1/2 on the strip: w'' = w/4, so continuation by l is diag(e^{l/2}, e^{-l/2}) in the basis e^{+-z/2}.
  const QuadraticDifferential q{{-0.5}};
  const double l = 1.7;
  const MoebiusMap m = monodromy(q, Path::segment(0.0, l), tight());
  const auto cls = m.classify(1e-9);
  EXPECT_EQ(cls.kind, MoebiusKind::hyperbolic);
  EXPECT_NEAR(cls.translation_length, l, 1e-10);
}

TEST(Monodromy, ComposesAlongConcatenatedPaths) {
  const QuadraticDifferential q{{1.0, 0.5, 0.25}};
  const Complex a(0.0), b(1.0, 0.5), c(0.3, 1.4);
  const MoebiusMap ab = monodromy(q, Path::segment(a, b, 4), tight());
  Path p = Path::segment(a, b, 4);
  p.append(Path::segment(b, c, 4));
  const MoebiusMap abc = monodromy(q, p, tight());
  const MoebiusMap bc = monodromy(q, Path::segment(b, c, 4), tight());
  EXPECT_LT(projective_distance(abc, ab * bc), 1e-9);
}

TEST(Monodromy, TwiceAroundIsSquare) {
  // Annulus chart: z -> z + l twice.
  const QuadraticDifferential q{{-0.5}};
  const MoebiusMap once = monodromy(q, Path::segment(0.0, 0.8), tight());
  const MoebiusMap twice = monodromy(q, Path::segment(0.0, 1.6, 2), tight());
  EXPECT_LT(projective_distance(twice, once * once), 1e-10);
}

TEST(Holonomy, WordsUseUppercaseInverses) {
  HolonomyRep rep;
  rep.generators.insert_or_assign('a', MoebiusMap::diagonal(2.0));
  rep.generators.insert_or_assign('b', MoebiusMap::translation(1.0));
  EXPECT_TRUE(is_projective_identity(rep("aA"), 1e-14));
  EXPECT_LT(projective_distance(rep("ab"), rep.generators.at('a') * rep.generators.at('b')), 1e-14);
  EXPECT_THROW((void)rep("c"), ValidationError);
}

TEST(ModelCompare, SeriesOracleRatio) {
  // Integrated ratio against the Taylor-series ratio, up to the fitted scale.
  const auto r = model_compare(6.0, AntiStokesSector{0}, 0);
  EXPECT_LT(r.fit_residual, 1e-2);
  const double oracle = graftlab::testing::AiryOracle::model_error(6.0, 0, 0);
  EXPECT_NEAR(r.sup_error, oracle, 1e-6 * oracle);
}

TEST(ModelCompare, MatchesSeriesOracle) {
  for (int m = 0; m < 3; ++m) {
    for (double R : {4.0, 8.0}) {
      const double oracle = graftlab::testing::AiryOracle::model_error(R, 1, m);
      EXPECT_NEAR(model_compare(R, AntiStokesSector{1}, m).sup_error, oracle, 1e-6 * oracle) << m << " " << R;
    }
  }
}

TEST(ModelCompare, ErrorShrinksWithRadius) {
  for (int k = 0; k < 3; ++k) {
    for (int m = 0; m < 3; ++m) {
      double prev = 1e300;
      for (double R : {4.0, 6.0, 8.0}) {
        const double e = model_compare(R, AntiStokesSector{k}, m).sup_error;
        EXPECT_LT(e, prev) << "sector " << k << " m " << m << " R " << R;
        prev = e;
      }
    }
  }
  EXPECT_LT(model_compare(8.0, AntiStokesSector{0}, 0).sup_error, 1e-3);
}

TEST(ModelCompare, SectorsAgreeByRotation) {
  const double e0 = model_compare(6.0, AntiStokesSector{0}, 1).sup_error;
  for (int k = 1; k < 3; ++k) EXPECT_NEAR(model_compare(6.0, AntiStokesSector{k}, 1).sup_error, e0, 1e-8 * e0);
}

TEST(ModelCompare, Validation) {
  EXPECT_THROW(model_compare(20.0, AntiStokesSector{0}, 0), ValidationError);
  EXPECT_THROW(model_compare(5.0, AntiStokesSector{3}, 0), ValidationError);
  EXPECT_TRUE(AntiStokesSector{0}.contains({1.0, 0.1}));
  EXPECT_FALSE(AntiStokesSector{0}.contains({-1.0, 0.1}));
}

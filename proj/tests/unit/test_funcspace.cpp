#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "support/test_oracles.hpp"
#include "warpft/catalog.hpp"
#include "warpft/funcspace.hpp"

using namespace warpft;

namespace {

auto constant_signal(double v, std::size_t n, double h) -> SampledSignal {
  return SampledSignal(uniform_grid(0.0, h, n),
                       std::vector<complex>(n, complex{v, 0.0}));
}

}  // namespace

TEST(L2Norm, ZeroSignal) {
  EXPECT_EQ(l2_norm(constant_signal(0.0, 50, 0.1)), 0.0);
}

TEST(L2Norm, UnitBox) {
  EXPECT_NEAR(l2_norm(constant_signal(1.0, 100, 0.01)), 1.0, 1e-12);
}

TEST(L2Norm, EmptyDomainThrows) {
  try {
    (void)l2_norm(SampledSignal({}, {}));
    FAIL() << "expected throw";
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "empty domain");
  }
}

TEST(L2Norm, SechSquaredMatchesQuadrature) {
  const auto grid = linspace(-20.0, 20.0, 40001);
  std::vector<complex> v;
  for (const double t : grid) {
    const double s = std::sinh(t);
    v.emplace_back(1.0 / (1.0 + s * s), 0.0);
  }
  const double got = l2_norm(SampledSignal(grid, v));
  auto g2 = [](long double t) {
    const long double c = std::cosh(t);
    return 1.0L / (c * c * c * c);
  };
  const double ref =
      std::sqrt(static_cast<double>(2.0L * testing_oracles::simpson(g2, 0.0L, 20.0L, 200000)));
  // integral sech^4 = 4/3.
  EXPECT_NEAR(ref, std::sqrt(4.0 / 3.0), 1e-12);
  EXPECT_NEAR(got, ref, 1e-6);
}

TEST(L2Norm, Homogeneity) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  const auto grid = uniform_grid(-1.0, 0.01, 201);
  std::vector<complex> v(grid.size());
  for (auto& x : v) {
    x = {nd(rng), nd(rng)};
  }
  const complex c{-2.5, 1.5};
  std::vector<complex> cv(v);
  for (auto& x : cv) {
    x *= c;
  }
  const double a = l2_norm(SampledSignal(grid, v));
  const double b = l2_norm(SampledSignal(grid, cv));
  EXPECT_NEAR(b, std::abs(c) * a, 1e-12 * b);
}

TEST(SampledSignal, RejectsNonUniformAndMismatchedGrids) {
  EXPECT_THROW(SampledSignal({0.0, 1.0, 3.0}, std::vector<complex>(3)), DomainError);
  EXPECT_THROW(SampledSignal({0.0, 1.0}, std::vector<complex>(3)), DomainError);
  EXPECT_THROW(SampledSignal({1.0, 0.0}, std::vector<complex>(2)), DomainError);
}

TEST(Spectrum, Invariants) {
  EXPECT_THROW(Spectrum({0.0, 0.0}, std::vector<complex>(2), {0.0, 0.0}), DomainError);
  EXPECT_THROW(Spectrum({0.0, 1.0}, std::vector<complex>(2), {0.0, -1.0}), DomainError);
  EXPECT_THROW(Spectrum({0.0}, std::vector<complex>(2), {0.0}), DomainError);
  Spectrum ok({0.0, 1.0}, std::vector<complex>(2), {0.0, 1e-3});
  EXPECT_EQ(ok.size(), 2u);
}

TEST(ValidateWarp, SinhIsValidWithUnitMinimum) {
  const auto cert = validate_warp(catalog::sinh_warp(1.0), -10.0, 10.0, 1024);
  EXPECT_TRUE(cert.valid);
  EXPECT_TRUE(cert.deriv_sign_constant);
  EXPECT_TRUE(cert.deriv_consistent);
  // The probe grid misses t = 0 by half a step.
  EXPECT_NEAR(cert.min_abs_deriv, 1.0, 1e-3);
  EXPECT_NEAR(cert.properness_witness, std::cosh(10.0), 1e-6 * std::cosh(10.0));
  EXPECT_EQ(cert.probe_count, 1024u);
  EXPECT_STREQ(WarpCertificate::kind, "heuristic");
}

TEST(ValidateWarp, SquareIsNotMonotone) {
  const auto cert = validate_warp(catalog::square_warp(), -1.0, 1.0, 64);
  EXPECT_FALSE(cert.valid);
  EXPECT_EQ(cert.reason, "u not monotone on probe");
}

TEST(ValidateWarp, Sinh2tHasMinimumTwo) {
  const auto cert = validate_warp(catalog::sinh_warp(2.0), -5.0, 5.0, 1024);
  EXPECT_TRUE(cert.valid);
  EXPECT_NEAR(cert.min_abs_deriv, 2.0, 1e-3);
}

TEST(ValidateWarp, InconsistentDerivative) {
  Warp w;
  w.eval = [](double t) { return std::sinh(t); };
  w.deriv = [](double t) { return 2.0 * std::cosh(t); };
  const auto cert = validate_warp(w, -2.0, 2.0, 64);
  EXPECT_FALSE(cert.valid);
  EXPECT_EQ(cert.reason, "deriv does not match eval");
}

TEST(ValidateWarp, PreconditionErrors) {
  const auto w = catalog::sinh_warp(1.0);
  EXPECT_THROW(validate_warp(w, 1.0, 1.0, 64), DomainError);
  EXPECT_THROW(validate_warp(w, -1.0, 1.0, 8), DomainError);
}

TEST(WarpDerivative, CentralDifferenceIsSecondOrder) {
  const auto w = catalog::sinh_warp(1.0);
  for (const double t : linspace(-3.0, 3.0, 25)) {
    double K[2];
    int i = 0;
    for (const double h : {1e-3, 1e-4}) {
      const double fd = (w.eval(t + h) - w.eval(t - h)) / (2.0 * h);
      K[i++] = std::abs(fd - w.deriv(t)) / (h * h);
    }
    // Exact constant is |u'''(t)|/6 = cosh(t)/6; the finer h carries more
    // rounding noise, so only the coarse constant is held tightly.
    EXPECT_NEAR(K[0], std::cosh(t) / 6.0, 1e-3 * std::cosh(t));
    EXPECT_LT(K[1], 2.0 * std::cosh(t));
  }
}

TEST(ComposeSignal, LorentzianOfSinh) {
  const auto p = catalog::lorentzian_profile(1.0);
  const auto w = catalog::sinh_warp(1.0);
  const auto s = compose_signal(p, w, {0.0, 1.0});
  EXPECT_DOUBLE_EQ(s.values()[0].real(), 1.0);
  const double c = std::cosh(1.0);
  EXPECT_NEAR(s.values()[1].real(), 1.0 / (c * c), 1e-15);
  EXPECT_NEAR(s.values()[1].real(), 0.41997, 1e-5);
}

TEST(ComposeSignal, ZeroProfileAndMissingEvaluator) {
  const auto z = compose_signal(catalog::zero_profile(), catalog::sinh_warp(1.0),
                                linspace(-1.0, 1.0, 11));
  for (const auto& v : z.values()) {
    EXPECT_EQ(v, complex{});
  }
  const auto freq_only = make_profile(std::nullopt, [](double) { return complex{1.0}; },
                                      DecayHint::none(), DecayHint::none(), "x");
  try {
    (void)compose_signal(freq_only, catalog::sinh_warp(1.0), {0.0});
    FAIL() << "expected throw";
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "profile has no time-domain evaluator");
  }
}

TEST(Profile, NeedsAnEvaluator) {
  EXPECT_THROW(make_profile(std::nullopt, std::nullopt, DecayHint::none(),
                            DecayHint::none(), "empty"),
               DomainError);
}

TEST(Profile, CombineKeepsSharedEvaluatorsAndSlowerDecay) {
  const auto p = catalog::lorentzian_profile(1.0);
  const auto q = catalog::gaussian_profile(1.0);
  const auto c = combine_profiles(p, 2.0, q, -1.0);
  EXPECT_NEAR(c.f(0.5), 2.0 / 1.25 - std::exp(-0.125), 1e-15);
  EXPECT_NEAR(c.fhat(1.0).real(),
              2.0 * std::numbers::pi / std::exp(1.0) -
                  std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5),
              1e-14);
  EXPECT_EQ(c.time_decay.kind, DecayHint::Kind::polynomial);
  EXPECT_EQ(c.freq_decay.kind, DecayHint::Kind::exponential);
  EXPECT_DOUBLE_EQ(c.freq_decay.parameter, 1.0);
}

TEST(DecayHint, TailMass) {
  EXPECT_DOUBLE_EQ(DecayHint::exponential(2.0).tail_mass(1.0, 5.0), 0.5);
  EXPECT_DOUBLE_EQ(DecayHint::polynomial(2.0).tail_mass(0.01, 10.0), 0.1);
  EXPECT_TRUE(std::isinf(DecayHint::polynomial(1.0).tail_mass(1.0, 1.0)));
  EXPECT_EQ(DecayHint::compact(3.0).tail_mass(1.0, 4.0), 0.0);
  EXPECT_TRUE(std::isinf(DecayHint::none().tail_mass(1.0, 1.0)));
}

TEST(Contraction, IdenticalFunctionsGiveZero) {
  SignalFn f = [](double x) { return complex{std::exp(-x * x), 0.0}; };
  const auto r = lemma3_contraction_check(f, f, catalog::sinh_warp(1.0), 1.0);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(Contraction, GaussianAgainstZeroUnderSinh) {
  SignalFn fa = [](double x) { return complex{std::exp(-x * x), 0.0}; };
  SignalFn fb = [](double) { return complex{}; };
  const auto r = lemma3_contraction_check(fa, fb, catalog::sinh_warp(1.0), 1.0);
  EXPECT_TRUE(r.holds);
  // ||e^{-x^2}||^2 = sqrt(pi/2).
  EXPECT_NEAR(r.rhs, std::sqrt(std::numbers::pi / 2.0), 1e-6);
  EXPECT_GT(r.lhs, 0.0);
  EXPECT_LT(r.lhs, r.rhs);
}

TEST(Contraction, RandomBandLimitedPairsUnderSinh2t) {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> freq(0.0, 3.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> amp;
  const auto warp = catalog::sinh_warp(2.0);
  ContractionOptions opt;
  opt.half_width = 12.0;
  opt.spacing = 4e-3;
  for (int trial = 0; trial < 100; ++trial) {
    auto random_signal = [&] {
      std::vector<std::array<double, 3>> terms(4);
      for (auto& t : terms) {
        t = {amp(rng), freq(rng), phase(rng)};
      }
      return SignalFn([terms](double x) {
        complex s{};
        for (const auto& t : terms) {
          s += t[0] * std::cos(t[1] * x + t[2]);
        }
        return s * std::exp(-x * x / 8.0);
      });
    };
    const auto r = lemma3_contraction_check(random_signal(), random_signal(), warp,
                                            2.0, opt);
    ASSERT_TRUE(r.holds) << "trial " << trial << " lhs=" << r.lhs << " rhs=" << r.rhs;
  }
}

TEST(Contraction, RejectsUncertifiedWarpOrTooLargeC) {
  SignalFn f = [](double x) { return complex{std::exp(-x * x), 0.0}; };
  SignalFn z = [](double) { return complex{}; };
  try {
    (void)lemma3_contraction_check(f, z, catalog::sinh_warp(1.0), 1.5);
    FAIL() << "expected throw";
  } catch (const HypothesisError& e) {
    EXPECT_STREQ(e.what(), "warp hypotheses not certified");
  }
  EXPECT_THROW(lemma3_contraction_check(f, z, catalog::sinh_warp(1.0), 0.0),
               DomainError);
}

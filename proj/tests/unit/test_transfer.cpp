#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "warpft/catalog.hpp"
#include "warpft/oracle.hpp"
#include "warpft/transfer.hpp"

using namespace warpft;

namespace {

auto sinh_plan(double a, std::vector<double> kgrid) -> TransferPlan {
  TransferPlan plan;
  plan.warp = catalog::sinh_warp(1.0);
  plan.profile = catalog::lorentzian_profile(a);
  plan.kgrid = std::move(kgrid);
  plan.kernel_source = KernelSource::closed_form;
  return plan;
}

auto target(double a, double k) -> double {
  return catalog::sinh_lorentzian_hat({a, 1.0}, k);
}

}  // namespace

TEST(BandGapProject, HardCutoff) {
  const auto p = catalog::lorentzian_profile(1.0);
  const auto q = band_gap_project(p, 1.0);
  EXPECT_EQ(q.fhat(0.5), complex{});
  EXPECT_EQ(q.fhat(-0.999), complex{});
  EXPECT_EQ(q.fhat(2.0), p.fhat(2.0));
  EXPECT_EQ(q.fhat(-1.0), p.fhat(-1.0));
  EXPECT_FALSE(q.time_eval.has_value());
}

TEST(BandGapProject, TaperRampsBetweenMuAndTwoMu) {
  const auto p = catalog::lorentzian_profile(1.0);
  const auto q = band_gap_project(p, 1.0, true);
  EXPECT_EQ(q.fhat(0.5), complex{});
  EXPECT_NEAR(q.fhat(1.5).real(), 0.5 * p.fhat(1.5).real(), 1e-15);
  EXPECT_EQ(q.fhat(2.5), p.fhat(2.5));
}

TEST(BandGapProject, Preconditions) {
  const auto p = catalog::lorentzian_profile(1.0);
  EXPECT_THROW(band_gap_project(p, 0.0), DomainError);
  const auto time_only = make_profile([](double) { return 0.0; }, std::nullopt,
                                      DecayHint::compact(0.0), DecayHint::none(), "t");
  EXPECT_THROW(band_gap_project(time_only, 1.0), DomainError);
}

TEST(BandGapProject, L2DistanceMatchesRemovedEnergy) {
  // ||f - P f||^2 = (1/2pi) integral_{|l|<mu} |f^|^2 dl.
  const double mu = 0.1;
  const auto p = catalog::lorentzian_profile(1.0);
  const auto q = band_gap_project(p, mu);
  const auto grid = linspace(-200.0, 200.0, 8001);
  std::vector<complex> diff(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    diff[i] = p.f(grid[i]) - inverse_transform(q, grid[i], 1e-9);
  }
  const double n = l2_norm(SampledSignal(grid, diff));
  const double removed = std::numbers::pi / 2.0 * (1.0 - std::exp(-2.0 * mu));
  EXPECT_LE(n * n, removed * (1.0 + 1e-3));
  // The window captures most of the slowly decaying difference.
  EXPECT_GE(n * n, 0.9 * removed);
}

TEST(InverseCheck, KnownPairs) {
  EXPECT_LE(inverse_check(catalog::lorentzian_profile(1.0), linspace(-3.0, 3.0, 13)),
            1e-8);
  EXPECT_LE(inverse_check(catalog::gaussian_profile(1.0), linspace(-3.0, 3.0, 13)),
            1e-10);
  EXPECT_EQ(inverse_check(catalog::zero_profile(), linspace(-3.0, 3.0, 13)), 0.0);
  const auto freq_only = band_gap_project(catalog::lorentzian_profile(1.0), 0.1);
  try {
    (void)inverse_check(freq_only, {0.0});
    FAIL() << "expected throw";
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "inverse check needs both evaluators");
  }
}

TEST(ComposeSpectrum, ClosedKernelMatchesCatalog) {
  const auto rep = compose_spectrum(sinh_plan(0.5, {0.25, 1.0, 2.5}));
  ASSERT_TRUE(rep.within_tolerance());
  for (std::size_t i = 0; i < rep.spectrum.size(); ++i) {
    const double k = rep.spectrum.kgrid()[i];
    const double err = rep.spectrum.err_estimates()[i];
    EXPECT_LE(std::abs(rep.spectrum.values()[i] - target(0.5, k)), err) << k;
    EXPECT_LE(err, 1e-2);
    // Reality: f even and real, u odd.
    EXPECT_LE(std::abs(rep.spectrum.values()[i].imag()), err);
    // Components are nonnegative and included in the estimate.
    const double parts = rep.kernel_error[i] + rep.quadrature_error[i] +
                         rep.outer_tail_bound[i] + rep.band_error[i];
    EXPECT_GE(rep.kernel_error[i], 0.0);
    EXPECT_GE(rep.quadrature_error[i], 0.0);
    EXPECT_GE(rep.outer_tail_bound[i], 0.0);
    EXPECT_GE(rep.excluded_band_bound[i], 0.0);
    EXPECT_NEAR(err, parts, 1e-15 + 1e-12 * err);
  }
  EXPECT_FALSE(rep.heuristic_band);
  EXPECT_DOUBLE_EQ(rep.l_max, 50.0);
}

TEST(ComposeSpectrum, ZeroProfileGivesZeroSpectrum) {
  TransferPlan plan = sinh_plan(1.0, {0.0, 1.0, 2.0});
  plan.profile = catalog::zero_profile();
  plan.kernel_source = KernelSource::numeric;
  const auto rep = compose_spectrum(plan);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rep.spectrum.values()[i], complex{});
    EXPECT_EQ(rep.spectrum.err_estimates()[i], 0.0);
    EXPECT_EQ(rep.outer_tail_bound[i], 0.0);
    EXPECT_EQ(rep.excluded_band_bound[i], 0.0);
  }
}

TEST(ComposeSpectrum, NumericAndClosedKernelsAgree) {
  const std::vector<double> ks{0.5, 1.0, 2.0};
  TransferPlan closed = sinh_plan(0.5, ks);
  TransferPlan numeric = closed;
  numeric.kernel_source = KernelSource::numeric;
  numeric.kernel_tol = 1e-3;
  numeric.tolerance = 5e-2;
  const auto rc = compose_spectrum(closed);
  const auto rn = compose_spectrum(numeric);
  ASSERT_FALSE(rn.failed());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double d = std::abs(rc.spectrum.values()[i] - rn.spectrum.values()[i]);
    EXPECT_LE(d, rc.spectrum.err_estimates()[i] + rn.spectrum.err_estimates()[i]);
    EXPECT_LE(std::abs(rn.spectrum.values()[i] - target(0.5, ks[i])),
              rn.spectrum.err_estimates()[i]);
  }
  EXPECT_DOUBLE_EQ(rn.kernel_tol, 1e-3);
}

TEST(ComposeSpectrum, Linearity) {
  const std::vector<double> ks{0.5, 1.5};
  TransferPlan p1 = sinh_plan(0.5, ks);
  TransferPlan p2 = sinh_plan(1.0, ks);
  TransferPlan mix = p1;
  mix.profile = combine_profiles(p1.profile, 2.0, p2.profile, -0.5);
  const auto r1 = compose_spectrum(p1);
  const auto r2 = compose_spectrum(p2);
  const auto rm = compose_spectrum(mix);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const complex lin = 2.0 * r1.spectrum.values()[i] - 0.5 * r2.spectrum.values()[i];
    const double bound = 2.0 * r1.spectrum.err_estimates()[i] +
                         0.5 * r2.spectrum.err_estimates()[i] +
                         rm.spectrum.err_estimates()[i];
    EXPECT_LE(std::abs(rm.spectrum.values()[i] - lin), bound);
  }
}

TEST(ComposeSpectrum, AgreesWithOracle) {
  const std::vector<double> ks{0.25, 1.0, 3.0};
  const auto rep = compose_spectrum(sinh_plan(0.5, ks));
  const auto g = catalog::lorentzian_profile(0.5);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto o = oracle::direct_ft_detailed(g, catalog::sinh_warp(1.0), ks[i], 1e-9);
    EXPECT_LE(std::abs(rep.spectrum.values()[i] - o.value),
              rep.spectrum.err_estimates()[i] + o.error);
  }
}

TEST(ComposeSpectrum, ShrinkingExclusionInOmitMode) {
  const std::vector<double> ks{1.0};
  double prev_band = std::numeric_limits<double>::infinity();
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const double mu : {1e-1, 1e-2, 1e-3}) {
    TransferPlan plan = sinh_plan(0.5, ks);
    plan.band = BandTreatment::omit;
    plan.l_exclusion = mu;
    plan.tolerance = 1.0;
    const auto rep = compose_spectrum(plan);
    const double band = rep.excluded_band_bound[0];
    const double gap = std::abs(rep.spectrum.values()[0] - target(0.5, 1.0));
    EXPECT_LT(band, prev_band) << mu;
    EXPECT_LE(gap, 2.0 * prev_gap) << mu;
    EXPECT_LE(gap, rep.spectrum.err_estimates()[0]);
    EXPECT_EQ(rep.band_error[0], band);
    prev_band = band;
    prev_gap = gap;
  }
}

TEST(ComposeSpectrum, BandCorrectionBeatsOmission) {
  TransferPlan plan = sinh_plan(0.5, {1.0});
  const auto corrected = compose_spectrum(plan);
  plan.band = BandTreatment::omit;
  const auto omitted = compose_spectrum(plan);
  const double t = target(0.5, 1.0);
  EXPECT_LT(std::abs(corrected.spectrum.values()[0] - t),
            0.01 * std::abs(omitted.spectrum.values()[0] - t));
  EXPECT_NE(corrected.band_correction[0], complex{});
}

TEST(ComposeSpectrum, TightOuterCutoffIsReported) {
  TransferPlan plan = sinh_plan(0.5, {1.0});
  plan.l_max = 2.0;
  const auto rep = compose_spectrum(plan);
  EXPECT_GT(rep.outer_tail_bound[0], 1e-2);
  EXPECT_EQ(rep.status[0], "warning");
  EXPECT_FALSE(rep.within_tolerance());
  EXPECT_LE(std::abs(rep.spectrum.values()[0] - target(0.5, 1.0)),
            rep.spectrum.err_estimates()[0]);
}

TEST(ComposeSpectrum, NonCatalogWarpFlagsHeuristicBand) {
  TransferPlan plan;
  plan.warp = catalog::cubic_warp(1.0);
  plan.profile = catalog::gaussian_profile(1.0);
  plan.kgrid = {0.5};
  plan.l_exclusion = 0.1;
  plan.kernel_tol = 1e-2;
  plan.tolerance = 0.2;
  const auto rep = compose_spectrum(plan);
  EXPECT_TRUE(rep.heuristic_band);
  EXPECT_NE(std::find(rep.notes.begin(), rep.notes.end(), "heuristic band bound"),
            rep.notes.end());
  ASSERT_FALSE(rep.failed());
  const auto o = oracle::direct_ft(catalog::gaussian_profile(1.0), catalog::cubic_warp(1.0),
                                   0.5, 1e-9);
  EXPECT_LE(std::abs(rep.spectrum.values()[0] - o), rep.spectrum.err_estimates()[0]);
}

TEST(ComposeSpectrum, ThreadCountDoesNotChangeResults) {
  TransferPlan plan = sinh_plan(0.5, {0.25, 0.5, 1.0, 2.0, 4.0});
  plan.threads = 1;
  const auto a = compose_spectrum(plan);
  plan.threads = 4;
  const auto b = compose_spectrum(plan);
  EXPECT_EQ(a.spectrum.values(), b.spectrum.values());
  EXPECT_EQ(a.spectrum.err_estimates(), b.spectrum.err_estimates());
}

TEST(ComposeSpectrum, Errors) {
  TransferPlan plan = sinh_plan(0.5, {1.0});
  plan.warp = catalog::square_warp();
  try {
    (void)compose_spectrum(plan);
    FAIL() << "expected throw";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("composition hypotheses not certified", 0), 0u);
  }
  plan = sinh_plan(0.5, {1.0});
  plan.warp = catalog::cubic_warp(1.0);
  EXPECT_THROW(compose_spectrum(plan), DomainError);
  plan = sinh_plan(0.5, {1.0, 0.5});
  EXPECT_THROW(compose_spectrum(plan), DomainError);
  plan = sinh_plan(0.5, {1.0});
  plan.l_max = 5e-4;
  EXPECT_THROW(compose_spectrum(plan), DomainError);
  plan = sinh_plan(0.5, {1.0});
  plan.profile = make_profile([](double) { return 0.0; }, std::nullopt,
                              DecayHint::compact(0.0), DecayHint::none(), "t");
  EXPECT_THROW(compose_spectrum(plan), DomainError);
}

TEST(ComposeSpectrum, BudgetFailureIsReportedPerRow) {
  TransferPlan plan = sinh_plan(0.5, {1.0});
  plan.kernel_source = KernelSource::numeric;
  plan.kernel_tol = 1e-6;
  plan.kernel_options.m_max = 1.5;
  const auto rep = compose_spectrum(plan);
  EXPECT_TRUE(rep.failed());
  EXPECT_EQ(rep.status[0].rfind("failed: ", 0), 0u);
  EXPECT_TRUE(std::isnan(rep.spectrum.values()[0].real()));
  EXPECT_TRUE(std::isinf(rep.spectrum.err_estimates()[0]));
}

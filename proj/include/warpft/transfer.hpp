#pragma once

// Spectrum of a composition f(u(t)) from the spectrum of f:
//   g^(k) = (1/2pi) integral f^(l) H_u(k, l) dl.
// The l-integral is split into the band |l| < mu around the kernel's
// logarithmic singularity, the core mu <= |l| <= l_max, and the outer tail.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "warpft/error.hpp"
#include "warpft/funcspace.hpp"
#include "warpft/oscillatory.hpp"
#include "warpft/parallel.hpp"
#include "warpft/quadrature.hpp"

namespace warpft {

enum class KernelSource { numeric, closed_form };

/// How the band |l| < mu enters the result.
enum class BandTreatment {
  /// Add the band integral of a per-side linear fit of f^ and report the
  /// fit and quadrature error.
  correct,
  /// Leave the band out and report its magnitude bound as error.
  omit,
};

struct TransferPlan {
  Warp warp;
  Profile profile;
  std::vector<double> kgrid;
  double l_exclusion = 1e-3;
  /// Outer truncation; 0 picks a value from the frequency decay hint.
  double l_max = 0.0;
  /// Requested absolute error per frequency.
  double tolerance = 1e-2;
  /// Numeric kernel budget. abs_tol is replaced by kernel_tol or by an
  /// automatic choice derived from `tolerance`.
  QuadratureBudget budget;
  std::optional<double> kernel_tol;
  KernelOptions kernel_options;
  KernelSource kernel_source = KernelSource::numeric;
  BandTreatment band = BandTreatment::correct;
  double probe_lo = -10.0;
  double probe_hi = 10.0;
  std::size_t probe_count = 1024;
  std::size_t max_l_intervals = 2000;
  /// Worker threads over k; 0 uses hardware concurrency.
  unsigned threads = 0;
};

struct TransferReport {
  Spectrum spectrum;
  std::vector<double> excluded_band_bound;
  std::vector<double> outer_tail_bound;
  /// (1/2pi) integral |f^| * (kernel error) over the core.
  std::vector<double> kernel_error;
  /// Error of the l-quadrature over the core.
  std::vector<double> quadrature_error;
  /// Error charged for the band: the correction's error, or the band bound.
  std::vector<double> band_error;
  std::vector<complex> band_correction;
  /// "ok", "warning" (estimate above tolerance) or "failed: <reason>".
  std::vector<std::string> status;
  bool heuristic_band = false;
  double kernel_tol = 0.0;
  double l_max = 0.0;
  std::vector<std::string> notes;

  [[nodiscard]] auto failed() const -> bool {
    return std::any_of(status.begin(), status.end(), [](const std::string& s) {
      return s.rfind("failed", 0) == 0;
    });
  }
  [[nodiscard]] auto within_tolerance() const -> bool {
    return std::all_of(status.begin(), status.end(),
                       [](const std::string& s) { return s == "ok"; });
  }
};

/// f^ forced to zero on (-mu, mu). With `taper`, a cosine ramp over
/// mu <= |l| <= 2 mu replaces the hard edge (for numerical experiments only;
/// the hard cutoff is the exact band-gap condition). The time evaluator is
/// dropped since it no longer matches.
inline auto band_gap_project(const Profile& profile, double mu,
                             bool taper = false) -> Profile {
  if (!profile.freq_eval) {
    throw DomainError("profile has no frequency-domain evaluator");
  }
  if (!(mu > 0.0)) {
    throw DomainError("band radius must be positive");
  }
  Profile out;
  out.freq_eval = [fh = *profile.freq_eval, mu, taper](double l) -> complex {
    const double a = std::abs(l);
    if (a < mu) {
      return {};
    }
    if (taper && a < 2.0 * mu) {
      const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * (a - mu) / mu));
      return w * fh(l);
    }
    return fh(l);
  };
  out.time_decay = DecayHint::none();
  out.freq_decay = profile.freq_decay;
  out.freq_breakpoints = profile.freq_breakpoints;
  for (const double p : {-mu, mu}) {
    out.freq_breakpoints.push_back(p);
    if (taper) {
      out.freq_breakpoints.push_back(2.0 * p);
    }
  }
  std::sort(out.freq_breakpoints.begin(), out.freq_breakpoints.end());
  out.label = profile.label + (taper ? " (tapered band gap)" : " (band gap)");
  return out;
}

namespace detail {

/// A frequency cutoff beyond which the hinted tail of f^ is negligible.
inline auto default_l_max(const DecayHint& hint, double l_exclusion) -> double {
  switch (hint.kind) {
    case DecayHint::Kind::exponential:
      return std::max(20.0 / hint.parameter, 50.0);
    case DecayHint::Kind::polynomial:
      return 1e3;
    case DecayHint::Kind::compact:
      return std::max(hint.parameter, 2.0 * l_exclusion);
    case DecayHint::Kind::none:
      break;
  }
  throw DomainError("frequency profile needs a decay hint to choose l_max");
}

/// integral_lo^hi |fhat(sign * l)| dl by adaptive Gauss-Kronrod in ln l.
template <typename F>
auto log_integral(F&& g, double lo, double hi, double abs_tol) -> double {
  auto h = [&](double s) {
    const double l = std::exp(s);
    return g(l) * l;
  };
  const double a = std::log(lo);
  const double b = std::log(hi);
  std::vector<double> cuts;
  for (double c = a + 1.0; c < b; c += 1.0) {
    cuts.push_back(c);
  }
  quad::AdaptiveOptions opt{.abs_tol = abs_tol, .rel_tol = 1e-10,
                            .max_intervals = 4000};
  return quad::integrate_adaptive<double>(h, a, b, opt, cuts).value;
}

/// e^z - 1 over z and (e^z (z - 1) + 1) over z^2, with series near 0.
inline auto expm1_over(complex z) -> complex {
  if (std::abs(z) < 0.5) {
    complex term{1.0, 0.0};
    complex sum{1.0, 0.0};
    for (int n = 1; n < 20; ++n) {
      term *= z / static_cast<double>(n + 1);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

inline auto ramp_over(complex z) -> complex {
  if (std::abs(z) < 0.5) {
    // sum_n z^n / ((n + 2) n!)
    complex fact{1.0, 0.0};
    complex sum{0.5, 0.0};
    for (int n = 1; n < 20; ++n) {
      fact *= z / static_cast<double>(n);
      sum += fact / static_cast<double>(n + 2);
    }
    return sum;
  }
  return (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
}

/// f^(l) ~ alpha + beta |l| on each side of the band.
struct BandFit {
  complex alpha_pos, beta_pos, alpha_neg, beta_neg;
  /// Estimated sup |f^ - fit| on the band.
  double misfit = 0.0;
  /// Sampled sup |f^| on the band.
  double sup = 0.0;
};

inline auto fit_band(const ComplexFn& fh, double mu) -> BandFit {
  BandFit fit;
  const double eps = 1e-6 * mu;
  auto side = [&](double sgn, complex& alpha, complex& beta) {
    const complex f0 = fh(sgn * eps);
    const complex f1 = fh(sgn * mu);
    beta = (f1 - f0) / (mu - eps);
    alpha = f0 - beta * eps;
    fit.sup = std::max({fit.sup, std::abs(f0), std::abs(f1)});
    for (int j = 1; j < 16; ++j) {
      const double l = mu * j / 16.0;
      const complex v = fh(sgn * l);
      fit.sup = std::max(fit.sup, std::abs(v));
      fit.misfit = std::max(fit.misfit, std::abs(v - (alpha + beta * l)));
    }
  };
  side(1.0, fit.alpha_pos, fit.beta_pos);
  side(-1.0, fit.alpha_neg, fit.beta_neg);
  // Samples underestimate the sup of the misfit between nodes.
  fit.misfit *= 2.0;
  fit.sup *= 1.0 + 1e-12;
  return fit;
}

struct BandCorrection {
  complex value;
  double error = 0.0;
  bool applied = false;
};

/// integral e^{ikt} L(u(t)) dt, where
///   L(x) = (1/2pi) integral_{-mu}^{mu} fit(l) e^{-ilx} dl
/// is the low-pass part of f carried by the band.
inline auto band_correction(const Warp& warp, const BandFit& fit, double mu,
                            double k, double tol,
                            const QuadratureBudget& budget,
                            const KernelOptions& kopt) -> BandCorrection {
  const double two_pi = 2.0 * std::numbers::pi;
  const complex jump = fit.alpha_pos - fit.alpha_neg;
  const bool has_jump = std::abs(jump) > 1e-14 * std::max(fit.sup, 1e-300);
  if (has_jump && k == 0.0) {
    return {};
  }
  auto low_pass = [&](double x) -> complex {
    const complex zp{0.0, -mu * x};
    const complex zn{0.0, mu * x};
    const complex j0p = mu * expm1_over(zp);
    const complex j0n = mu * expm1_over(zn);
    const complex j1p = mu * mu * ramp_over(zp);
    const complex j1n = mu * mu * ramp_over(zn);
    return (fit.alpha_pos * j0p + fit.beta_pos * j1p + fit.alpha_neg * j0n +
            fit.beta_neg * j1n) /
           two_pi;
  };
  const double osc_coef = std::abs(fit.alpha_pos) + std::abs(fit.alpha_neg);
  const double beta_coef = std::abs(fit.beta_pos) + std::abs(fit.beta_neg);
  const double beta_sum = std::abs(fit.beta_pos + fit.beta_neg);
  const double jump_abs = std::abs(jump);
  auto tail = [&](double t) {
    const double U = std::abs(warp.eval(t));
    const double D = std::abs(warp.deriv(t));
    const double gap = mu * D - std::abs(k);
    if (!(gap > 0.0) || !(U > 0.0)) {
      return std::numeric_limits<double>::infinity();
    }
    const double amp = (osc_coef / U + beta_coef * (mu / U + 1.0 / (U * U))) / two_pi;
    double bound = 4.0 * amp / gap + beta_sum / (two_pi * U * D);
    if (has_jump) {
      bound += 2.0 * jump_abs / (two_pi * std::abs(k) * U);
    }
    return bound;
  };
  auto reach = [&](double sgn) {
    double T = std::max({kopt.m_initial, warp.tail_onset, 1.0});
    while (tail(sgn * T) > 0.25 * tol) {
      T *= 2.0;
      if (T > kopt.m_max) {
        throw BudgetExhausted("band correction tail does not decay within budget",
                              complex{std::nan(""), std::nan("")},
                              std::numeric_limits<double>::infinity());
      }
    }
    double lo = 0.5 * T;
    for (int i = 0; i < 60 && T - lo > 1e-3 * T; ++i) {
      const double mid = 0.5 * (lo + T);
      (tail(sgn * mid) > 0.25 * tol ? lo : T) = mid;
    }
    return T;
  };
  const double t_right = reach(1.0);
  const double t_left = reach(-1.0);

  auto integrand = [&](double t) {
    return complex{std::cos(k * t), std::sin(k * t)} * low_pass(warp.eval(t));
  };
  auto rate = [&](double t) { return std::abs(k) + mu * std::abs(warp.deriv(t)); };
  const auto res = integrate_panels(integrand, rate, -t_left, t_right, budget,
                                    0.5 * tol, 0.0);
  BandCorrection out;
  out.value = res.value;
  out.error = res.error + tail(t_right) + tail(-t_left);
  out.applied = true;
  return out;
}

/// Kernel value with its error bound.
struct KernelValue {
  complex value;
  double error = 0.0;
};

/// Adaptive GK15 over s = ln l for integral_lo^hi fhat(sgn l) H(k, sgn l) dl,
/// tracking the quadrature-weighted kernel error alongside.
struct CoreIntegral {
  complex value;
  double quad_error = 0.0;
  double kernel_error = 0.0;
  bool converged = true;
};

template <typename Kernel>
auto core_integral(const ComplexFn& fh, Kernel&& kernel, double sgn, double lo,
                   double hi, const std::vector<double>& breakpoints,
                   double abs_tol, std::size_t max_intervals) -> CoreIntegral {
  struct Node {
    complex value;
    double aux = 0.0;
  };
  auto at = [&](double s) -> Node {
    const double l = std::exp(s);
    const complex f = fh(sgn * l);
    if (f == complex{}) {
      return {};
    }
    const KernelValue h = kernel(sgn * l);
    return {f * h.value * l, std::abs(f) * h.error * l};
  };
  struct Piece {
    double a, b;
    complex value;
    double err, aux;
  };
  auto rule = [&](double a, double b) -> Piece {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Node fc = at(c);
    complex kron = fc.value * quad::detail::kWgk15[7];
    complex gauss = fc.value * quad::detail::kWg7[3];
    double aux = fc.aux * quad::detail::kWgk15[7];
    for (std::size_t j = 0; j < 7; ++j) {
      const double dx = h * quad::detail::kXgk15[j];
      const Node f1 = at(c - dx);
      const Node f2 = at(c + dx);
      kron += (f1.value + f2.value) * quad::detail::kWgk15[j];
      aux += (f1.aux + f2.aux) * quad::detail::kWgk15[j];
      if (j % 2 == 1) {
        gauss += (f1.value + f2.value) * quad::detail::kWg7[j / 2];
      }
    }
    return {a, b, kron * h, std::abs(kron - gauss) * h, aux * h};
  };

  const double sa = std::log(lo);
  const double sb = std::log(hi);
  std::vector<double> cuts{sa};
  for (const double p : breakpoints) {
    const double ap = std::abs(p);
    if (ap > lo && ap < hi && (p == 0.0 || (p > 0.0) == (sgn > 0.0))) {
      cuts.push_back(std::log(ap));
    }
  }
  for (double c = sa + 1.0; c < sb; c += 1.0) {
    cuts.push_back(c);
  }
  cuts.push_back(sb);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    pieces.push_back(rule(cuts[i], cuts[i + 1]));
  }
  auto total_err = [&] {
    double e = 0.0;
    for (const auto& p : pieces) {
      e += p.err;
    }
    return e;
  };
  CoreIntegral out;
  while (total_err() > abs_tol) {
    if (pieces.size() >= max_intervals) {
      out.converged = false;
      break;
    }
    auto worst = std::max_element(
        pieces.begin(), pieces.end(),
        [](const Piece& x, const Piece& y) { return x.err < y.err; });
    const double mid = 0.5 * (worst->a + worst->b);
    const Piece left = rule(worst->a, mid);
    const Piece right = rule(mid, worst->b);
    *worst = left;
    pieces.push_back(right);
  }
  quad::CompensatedSum<complex> sum;
  for (const auto& p : pieces) {
    sum.add(p.value);
    out.quad_error += p.err;
    out.kernel_error += p.aux;
  }
  out.value = sum.value();
  return out;
}

}  // namespace detail

/// Computes g^ on plan.kgrid with per-point error estimates. Per-point
/// numerical failures are recorded in the report's status, not thrown.
inline auto compose_spectrum(const TransferPlan& plan) -> TransferReport {
  if (!plan.profile.freq_eval) {
    throw DomainError("profile has no frequency-domain evaluator");
  }
  const double mu = plan.l_exclusion;
  if (!(mu > 0.0)) {
    throw DomainError("l_exclusion must be positive");
  }
  if (!(plan.tolerance > 0.0)) {
    throw DomainError("tolerance must be positive");
  }
  for (std::size_t i = 1; i < plan.kgrid.size(); ++i) {
    if (!(plan.kgrid[i] > plan.kgrid[i - 1])) {
      throw DomainError("kgrid must be strictly increasing");
    }
  }
  const auto cert = validate_warp(plan.warp, plan.probe_lo, plan.probe_hi,
                                  plan.probe_count);
  if (!cert.valid) {
    throw HypothesisError("composition hypotheses not certified: " + cert.reason);
  }
  if (plan.kernel_source == KernelSource::closed_form &&
      !plan.warp.has_closed_kernel()) {
    throw DomainError("warp has no closed-form kernel");
  }
  const double l_max = plan.l_max > 0.0
                           ? plan.l_max
                           : detail::default_l_max(plan.profile.freq_decay, mu);
  if (!(l_max > mu)) {
    throw DomainError("l_max must exceed l_exclusion");
  }

  const ComplexFn& fh = *plan.profile.freq_eval;
  const double two_pi = 2.0 * std::numbers::pi;
  auto abs_fh = [&](double sgn) {
    return [&fh, sgn](double l) { return std::abs(fh(sgn * l)); };
  };
  const double mass = detail::log_integral(abs_fh(1.0), mu, l_max, 1e-10) +
                      detail::log_integral(abs_fh(-1.0), mu, l_max, 1e-10);

  TransferReport rep;
  rep.l_max = l_max;
  rep.kernel_tol = plan.kernel_tol.value_or(
      mass > 0.0 ? std::clamp(plan.tolerance * two_pi / (4.0 * mass), 1e-7, 1e-2)
                 : 1e-3);
  QuadratureBudget kbudget = plan.budget;
  kbudget.abs_tol = rep.kernel_tol;

  const auto fit = detail::fit_band(fh, mu);
  const bool rigorous_envelope = static_cast<bool>(plan.warp.kernel_envelope);
  rep.heuristic_band = !rigorous_envelope && fit.sup > 0.0;
  if (rep.heuristic_band) {
    rep.notes.emplace_back("heuristic band bound");
  }

  const std::size_t n = plan.kgrid.size();
  std::vector<complex> values(n);
  std::vector<double> errs(n);
  rep.excluded_band_bound.assign(n, 0.0);
  rep.outer_tail_bound.assign(n, 0.0);
  rep.kernel_error.assign(n, 0.0);
  rep.quadrature_error.assign(n, 0.0);
  rep.band_error.assign(n, 0.0);
  rep.band_correction.assign(n, complex{});
  rep.status.assign(n, "ok");
  std::vector<std::string> jump_notes(n);

  parallel_for(n, plan.threads, [&](std::size_t i) {
    const double k = plan.kgrid[i];
    auto kernel = [&](double l) -> detail::KernelValue {
      if (plan.kernel_source == KernelSource::closed_form) {
        const complex v = plan.warp.closed_kernel(k, l);
        return {v, 1e-11 * std::abs(v)};
      }
      const auto s = transfer_kernel(plan.warp, k, l, kbudget, plan.kernel_options);
      return {s.value, s.total_error()};
    };
    try {
      // Core: mu <= |l| <= l_max.
      const double side_tol = 0.25 * plan.tolerance * two_pi;
      const auto pos = detail::core_integral(fh, kernel, 1.0, mu, l_max,
                                             plan.profile.freq_breakpoints,
                                             side_tol, plan.max_l_intervals);
      const auto neg = detail::core_integral(fh, kernel, -1.0, mu, l_max,
                                             plan.profile.freq_breakpoints,
                                             side_tol, plan.max_l_intervals);
      complex value = (pos.value + neg.value) / two_pi;
      rep.quadrature_error[i] = (pos.quad_error + neg.quad_error) / two_pi;
      rep.kernel_error[i] = (pos.kernel_error + neg.kernel_error) / two_pi;
      if (!pos.converged || !neg.converged) {
        rep.status[i] = "warning";
      }

      // Outer tail |l| > l_max, with |H| capped by the envelope when known
      // and by twice the sampled edge magnitude otherwise.
      double outer = 0.0;
      for (const double sgn : {1.0, -1.0}) {
        const double edge = std::abs(fh(sgn * l_max));
        if (edge == 0.0 && plan.profile.freq_decay.kind == DecayHint::Kind::compact) {
          continue;
        }
        const double tail_mass = plan.profile.freq_decay.tail_mass(edge, l_max);
        if (tail_mass == 0.0) {
          continue;
        }
        double cap = 0.0;
        if (rigorous_envelope) {
          cap = plan.warp.kernel_envelope(k, sgn * l_max);
        } else {
          const auto h = kernel(sgn * l_max);
          cap = 2.0 * (std::abs(h.value) + h.error);
        }
        outer += cap * tail_mass / two_pi;
      }
      rep.outer_tail_bound[i] = outer;

      // Band |l| < mu.
      double band_mass = 0.0;
      if (fit.sup > 0.0) {
        if (rigorous_envelope) {
          for (const double sgn : {1.0, -1.0}) {
            auto env = [&](double l) { return plan.warp.kernel_envelope(k, sgn * l); };
            const double x0 = 1e-12 * mu;
            // integral_0^x0 of the envelope, using K_0(x) < -ln(x/2).
            const double head = env(x0) * x0 * (1.0 + 1.0 / std::max(1.0, -std::log(0.5 * x0)));
            band_mass += detail::log_integral(env, x0, mu, 1e-14) + head;
          }
        } else {
          for (const double sgn : {1.0, -1.0}) {
            const auto h = kernel(sgn * mu);
            band_mass += mu * (std::abs(h.value) + h.error);
          }
        }
      }
      rep.excluded_band_bound[i] = fit.sup * band_mass / two_pi;
      double band_err = rep.excluded_band_bound[i];
      if (plan.band == BandTreatment::correct && fit.sup > 0.0) {
        const auto corr = detail::band_correction(
            plan.warp, fit, mu, k, 1e-3 * plan.tolerance, kbudget,
            plan.kernel_options);
        if (corr.applied) {
          rep.band_correction[i] = corr.value;
          value += corr.value;
          band_err = corr.error + fit.misfit * band_mass / two_pi;
        } else {
          jump_notes[i] = "band correction skipped at k=0 (f^ jumps at 0)";
        }
      }
      rep.band_error[i] = band_err;

      values[i] = value;
      errs[i] = rep.kernel_error[i] + rep.quadrature_error[i] + outer + band_err;
      if (!(errs[i] <= plan.tolerance) && rep.status[i] == "ok") {
        rep.status[i] = "warning";
      }
    } catch (const BudgetExhausted& e) {
      values[i] = complex{std::nan(""), std::nan("")};
      errs[i] = std::numeric_limits<double>::infinity();
      rep.status[i] = std::string("failed: ") + e.what();
    }
  });
  for (const auto& note : jump_notes) {
    if (!note.empty()) {
      rep.notes.push_back(note);
    }
  }
  rep.spectrum = Spectrum(plan.kgrid, std::move(values), std::move(errs));
  return rep;
}

/// (1/2pi) integral f^(l) e^{-ilt} dl by adaptive quadrature, with the
/// frequency range cut where the hinted tail falls below abs_tol / 10.
inline auto inverse_transform(const Profile& profile, double t,
                              double abs_tol = 1e-12) -> complex {
  if (!profile.freq_eval) {
    throw DomainError("profile has no frequency-domain evaluator");
  }
  const ComplexFn& fh = *profile.freq_eval;
  const double two_pi = 2.0 * std::numbers::pi;
  double L = 1.0;
  if (profile.freq_decay.kind == DecayHint::Kind::compact) {
    L = std::max(profile.freq_decay.parameter, 1e-300);
  } else {
    if (!profile.freq_decay.decays()) {
      throw DomainError("frequency profile needs a decay hint");
    }
    auto tail = [&](double x) {
      return (profile.freq_decay.tail_mass(std::abs(fh(x)), x) +
              profile.freq_decay.tail_mass(std::abs(fh(-x)), x)) /
             two_pi;
    };
    while (tail(L) > 0.1 * abs_tol && L < 1e8) {
      L *= 2.0;
    }
  }
  // Breakpoints at the hinted kinks and every period of e^{-ilt}.
  std::vector<double> cuts = profile.freq_breakpoints;
  const double step = std::min(1.0, std::numbers::pi / std::max(std::abs(t), 1e-300));
  for (double c = -L + step; c < L; c += step) {
    cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  auto integrand = [&](double l) {
    return fh(l) * complex{std::cos(l * t), -std::sin(l * t)};
  };
  quad::AdaptiveOptions opt{.abs_tol = 0.5 * abs_tol * two_pi, .rel_tol = 0.0,
                            .max_intervals = 200000};
  return quad::integrate_adaptive<complex>(integrand, -L, L, opt, cuts).value /
         two_pi;
}

/// max over tgrid of |f(t) - (1/2pi) integral f^(l) e^{-ilt} dl|.
inline auto inverse_check(const Profile& profile,
                          const std::vector<double>& tgrid,
                          double abs_tol = 1e-12) -> double {
  if (!profile.time_eval || !profile.freq_eval) {
    throw DomainError("inverse check needs both evaluators");
  }
  double worst = 0.0;
  for (const double t : tgrid) {
    worst = std::max(worst, std::abs(profile.f(t) - inverse_transform(profile, t, abs_tol)));
  }
  return worst;
}

}  // namespace warpft

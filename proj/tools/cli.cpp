#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "warpft/catalog.hpp"
#include "warpft/funcspace.hpp"
#include "warpft/oracle.hpp"
#include "warpft/oscillatory.hpp"
#include "warpft/parallel.hpp"
#include "warpft/transfer.hpp"

namespace warpft::cli {

namespace {

/// Raised for bad flag values detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KernelArgs {
  std::string warp;
  std::string k;
  std::string l;
  double tol = 1e-6;
  bool closed_form = false;
  double l_min = 1e-3;
  double m_max = 500.0;
  unsigned threads = 0;
};

struct TransformArgs {
  std::string profile;
  std::string warp;
  std::string k;
  double kmin = 0.25;
  double kmax = 4.0;
  int ksteps = 15;
  double l_exclusion = 1e-3;
  double l_max = 0.0;
  double tol = 1e-2;
  double kernel_tol = 0.0;
  std::string kernel = "numeric";
  std::string band = "correct";
  unsigned threads = 0;
};

struct CompareArgs {
  std::string against;
  std::string method = "transfer";
  double oracle_tol = 1e-10;
};

auto kgrid_of(const TransformArgs& a) -> std::vector<double> {
  if (!a.k.empty()) {
    return parse_grid(a.k);
  }
  if (a.ksteps < 1) {
    throw UsageError("--ksteps must be at least 1");
  }
  if (!(a.kmax > a.kmin)) {
    throw UsageError("--kmax must exceed --kmin");
  }
  return linspace(a.kmin, a.kmax, static_cast<std::size_t>(a.ksteps) + 1);
}

auto composition_of(const TransformArgs& a) -> catalog::Composition {
  std::optional<catalog::EntrySpec> warp;
  if (!a.warp.empty()) {
    warp = catalog::parse_entry_spec(a.warp);
  }
  return catalog::resolve_composition(catalog::parse_entry_spec(a.profile), warp);
}

auto plan_of(const TransformArgs& a, const catalog::Composition& comp)
    -> TransferPlan {
  TransferPlan plan;
  plan.warp = comp.warp;
  plan.profile = comp.profile;
  plan.kgrid = kgrid_of(a);
  plan.l_exclusion = a.l_exclusion;
  plan.l_max = a.l_max;
  plan.tolerance = a.tol;
  if (a.kernel_tol > 0.0) {
    plan.kernel_tol = a.kernel_tol;
  }
  if (a.kernel == "numeric") {
    plan.kernel_source = KernelSource::numeric;
  } else if (a.kernel == "closed") {
    plan.kernel_source = KernelSource::closed_form;
  } else {
    throw UsageError("--kernel must be 'numeric' or 'closed'");
  }
  if (a.band == "correct") {
    plan.band = BandTreatment::correct;
  } else if (a.band == "omit") {
    plan.band = BandTreatment::omit;
  } else {
    throw UsageError("--band must be 'correct' or 'omit'");
  }
  plan.threads = a.threads;
  return plan;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "k,re,im,err_estimate\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = s.err_estimates()[i];
    out << format_number(s.kgrid()[i]) << ',' << format_number(s.values()[i].real())
        << ',' << format_number(s.values()[i].imag()) << ','
        << (std::isfinite(e) ? format_number(e) : std::string("nan")) << '\n';
  }
}

void report_status(const TransferReport& rep, std::ostream& err) {
  for (std::size_t i = 0; i < rep.status.size(); ++i) {
    if (rep.status[i] != "ok") {
      err << "k=" << format_number(rep.spectrum.kgrid()[i]) << ": "
          << rep.status[i] << " (estimate "
          << format_number(rep.spectrum.err_estimates()[i]) << ")\n";
    }
  }
  for (const auto& note : rep.notes) {
    err << "note: " << note << '\n';
  }
}

auto transform_exit(const TransferReport& rep) -> int {
  return rep.failed() ? kNumericFailure : kSuccess;
}

// --- kernel -----------------------------------------------------------------

auto cmd_kernel(const KernelArgs& a, std::ostream& out, std::ostream& err) -> int {
  const Warp warp = catalog::make_warp_from(catalog::parse_entry_spec(a.warp));
  const auto ks = parse_grid(a.k);
  const auto ls = parse_grid(a.l);
  if (!(a.tol > 0.0)) {
    throw UsageError("--tol must be positive");
  }
  if (a.closed_form && !warp.has_closed_kernel()) {
    throw UsageError("warp '" + warp.label + "' has no closed-form kernel");
  }
  const auto cert = validate_warp(warp, -10.0, 10.0, 1024);
  if (!cert.valid) {
    throw HypothesisError("hypotheses not certified: " + cert.reason);
  }
  KernelOptions kopt;
  kopt.l_min = a.l_min;
  kopt.m_max = a.m_max;
  for (const double l : ls) {
    if (!(std::abs(l) >= kopt.l_min)) {
      throw UsageError("l inside exclusion radius: " + format_number(l));
    }
  }
  QuadratureBudget budget;
  budget.abs_tol = a.tol;

  struct Row {
    double k, l;
    complex value;
    double bound = 0.0;
    std::size_t panels = 0;
    bool failed = false;
  };
  std::vector<Row> rows;
  for (const double k : ks) {
    for (const double l : ls) {
      rows.push_back({k, l, {}, 0.0, 0, false});
    }
  }
  parallel_for(rows.size(), a.threads, [&](std::size_t i) {
    Row& r = rows[i];
    if (a.closed_form) {
      r.value = warp.closed_kernel(r.k, r.l);
      return;
    }
    try {
      const auto s = transfer_kernel(warp, r.k, r.l, budget, kopt);
      r.value = s.value;
      r.bound = s.tail_bound;
      r.panels = s.panels_used;
    } catch (const BudgetExhausted& e) {
      r.value = {std::nan(""), std::nan("")};
      r.bound = e.achieved_error();
      r.failed = true;
    }
  });
  out << "k,l,re,im,tail_bound,panels\n";
  bool failed = false;
  for (const auto& r : rows) {
    out << format_number(r.k) << ',' << format_number(r.l) << ','
        << format_number(r.value.real()) << ',' << format_number(r.value.imag())
        << ',' << (std::isfinite(r.bound) ? format_number(r.bound) : "nan") << ','
        << r.panels << '\n';
    if (r.failed) {
      err << "k=" << format_number(r.k) << " l=" << format_number(r.l)
          << ": kernel budget exhausted\n";
      failed = true;
    }
  }
  return failed ? kNumericFailure : kSuccess;
}

// --- transform ----------------------------------------------------------------

auto cmd_transform(const TransformArgs& a, std::ostream& out, std::ostream& err)
    -> int {
  const auto comp = composition_of(a);
  const auto rep = compose_spectrum(plan_of(a, comp));
  write_spectrum_csv(out, rep.spectrum);
  report_status(rep, err);
  return transform_exit(rep);
}

// --- compare ------------------------------------------------------------------

auto cmd_compare(const TransformArgs& a, const CompareArgs& c, std::ostream& out,
                 std::ostream& err) -> int {
  const auto comp = composition_of(a);
  if (c.against != "oracle" && c.against != "catalog") {
    throw UsageError("--against must be 'oracle' or 'catalog'");
  }
  if (c.method != "transfer" && c.method != "oracle") {
    throw UsageError("--method must be 'transfer' or 'oracle'");
  }
  if (c.method == "oracle" && c.against == "oracle") {
    throw UsageError("comparing the oracle with itself");
  }
  if (c.against == "catalog" && !comp.target) {
    throw UsageError("no catalog transform for " + comp.description);
  }
  const auto kgrid = kgrid_of(a);
  const std::size_t n = kgrid.size();

  std::vector<complex> values(n);
  std::vector<double> bounds(n, 0.0);
  std::vector<std::string> status(n, "ok");
  std::optional<TransferReport> rep;
  if (c.method == "transfer") {
    rep = compose_spectrum(plan_of(a, comp));
    values = rep->spectrum.values();
    bounds = rep->spectrum.err_estimates();
    status = rep->status;
    report_status(*rep, err);
  } else {
    parallel_for(n, a.threads, [&](std::size_t i) {
      const auto r = oracle::direct_ft_detailed(comp.profile, comp.warp, kgrid[i],
                                                c.oracle_tol);
      values[i] = r.value;
      bounds[i] = r.error;
    });
  }

  std::vector<complex> refs(n);
  std::vector<double> ref_err(n, 0.0);
  parallel_for(n, a.threads, [&](std::size_t i) {
    if (c.against == "catalog") {
      refs[i] = {(*comp.target)(kgrid[i]), 0.0};
      ref_err[i] = 1e-12 * std::abs(refs[i]);
    } else {
      const auto r = oracle::direct_ft_detailed(comp.profile, comp.warp, kgrid[i],
                                                c.oracle_tol);
      refs[i] = r.value;
      ref_err[i] = r.error;
    }
  });

  std::vector<double> zeros(n, 0.0);
  const auto diff = oracle::spectrum_compare(Spectrum(kgrid, values, zeros),
                                             Spectrum(kgrid, refs, zeros));
  bool pass = true;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(values[i] - refs[i]);
    const double bound = bounds[i] + ref_err[i];
    const bool ok = d <= bound && status[i] == "ok";
    pass = pass && ok;
    nlohmann::ordered_json row;
    row["k"] = kgrid[i];
    row["value"] = {values[i].real(), values[i].imag()};
    row["reference"] = {refs[i].real(), refs[i].imag()};
    row["abs_diff"] = d;
    row["bound"] = bound;
    if (rep) {
      row["outer_tail_bound"] = rep->outer_tail_bound[i];
      row["excluded_band_bound"] = rep->excluded_band_bound[i];
    }
    row["status"] = status[i];
    row["pass"] = ok;
    rows.push_back(row);
  }
  nlohmann::ordered_json report;
  report["max_abs"] = diff.max_abs;
  report["max_rel"] = diff.max_rel;
  report["worst_k"] = diff.worst_k;
  report["method"] = c.method;
  report["against"] = c.against;
  report["status"] = pass ? "pass" : "fail";
  report["rows"] = rows;
  out << report.dump(2) << '\n';
  return pass ? kSuccess : kNumericFailure;
}

// --- plotdata -----------------------------------------------------------------

auto svg_number(double v) -> std::string {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

auto tick_label(double v) -> std::string {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void write_svg(std::ostream& os, const Spectrum& s, const std::string& title) {
  constexpr double W = 640.0;
  constexpr double H = 400.0;
  constexpr double L = 60.0;
  constexpr double R = 20.0;
  constexpr double T = 30.0;
  constexpr double B = 40.0;
  const auto& k = s.kgrid();
  double kmin = k.front();
  double kmax = k.back();
  if (kmax == kmin) {
    kmax = kmin + 1.0;
  }
  double ymax = 0.0;
  std::vector<double> mag(s.size());
  std::vector<double> err(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    mag[i] = std::abs(s.values()[i]);
    err[i] = s.err_estimates()[i];
    if (std::isfinite(mag[i])) {
      ymax = std::max(ymax, mag[i] + (std::isfinite(err[i]) ? err[i] : 0.0));
    }
  }
  if (ymax <= 0.0) {
    ymax = 1.0;
  }
  ymax *= 1.05;
  auto px = [&](double x) { return L + (x - kmin) / (kmax - kmin) * (W - L - R); };
  auto py = [&](double y) {
    return H - B - std::clamp(y, 0.0, ymax) / ymax * (H - T - B);
  };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
     << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"14\">"
     << title << "</text>\n";
  // Axes and ticks.
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
     << "\" y2=\"" << H - B << "\"/>\n"
     << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
     << H - B << "\"/>\n</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = kmin + (kmax - kmin) * i / 5.0;
    const double yv = ymax * i / 5.0;
    os << "<text x=\"" << svg_number(px(xv)) << "\" y=\"" << H - B + 15
       << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    os << "<text x=\"" << L - 5 << "\" y=\"" << svg_number(py(yv) + 4)
       << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 5
     << "\" text-anchor=\"middle\">k</text>\n"
     << "<text x=\"15\" y=\"" << H / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << H / 2
     << ")\">|g(k)|</text>\n</g>\n";
  // Error band.
  os << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"none\" points=\"";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::isfinite(mag[i])) {
      const double e = std::isfinite(err[i]) ? err[i] : 0.0;
      os << svg_number(px(k[i])) << ',' << svg_number(py(mag[i] + e)) << ' ';
    }
  }
  for (std::size_t i = s.size(); i-- > 0;) {
    if (std::isfinite(mag[i])) {
      const double e = std::isfinite(err[i]) ? err[i] : 0.0;
      os << svg_number(px(k[i])) << ',' << svg_number(py(mag[i] - e)) << ' ';
    }
  }
  os << "\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::isfinite(mag[i])) {
      os << svg_number(px(k[i])) << ',' << svg_number(py(mag[i])) << ' ';
    }
  }
  os << "\"/>\n</svg>\n";
}

auto cmd_plotdata(const TransformArgs& a, const std::string& prefix,
                  std::ostream& out, std::ostream& err) -> int {
  if (prefix.empty()) {
    throw UsageError("--out must not be empty");
  }
  const auto comp = composition_of(a);
  const auto plan = plan_of(a, comp);
  const std::string csv_path = prefix + ".csv";
  const std::string svg_path = prefix + ".svg";
  std::ofstream csv(csv_path, std::ios::binary);
  std::ofstream svg(svg_path, std::ios::binary);
  if (!csv || !svg) {
    throw UsageError("cannot write to '" + prefix + "'");
  }
  const auto rep = compose_spectrum(plan);
  write_spectrum_csv(csv, rep.spectrum);
  write_svg(svg, rep.spectrum, comp.description);
  csv.close();
  svg.close();
  if (!csv || !svg) {
    throw UsageError("failed writing '" + prefix + "'");
  }
  report_status(rep, err);
  out << csv_path << '\n' << svg_path << '\n';
  return transform_exit(rep);
}

void add_transform_options(CLI::App* sub, TransformArgs& a) {
  sub->add_option("--profile", a.profile,
                  "Profile id with parameters, e.g. lorentzian:a=0.5")
      ->required();
  sub->add_option("--warp", a.warp, "Warp id with parameters, e.g. sinh:b=1");
  sub->add_option("--k", a.k, "Frequencies: list a,b,c or range lo:hi:steps");
  sub->add_option("--kmin", a.kmin, "Smallest frequency")->capture_default_str();
  sub->add_option("--kmax", a.kmax, "Largest frequency")->capture_default_str();
  sub->add_option("--ksteps", a.ksteps, "Number of grid intervals (rows - 1)")
      ->capture_default_str();
  sub->add_option("--l-exclusion", a.l_exclusion, "Band radius around l = 0")
      ->capture_default_str();
  sub->add_option("--l-max", a.l_max, "Outer truncation in l (0 = automatic)")
      ->capture_default_str();
  sub->add_option("--tol", a.tol, "Requested absolute error per frequency")
      ->capture_default_str();
  sub->add_option("--kernel-tol", a.kernel_tol,
                  "Numeric kernel tolerance (0 = derived from --tol)")
      ->capture_default_str();
  sub->add_option("--kernel", a.kernel, "Kernel source: numeric or closed")
      ->capture_default_str();
  sub->add_option("--band", a.band, "Band treatment: correct or omit")
      ->capture_default_str();
  sub->add_option("--threads", a.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

}  // namespace

auto format_number(double v) -> std::string {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

auto parse_grid(const std::string& text) -> std::vector<double> {
  auto number = [](const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && *first == ' ') {
      ++first;
    }
    while (last > first && last[-1] == ' ') {
      --last;
    }
    if (*first == '+') {
      ++first;
    }
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last || first == last ||
        !std::isfinite(v)) {
      throw UsageError("not a number: '" + s + "'");
    }
    return v;
  };
  if (text.empty()) {
    throw UsageError("empty grid");
  }
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
      parts.push_back(item);
    }
    if (parts.size() != 3) {
      throw UsageError("range must be lo:hi:steps");
    }
    const double lo = number(parts[0]);
    const double hi = number(parts[1]);
    const double steps = number(parts[2]);
    if (steps < 1.0 || steps != std::floor(steps) || !(hi > lo)) {
      throw UsageError("range needs hi > lo and a positive integer step count");
    }
    return linspace(lo, hi, static_cast<std::size_t>(steps) + 1);
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(number(item));
  }
  if (out.empty()) {
    throw UsageError("empty grid");
  }
  return out;
}

auto run(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) -> int {
  CLI::App app{"Fourier transforms of composed functions f(u(t))", "warpft"};
  app.set_config("--config", "", "TOML configuration file (flags take precedence)");
  app.require_subcommand(1);

  KernelArgs kargs;
  auto* kernel = app.add_subcommand("kernel", "Evaluate the transfer kernel H_u(k, l)");
  kernel->add_option("--warp", kargs.warp, "Warp id with parameters")->required();
  kernel->add_option("--k", kargs.k, "Frequencies: list or lo:hi:steps")->required();
  kernel->add_option("--l", kargs.l, "Dual frequencies: list or lo:hi:steps")
      ->required();
  kernel->add_option("--tol", kargs.tol, "Absolute tolerance")->capture_default_str();
  kernel->add_flag("--closed-form", kargs.closed_form,
                   "Use the catalog closed form instead of quadrature");
  kernel->add_option("--l-min", kargs.l_min, "Exclusion radius around l = 0")
      ->capture_default_str();
  kernel->add_option("--m-max", kargs.m_max, "Largest truncation point")
      ->capture_default_str();
  kernel->add_option("--threads", kargs.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();

  TransformArgs targs;
  auto* transform =
      app.add_subcommand("transform", "Spectrum of f(u(t)) through the transfer kernel");
  add_transform_options(transform, targs);

  CompareArgs cargs;
  auto* compare = app.add_subcommand(
      "compare", "Compare a computed spectrum with the oracle or the catalog");
  add_transform_options(compare, targs);
  compare->add_option("--against", cargs.against, "Reference: oracle or catalog")
      ->required();
  compare->add_option("--method", cargs.method, "Computation: transfer or oracle")
      ->capture_default_str();
  compare->add_option("--oracle-tol", cargs.oracle_tol, "Oracle absolute tolerance")
      ->capture_default_str();

  std::string prefix;
  auto* plot = app.add_subcommand("plotdata", "Write <prefix>.csv and <prefix>.svg");
  add_transform_options(plot, targs);
  plot->add_option("--out", prefix, "Output path prefix")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*kernel) {
      return cmd_kernel(kargs, out, err);
    }
    if (*transform) {
      return cmd_transform(targs, out, err);
    }
    if (*compare) {
      return cmd_compare(targs, cargs, out, err);
    }
    if (*plot) {
      return cmd_plotdata(targs, prefix, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace warpft::cli

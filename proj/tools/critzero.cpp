// critzero: command-line runner for the radial, perturbation, special-zero,
// toy-model and gap experiments.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "critzero/experiments.hpp"
#include "critzero/report.hpp"
#include "critzero/stats.hpp"
#include "critzero/toymodel.hpp"

namespace fs = std::filesystem;
using namespace critzero;

namespace {

struct Common {
  std::size_t n = 20;
  std::size_t matrices = 0;
  std::uint64_t seed = 0;
  std::size_t shards = 1;
  unsigned precision_bits = 0;
  std::size_t bins = 80;
  std::string out;
  std::string route = "logderiv";
};

void add_common(CLI::App* sub, Common& c, std::size_t default_n, std::size_t default_matrices) {
  c.n = default_n;
  c.matrices = default_matrices;
  sub->add_option("--n", c.n, "matrix dimension")->capture_default_str();
  if (default_matrices) sub->add_option("--matrices", c.matrices, "number of matrices")->capture_default_str();
  sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sub->add_option("--shards", c.shards, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--precision-bits", c.precision_bits, "coefficient-route precision, 0 for N+64")
      ->capture_default_str();
  sub->add_option("--bins", c.bins, "histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--out", c.out, "output directory (default $CRITZERO_OUT or .)");
}

fs::path out_dir(const Common& c) {
  fs::path dir = c.out;
  if (dir.empty()) {
    const char* env = std::getenv("CRITZERO_OUT");
    dir = env && *env ? env : ".";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

Route parse_route(const std::string& s) {
  if (s == "logderiv") return Route::logderiv;
  if (s == "coefficient") return Route::coefficient;
  throw Error(ErrorCode::invalid_argument, "unknown route '" + s + "'");
}

ExperimentConfig to_config(const Common& c) {
  ExperimentConfig cfg;
  cfg.n = c.n;
  cfg.num_matrices = c.matrices;
  cfg.master_seed = c.seed;
  cfg.shards = c.shards;
  cfg.precision_bits = c.precision_bits;
  cfg.bins = c.bins;
  cfg.route = parse_route(c.route);
  return cfg;
}

// Shard count is left out on purpose: it must not change any output byte.
ordered_json echo(const ExperimentConfig& cfg) {
  ordered_json j;
  j["N"] = cfg.n;
  j["M"] = cfg.num_matrices;
  j["seed"] = cfg.master_seed;
  j["bins"] = cfg.bins;
  j["route"] = route_name(cfg.route);
  if (cfg.route == Route::coefficient) j["precision_bits"] = cfg.resolved_precision();
  return j;
}

ReportFile values_report(std::string kind, ordered_json config, const std::vector<double>& v) {
  ReportFile r;
  r.kind = std::move(kind);
  r.config = std::move(config);
  r.columns = {"value"};
  r.rows.reserve(v.size());
  for (double x : v) r.rows.push_back({x});
  return r;
}

ReportFile points_report(std::string kind, ordered_json config, const std::vector<std::complex<double>>& pts) {
  ReportFile r;
  r.kind = std::move(kind);
  r.config = std::move(config);
  r.columns = {"re", "im"};
  r.rows.reserve(pts.size());
  for (const auto& z : pts) r.rows.push_back({z.real(), z.imag()});
  return r;
}

ordered_json events_json(const std::vector<ResampleEvent>& events) {
  ordered_json a = ordered_json::array();
  for (const auto& e : events) a.push_back({{"item", e.item}, {"attempt", e.attempt}, {"reason", e.reason}});
  return a;
}

ordered_json bimodality_json(const BimodalityCheck& b) {
  return {{"bimodal", b.bimodal},        {"first_mode", b.first_mode},   {"trough", b.trough},
          {"second_mode", b.second_mode}, {"first_peak", b.first_peak},  {"trough_depth", b.trough_depth},
          {"second_peak", b.second_peak}};
}

int cmd_radial(const Common& c) {
  const auto cfg = to_config(c);
  const auto dir = out_dir(c);
  const auto r = run_radial(cfg);
  const auto bh = histogram_with_overflow(r.values, 0.0, 8.0, cfg.bins);
  const auto fr = classify_regions(r);
  const auto config = echo(cfg);
  auto hist_cfg = config;
  hist_cfg["overflow"] = bh.overflow;

  const std::string stem = "radial_N" + std::to_string(cfg.n);
  write_report(values_report("radial", config, r.values), dir / (stem + ".csv"));
  write_report(histogram_report("radial_hist", hist_cfg, bh.histogram), dir / (stem + "_hist.csv"));

  ordered_json s;
  s["kind"] = "radial";
  s["seed"] = cfg.master_seed;
  s["config"] = config;
  s["counts"] = {{"values", r.values.size()},
                 {"in_histogram", bh.in_range},
                 {"overflow", bh.overflow},
                 {"resampled", r.events.size()}};
  s["fractions"] = {{"below_2", fr.inner}, {"from_2_to_4", fr.middle}, {"above_4", fr.deep}};
  // Too few values for octiles on tiny runs.
  s["octiles"] = r.values.size() >= 8 ? ordered_json(octiles(r.values)) : ordered_json(nullptr);
  if (cfg.bins >= 3) s["bimodality"] = bimodality_json(check_bimodal(bh.histogram, 3, 2.0, 4.0));
  s["resample_events"] = events_json(r.events);
  write_json(s, dir / "summary.json");
  return 0;
}

int cmd_perturb(const Common& c, std::size_t trials, double amplitude) {
  PerturbationConfig pc;
  pc.n = c.n;
  pc.trials = trials;
  pc.amplitude = amplitude;
  pc.master_seed = c.seed;
  pc.shards = c.shards;
  const auto dir = out_dir(c);
  const auto rep = run_perturbation(pc);
  const auto loc = perturbation_locality(rep);

  ordered_json config;
  config["N"] = pc.n;
  config["trials"] = pc.trials;
  config["seed"] = pc.master_seed;
  config["keep"] = {pc.keep_lo, pc.keep_hi};
  config["amplitude"] = pc.resolved_amplitude();

  const std::string stem = "perturb_N" + std::to_string(pc.n);
  ReportFile pts;
  pts.kind = "perturb";
  pts.config = config;
  pts.columns = {"trial", "re", "im"};
  pts.rows.reserve(rep.points.size());
  for (const auto& p : rep.points) pts.rows.push_back({static_cast<double>(p.trial), p.z.real(), p.z.imag()});
  write_report(pts, dir / (stem + ".csv"));

  // kind 0: base zero on the circle; kind 1: base derivative zero.
  ReportFile base;
  base.kind = "perturb_base";
  base.config = config;
  base.config["kind_codes"] = {{"0", "zero"}, {"1", "derivative_zero"}};
  base.columns = {"kind", "re", "im"};
  for (const auto& z : rep.base_spectrum.zeros()) base.rows.push_back({0.0, z.real(), z.imag()});
  for (const auto& z : rep.base_critical) base.rows.push_back({1.0, z.real(), z.imag()});
  write_report(base, dir / (stem + "_base.csv"));

  ordered_json s;
  s["kind"] = "perturb";
  s["seed"] = pc.master_seed;
  s["config"] = config;
  s["counts"] = {{"points", rep.points.size()},
                 {"near", loc.near_count},
                 {"deep", loc.deep_count},
                 {"resampled", rep.events.size()}};
  s["dispersion"] = {{"near_median", loc.near_median}, {"deep_median", loc.deep_median}, {"local", loc.local()}};
  s["resample_events"] = events_json(rep.events);
  write_json(s, dir / "summary.json");
  return 0;
}

// One spectrum with its derivative zeros and the target discs of its wide
// triples; radius is zero except on disc rows.
ReportFile special_example(ordered_json config, const EigenAngleSpectrum& s,
                           const std::vector<std::complex<double>>& critical) {
  ReportFile r;
  r.kind = "special_example";
  r.config = std::move(config);
  r.config["kind_codes"] = {{"0", "zero"}, {"1", "derivative_zero"}, {"2", "target_disc"}};
  r.columns = {"kind", "re", "im", "radius"};
  for (const auto& z : s.zeros()) r.rows.push_back({0.0, z.real(), z.imag(), 0.0});
  for (const auto& z : critical) r.rows.push_back({1.0, z.real(), z.imag(), 0.0});
  for (const auto& t : find_wide_triples(s)) {
    const auto d = target_disc(t, s.size());
    r.rows.push_back({2.0, d.center.real(), d.center.imag(), d.radius});
  }
  return r;
}

int cmd_special(const Common& c, const std::string& demo) {
  const auto dir = out_dir(c);
  SpecialZeroReport rep;
  ordered_json config;
  ReportFile example;
  if (demo.empty()) {
    const auto cfg = to_config(c);
    rep = run_special(cfg);
    config = echo(cfg);
    const auto first = sample_matrix(cfg.n, cfg.master_seed, 0, cfg.route, cfg.resolved_precision());
    example = special_example(config, first.spectrum, first.critical);
  } else {
    const auto kind = demo == "equal-spaced" ? DemoSpectrum::equal_spaced : DemoSpectrum::single_triple;
    const auto spectrum = demo_spectrum(kind, c.n);
    rep = special_from_spectrum(spectrum);
    config["N"] = c.n;
    config["demo"] = demo;
    config["bins"] = c.bins;
    std::vector<std::complex<double>> critical;
    if (rep.num_triples > 0) critical = derivative_zeros(spectrum.zeros(), Route::logderiv, 0);
    example = special_example(config, spectrum, critical);
  }

  const std::string stem = "special_N" + std::to_string(rep.n);
  write_report(points_report("special", config, rep.rotated_points), dir / (stem + ".csv"));
  write_report(values_report("special_radial", config, rep.radial_values), dir / (stem + "_radial.csv"));
  write_report(example, dir / (stem + "_example.csv"));
  std::size_t overflow = 0;
  if (!rep.radial_values.empty()) {
    const auto bh = histogram_with_overflow(rep.radial_values, 0.0, 8.0, c.bins);
    overflow = bh.overflow;
    auto hist_cfg = config;
    hist_cfg["overflow"] = overflow;
    write_report(histogram_report("special_hist", hist_cfg, bh.histogram), dir / (stem + "_hist.csv"));
  }

  ordered_json counts = ordered_json::array();
  for (const auto k : rep.counts) counts.push_back(k);
  ordered_json fractions;
  for (std::size_t k = 0; k < rep.counts.size(); ++k) fractions[std::to_string(k)] = rep.fraction(k);

  ordered_json s;
  s["kind"] = "special";
  if (demo.empty()) s["seed"] = c.seed;
  s["config"] = config;
  s["num_matrices"] = rep.num_matrices;
  s["num_triples"] = rep.num_triples;
  s["triples_per_matrix"] = rep.triples_per_matrix();
  s["counts"] = counts;
  s["fractions"] = fractions;
  s["points"] = rep.rotated_points.size();
  s["overflow"] = overflow;
  s["resample_events"] = events_json(rep.events);
  write_json(s, dir / "summary.json");
  return 0;
}

int cmd_gaps(const Common& c, std::size_t k) {
  const auto cfg = to_config(c);
  const auto dir = out_dir(c);
  const auto gaps = run_gaps(cfg, k);
  const auto pdf = estimate_gap_pdf(gaps, cfg.bins, 4.0 * static_cast<double>(k));
  auto config = echo(cfg);
  config.erase("route");
  config["k"] = k;
  auto hist_cfg = config;
  hist_cfg["overflow"] = pdf.overflow;
  write_report(histogram_report("gaps_hist", hist_cfg, pdf.histogram),
               dir / ("gaps_N" + std::to_string(cfg.n) + "_hist.csv"));

  ordered_json s;
  s["kind"] = "gaps";
  s["seed"] = cfg.master_seed;
  s["config"] = config;
  s["counts"] = {{"gaps", pdf.samples}, {"overflow", pdf.overflow}};
  s["mean"] = pdf.mean;
  write_json(s, dir / "summary.json");
  return 0;
}

std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) throw CLI::ValidationError("--sweep", "bad entry '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw CLI::ValidationError("--sweep", "empty list");
  return out;
}

struct ToyFlags {
  bool b0 = false;
  std::string sweep;
  std::size_t grid = 0;
  bool zeros = false;
};

int cmd_toy(const Common& c, const ToyFlags& t) {
  if (!t.b0 && t.sweep.empty() && t.grid == 0 && !t.zeros) {
    throw CLI::ValidationError("toy", "nothing to do: pass --b0, --sweep, --grid or --zeros");
  }
  const auto sweep = t.sweep.empty() ? std::vector<std::size_t>{} : parse_list(t.sweep);
  const double b0 = toy::solve_b0();
  if (t.b0) std::printf("%.17g\n", b0);
  if (t.sweep.empty() && t.grid == 0 && !t.zeros) return 0;

  const auto dir = out_dir(c);
  ordered_json s;
  s["kind"] = "toy";
  s["b0"] = b0;

  if (!sweep.empty()) {
    ReportFile r;
    r.kind = "toy_sweep";
    r.config = {{"n", sweep}};
    r.columns = {"n", "root", "predicted", "error", "scaled_error", "derivative_residual"};
    ordered_json rows = ordered_json::array();
    for (const auto n : sweep) {
      const auto res = toy::verify_proposition(n);
      const double nn = static_cast<double>(n);
      r.rows.push_back({nn, res.root, res.predicted, res.error, nn * nn * res.error, res.derivative_residual});
      rows.push_back({{"n", n}, {"error", res.error}, {"scaled_error", nn * nn * res.error}});
    }
    write_report(r, dir / "toy_sweep.csv");
    s["sweep"] = rows;
  }

  if (t.grid > 0) {
    const auto cp = toy::interior_grid(1.0, 3.0, t.grid);
    const auto cm = toy::interior_grid(-3.0, -1.0, t.grid);
    ReportFile r;
    r.kind = "toy_grid";
    r.config = {{"n", c.n}, {"grid", t.grid}};
    r.columns = {"c_plus", "c_minus", "re", "im", "distance", "within"};
    std::size_t within = 0;
    for (const double a : cp) {
      for (const double b : cm) {
        const auto res = toy::run_modified_toy(c.n, a, b);
        within += res.within;
        r.rows.push_back({a, b, res.root.real(), res.root.imag(), res.distance, res.within ? 1.0 : 0.0});
      }
    }
    write_report(r, dir / "toy_grid.csv");
    s["grid"] = {{"n", c.n}, {"cases", r.rows.size()}, {"within", within}};
  }

  if (t.zeros) {
    ReportFile r;
    r.kind = "toy_zeros";
    r.config = {{"n", c.n}, {"kind_codes", {{"0", "zero"}, {"1", "derivative_zero"}}}};
    r.columns = {"kind", "re", "im"};
    for (const auto& z : toy::fn_zeros(c.n)) r.rows.push_back({0.0, z.real(), z.imag()});
    for (const auto& z : toy::fn_derivative_zeros(c.n)) r.rows.push_back({1.0, z.real(), z.imag()});
    write_report(r, dir / ("toy_zeros_n" + std::to_string(c.n) + ".csv"));
  }
  write_json(s, dir / "summary.json");
  return 0;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

void report_error(std::string_view code, const std::string& message) {
  std::cerr << "error: code=" << code << " message=" << quoted(message) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critzero: zeros of derivatives of random unitary characteristic polynomials"};
  app.require_subcommand(1);

  Common radial, perturb, special, toy, gaps;
  std::size_t trials = 250;
  double amplitude = -1.0;
  std::string demo;
  ToyFlags toy_flags;
  std::size_t k = 1;

  auto* r = app.add_subcommand("radial", "rescaled radii N(1-|z'|) of derivative zeros");
  add_common(r, radial, 20, 100000);
  r->add_option("--route", radial.route, "logderiv or coefficient")
      ->check(CLI::IsMember({"logderiv", "coefficient"}))
      ->capture_default_str();

  auto* p = app.add_subcommand("perturb", "locality under perturbation of zeros outside the first quadrant");
  add_common(p, perturb, 40, 0);
  p->add_option("--trials", trials, "number of perturbed spectra")->check(CLI::PositiveNumber)->capture_default_str();
  p->add_option("--amplitude", amplitude, "shift half-width, negative for 2pi/N");

  auto* s = app.add_subcommand("special", "derivative zeros in the target discs of wide triples");
  add_common(s, special, 20, 10000);
  s->add_option("--route", special.route, "logderiv or coefficient")
      ->check(CLI::IsMember({"logderiv", "coefficient"}))
      ->capture_default_str();
  s->add_option("--demo", demo, "synthetic spectrum instead of Haar draws")
      ->check(CLI::IsMember({"equal-spaced", "single-triple"}));

  auto* t = app.add_subcommand("toy", "roots of unity with two zeros removed");
  add_common(t, toy, 30, 0);
  t->add_flag("--b0", toy_flags.b0, "print b0");
  t->add_option("--sweep", toy_flags.sweep, "comma-separated n list for the root-location check");
  t->add_option("--grid", toy_flags.grid, "c+- grid size per axis");
  t->add_flag("--zeros", toy_flags.zeros, "write zeros of f_n and f_n' at --n");

  auto* g = app.add_subcommand("gaps", "k-neighbor normalized gap distribution");
  add_common(g, gaps, 20, 10000);
  g->add_option("--k", k, "neighbor order")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
    if (r->parsed()) return cmd_radial(radial);
    if (p->parsed()) return cmd_perturb(perturb, trials, amplitude);
    if (s->parsed()) return cmd_special(special, demo);
    if (t->parsed()) return cmd_toy(toy, toy_flags);
    if (g->parsed()) return cmd_gaps(gaps, k);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return 2;
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::invalid_argument || e.code() == ErrorCode::invalid_dimension;
    report_error(code_name(e.code()), e.what());
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
  return 2;
}

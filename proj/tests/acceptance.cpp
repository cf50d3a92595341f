// Acceptance checks at the stated scales and tolerances. Prints one PASS or
// FAIL line per criterion; with an argument, runs only that criterion.
//
//   acceptance [name]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "critzero/experiments.hpp"
#include "critzero/matching.hpp"
#include "critzero/report.hpp"
#include "critzero/stats.hpp"
#include "critzero/toymodel.hpp"

using namespace critzero;

namespace {

constexpr std::uint64_t seed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

ExperimentConfig cfg(std::size_t n, std::size_t m) {
  ExperimentConfig c;
  c.n = n;
  c.num_matrices = m;
  c.master_seed = seed;
  c.shards = workers();
  return c;
}

Outcome bimodality() {
  const auto r = run_radial(cfg(20, 100000));
  const auto bh = histogram_with_overflow(r.values, 0.0, 8.0, 80);
  const auto b = check_bimodal(bh.histogram, 3, 2.0, 4.0);
  const bool ok = r.values.size() == 1900000 && b.bimodal && b.second_mode > 2.0 && b.second_mode < 4.0;
  return {ok, fmt("values=%zu modes at %.3f and %.3f, trough %.3f (%.4f / %.4f / %.4f), resampled=%zu",
                  r.values.size(), b.first_mode, b.second_mode, b.trough, b.first_peak, b.trough_depth,
                  b.second_peak, r.events.size())};
}

Outcome deep_zero_mass() {
  const auto r = run_radial(cfg(320, 2000));
  const auto f = classify_regions(r);
  return {within(f.deep, 0.25, 0.02),
          fmt("fraction above 4 = %.4f (target 0.25 +- 0.02), below 2 = %.4f, 2..4 = %.4f, resampled=%zu", f.deep,
              f.inner, f.middle, r.events.size())};
}

Outcome special_zeros() {
  const auto rep = run_special(cfg(20, 10000));
  const double tpm = rep.triples_per_matrix();
  const double f0 = rep.fraction(0), f1 = rep.fraction(1), f2 = rep.fraction(2);
  const bool a = within(tpm, 3.32, 0.15), b = within(f1, 0.9943, 0.003), c = within(f2, 0.0053, 0.002),
             d = within(f0, 0.0004, 0.0004);
  std::string counts;
  for (const auto k : rep.counts) counts += (counts.empty() ? "" : ",") + std::to_string(k);
  return {a && b && c && d,
          fmt("triples/matrix=%.4f [%s] one=%.5f [%s] two=%.5f [%s] none=%.5f [%s] counts={%s} triples=%zu", tpm,
              a ? "ok" : "out", f1, b ? "ok" : "out", f2, c ? "ok" : "out", f0, d ? "ok" : "out", counts.c_str(),
              rep.num_triples)};
}

Outcome perturbation() {
  PerturbationConfig pc;
  pc.master_seed = seed;
  pc.shards = workers();
  const auto rep = run_perturbation(pc);
  const auto loc = perturbation_locality(rep);
  const bool ok = rep.points.size() == 9750 && loc.local();
  return {ok, fmt("points=%zu near=%zu (median dispersion %.3g) deep=%zu (median dispersion %.3g) ratio=%.3g",
                  rep.points.size(), loc.near_count, loc.near_median, loc.deep_count, loc.deep_median,
                  loc.near_median / loc.deep_median)};
}

Outcome toy_values() {
  using namespace toy;
  const double b0 = solve_b0();
  const bool b0_ok = b0 >= 2.3565 && b0 < 2.3566;
  bool f0_ok = true;
  for (const std::size_t n : {4u, 10u, 100u, 1000u}) {
    f0_ok = f0_ok && eval_Fn_real<double>(n, 0.0) == -2.0 * std::cos(2.0 * std::numbers::pi / n);
  }
  const double f1 = eval_Fn_real<double>(100, 1.0), ref = 4.0 * std::numbers::pi * std::numbers::pi / 100.0;
  const bool f1_ok = std::abs(f1 - ref) <= 0.1 * ref;
  const auto f4 = build_fn<mp_real<128>>(4);
  const bool f4_ok = f4.degree() == 2 && to_double(abs(f4[0] + mp_complex<128>(1))) < 1e-35 &&
                     to_double(abs(f4[1])) < 1e-35 && f4[2] == mp_complex<128>(1);
  return {b0_ok && f0_ok && f1_ok && f4_ok,
          fmt("b0=%.10f F_n(0)=-2cos(2pi/n) %s, F_100(1)=%.6f vs %.6f, f_4 = x^2 - 1 %s (|c1| = %.1e)", b0,
              f0_ok ? "yes" : "no", f1, ref, f4_ok ? "yes" : "no", to_double(abs(f4[1])))};
}

Outcome proposition_rate() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> scaled;
  bool bounded = true;
  std::string detail;
  for (const std::size_t n : {40u, 80u, 160u, 320u}) {
    const auto r = toy::verify_proposition(n);
    const double nn = static_cast<double>(n);
    scaled.push_back(nn * nn * r.error);
    bounded = bounded && r.error <= 10.0 / (nn * nn);
    detail += fmt("n=%zu: n^2 err=%.4f ", n, nn * nn * r.error);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  const double band = *hi / *lo;
  return {bounded && band <= 4.0 && secs < 60.0, detail + fmt("band=%.3f time=%.1fs", band, secs)};
}

Outcome c_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cp = toy::interior_grid(1.0, 3.0, 5), cm = toy::interior_grid(-3.0, -1.0, 5);
  std::size_t pass = 0, total = 0;
  double worst = 0.0;
  for (const std::size_t n : {30u, 60u}) {
    for (const double a : cp) {
      for (const double b : cm) {
        const auto r = toy::run_modified_toy(n, a, b);
        pass += r.within;
        ++total;
        worst = std::max(worst, r.distance * static_cast<double>(n));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {pass == 50 && total == 50 && secs < 60.0,
          fmt("%zu/%zu within 0.8/n, worst n*distance=%.3f, time=%.1fs", pass, total, worst, secs)};
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto s = sample_matrix(40, seed, k, Route::logderiv, 0);
    const auto b = critical_points_coefficient(s.zeros, default_precision_bits(40));
    worst = std::max(worst, match_points(s.critical, b).max_distance);
  }
  return {worst < 1e-8, fmt("100 U(40) matrices, worst matched distance %.3e (bound 1e-8)", worst)};
}

Outcome invariants() {
  // Gauss-Lucas and gap sums on every matrix of two ensembles.
  double worst_gl = 0.0, worst_sum = 0.0;
  std::size_t roots = 0, events = 0;
  for (const auto [n, m] : {std::pair<std::size_t, std::size_t>{20, 2000}, {40, 500}, {320, 20}}) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto s = sample_matrix(n, seed, i, Route::logderiv, 0);
      events += s.events.size();
      for (const auto& z : s.critical) worst_gl = std::max(worst_gl, std::abs(z) - 1.0);
      roots += s.critical.size();
      double sum = 0.0;
      for (const double g : normalized_gaps(s.spectrum).gaps) sum += g;
      worst_sum = std::max(worst_sum, std::abs(sum - static_cast<double>(n)));
    }
  }
  const bool gl = worst_gl <= 1e-10, gaps = worst_sum <= 1e-9;

  // Shard invariance and determinism on rendered report bytes.
  auto render = [](std::size_t shards) {
    auto c = cfg(20, 3000);
    c.shards = shards;
    const auto r = run_radial(c);
    ReportFile f;
    f.kind = "radial";
    f.columns = {"value"};
    for (const double v : r.values) f.rows.push_back({v});
    auto sp = cfg(20, 1000);
    sp.shards = shards;
    const auto s = run_special(sp);
    ReportFile g;
    g.kind = "special";
    g.columns = {"re", "im"};
    for (const auto& z : s.rotated_points) g.rows.push_back({z.real(), z.imag()});
    return render_report(f) + render_report(g);
  };
  const auto one = render(1);
  const bool shards = render(2) == one && render(8) == one;
  const bool determinism = render(1) == one;
  return {gl && gaps && shards && determinism,
          fmt("Gauss-Lucas max(|z'|-1)=%.2e over %zu roots [%s], gap-sum error %.2e [%s], shards 1/2/8 %s, "
              "repeat %s, resampled=%zu",
              worst_gl, roots, gl ? "ok" : "out", worst_sum, gaps ? "ok" : "out",
              shards ? "byte-identical" : "DIFFER", determinism ? "byte-identical" : "DIFFER", events)};
}

Outcome haar_soundness() {
  constexpr std::size_t bins = 16;
  std::vector<double> counts(bins, 0.0);
  double gap_sum = 0.0;
  std::size_t gap_count = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const auto s = eigenvalues_unitary(haar_unitary(8, {seed, k}));
    for (const double a : s.angles()) {
      counts[std::min<std::size_t>(bins - 1, static_cast<std::size_t>(a / two_pi * bins))] += 1.0;
    }
    for (const double g : normalized_gaps(s).gaps) {
      gap_sum += g;
      ++gap_count;
    }
  }
  const double expected = 80000.0 / bins;
  double chi2 = 0.0;
  for (const double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const double crit = boost::math::quantile(boost::math::chi_squared(bins - 1), 0.999);
  const double mean_gap = gap_sum / static_cast<double>(gap_count);
  return {chi2 < crit && within(mean_gap, 1.0, 0.01),
          fmt("chi2=%.2f (0.1%% critical value %.2f), mean gap=%.6f", chi2, crit, mean_gap)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"bimodality", bimodality},
      {"deep_zero_mass", deep_zero_mass},
      {"special_zeros", special_zeros},
      {"perturbation", perturbation},
      {"toy_values", toy_values},
      {"proposition_rate", proposition_rate},
      {"c_sweep", c_sweep},
      {"oracle_equivalence", oracle_equivalence},
      {"invariants", invariants},
      {"haar_soundness", haar_soundness},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  bool any = false, ok = true;
  for (const auto& c : all) {
    if (!only.empty() && only != c.name) continue;
    any = true;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    ok = ok && o.pass;
  }
  if (!any) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return ok ? 0 : 1;
}

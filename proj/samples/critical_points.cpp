// Draws one Haar matrix in U(N) and prints its eigenangles and the rescaled
// radii N(1-|z'|) of the derivative zeros.
//
//   sample_critical_points [N] [seed]

#include <cstdio>
#include <cstdlib>

#include "critzero/experiments.hpp"

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 12;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;

  const auto s = critzero::sample_matrix(n, seed, 0, critzero::Route::logderiv, 0);
  std::printf("eigenangles:\n");
  for (const double a : s.spectrum.angles()) std::printf("  %.12f\n", a);
  std::printf("derivative zeros (re, im, N(1-|z'|)):\n");
  for (const auto& z : s.critical) {
    std::printf("  % .12f % .12f  %.6f\n", z.real(), z.imag(), critzero::rescaled_radius(z, n));
  }
  const auto triples = critzero::find_wide_triples(s.spectrum);
  std::printf("wide triples: %zu\n", triples.size());
}

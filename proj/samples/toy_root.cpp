// Real critical point of f_n against 1 - b0/n for a few n.

#include <cstdio>

#include "critzero/toymodel.hpp"

int main() {
  const double b0 = critzero::toy::solve_b0();
  std::printf("b0 = %.15f\n", b0);
  std::printf("%6s %22s %22s %12s\n", "n", "root", "1 - b0/n", "n^2 err");
  for (const std::size_t n : {20, 40, 80, 160}) {
    const auto r = critzero::toy::verify_proposition(n);
    std::printf("%6zu %22.17f %22.17f %12.6f\n", n, r.root, r.predicted, double(n * n) * r.error);
  }
}

// Full versus weak covering for the 2^(d-1) factorial design in [-1,1]^d:
// compares the exact covering radius with Monte Carlo quantiles of F(r).

#include <cstdio>

#include "hypercover/hypercover.hpp"

int main() {
  using namespace hypercover;
  const std::vector<double> gammas = {0.1, 0.01, 0.001};
  for (std::size_t d : {5, 10, 20}) {
    const auto st = factorial_study(d, gammas, 1'000'000, 2024, 10);
    std::printf("d=%zu  r_1=%.4f", d, st.r1_exact);
    for (std::size_t i = 0; i < gammas.size(); ++i)
      std::printf("  r_%.3f=%.4f (%.3f r_1)", 1.0 - gammas[i], st.quantiles[i].r_quantile, st.ratios[i]);
    std::printf("\n");
  }
}

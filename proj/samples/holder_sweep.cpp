// Sweep the empirical Holder constant of log Df across truncation radii for
// two exponents, one inside and one outside the feasible range.

#include <cstdio>
#include <memory>

#include "nilflow/holder.hpp"

using namespace nilflow;

int main() {
  ParamSet ps{0.4, 10.0, 10.0, 4.0 / 3.0};
  std::printf("%4s %8s %12s %12s %12s\n", "N", "alpha", "C", "within", "endpoints");
  for (int N : {4, 6, 8}) {
    auto fam = std::make_shared<IntervalFamily>(ps, N);
    Realization real = build_action(fam);
    for (double alpha : {0.40, 0.60}) {
      auto rep = holder_constant(real, Letter3::F, alpha);
      std::printf("%4d %8.2f %12.5f %12.5f %12.5f\n", N, alpha, rep.c, rep.within.c,
                  rep.endpoints.c);
    }
  }
  return 0;
}
